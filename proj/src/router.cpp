/* Copyright 2026 The Aragog Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "aragog/router.h"

namespace aragog {

namespace {

std::uint64_t hash_config(const Configuration& config) {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (int m : config.models) {
    h = rng::mix({h, static_cast<std::uint64_t>(m)});
  }
  return h;
}

}  // namespace

OracleRouter::OracleRouter(const AccuracyTable& table, double eval_latency)
    : table_(&table), eval_latency_(eval_latency) {
  if (eval_latency < 0) throw ValidationError("router eval latency < 0");
}

bool OracleRouter::evaluate(RequestId request, const Configuration& config) const {
  return table_->accurate(request, config);
}

NoisyRouter::NoisyRouter(const RouterBackend& inner, double false_positive_rate,
                         double false_negative_rate, std::uint64_t seed)
    : inner_(&inner), fp_(false_positive_rate), fn_(false_negative_rate),
      seed_(seed) {
  if (fp_ < 0 || fp_ > 1 || fn_ < 0 || fn_ > 1) {
    throw ValidationError("router error rates outside [0, 1]");
  }
}

bool NoisyRouter::evaluate(RequestId request, const Configuration& config) const {
  bool truth = inner_->evaluate(request, config);
  // One fixed uniform per (request, config): repeated queries agree.
  std::uint64_t key =
      rng::mix({seed_, rng::kRouterSalt, request, hash_config(config)});
  double u = static_cast<double>(key >> 11) * 0x1.0p-53;
  return truth ? (u >= fn_) : (u < fp_);
}

PredictorBudget::PredictorBudget(double min_budget, double alpha)
    : min_budget_(min_budget), alpha_(alpha) {
  if (min_budget < 0) throw ValidationError("min_budget < 0");
  if (alpha <= 0 || alpha > 1) throw ValidationError("ema alpha outside (0, 1]");
}

void PredictorBudget::observe_queue_delay(double delay) {
  if (delay < 0) throw ValidationError("queue delay < 0");
  ema_ = alpha_ * delay + (1.0 - alpha_) * ema_;
}

}  // namespace aragog
