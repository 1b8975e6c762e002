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

// Binary accuracy routers and the prediction time budget.
//
// A router answers "would configuration c serve request r accurately". The
// oracle reads ground truth; the noisy wrapper flips verdicts with fixed
// false-positive and false-negative probabilities, deterministically per
// (request, configuration) pair.

#pragma once

#include <cstdint>

#include "aragog/accuracy.h"
#include "aragog/rng.h"
#include "aragog/workflow.h"

namespace aragog {

class RouterBackend {
 public:
  virtual ~RouterBackend() = default;

  virtual bool evaluate(RequestId request, const Configuration& config) const = 0;

  // Wall-clock charge per evaluation, seconds.
  virtual double eval_latency() const = 0;
};

class OracleRouter : public RouterBackend {
 public:
  OracleRouter(const AccuracyTable& table, double eval_latency);

  bool evaluate(RequestId request, const Configuration& config) const override;
  double eval_latency() const override { return eval_latency_; }

 private:
  const AccuracyTable* table_;
  double eval_latency_;
};

// Wraps any router. With fp = 0 a true verdict implies the inner verdict was
// true, so downstream sets only shrink relative to the inner router's.
class NoisyRouter : public RouterBackend {
 public:
  NoisyRouter(const RouterBackend& inner, double false_positive_rate,
              double false_negative_rate, std::uint64_t seed);

  bool evaluate(RequestId request, const Configuration& config) const override;
  double eval_latency() const override { return inner_->eval_latency(); }

 private:
  const RouterBackend* inner_;
  double fp_;
  double fn_;
  std::uint64_t seed_;
};

// Exponential moving average of queueing delay, feeding the per-request
// prediction budget. Budget never drops below min_budget so prediction can
// make progress even on an idle system with zero observed delay.
class PredictorBudget {
 public:
  PredictorBudget(double min_budget, double alpha = 0.2);

  void observe_queue_delay(double delay);
  double ema() const { return ema_; }
  double budget() const { return ema_ > min_budget_ ? ema_ : min_budget_; }

 private:
  double min_budget_;
  double alpha_;
  double ema_ = 0.0;
};

}  // namespace aragog
