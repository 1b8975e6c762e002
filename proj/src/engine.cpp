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

#include "aragog/engine.h"

#include <cmath>
#include <stdexcept>

namespace aragog {

void EngineState::submit_stage(RequestId request, int agent, double complete_at) {
  if (slots_available() <= 0) {
    throw std::logic_error("submit_stage on a full engine");
  }
  in_flight.push_back(InFlightStage{request, agent, complete_at});
}

InFlightStage EngineState::release_stage(RequestId request, int agent) {
  for (std::size_t i = 0; i < in_flight.size(); ++i) {
    if (in_flight[i].request == request && in_flight[i].agent == agent) {
      InFlightStage s = in_flight[i];
      in_flight.erase(in_flight.begin() + static_cast<std::ptrdiff_t>(i));
      return s;
    }
  }
  throw std::logic_error("release_stage for a stage not in flight");
}

ServiceTimeModel::ServiceTimeModel(std::vector<Params> per_model)
    : per_model_(std::move(per_model)) {
  if (per_model_.empty()) {
    throw ValidationError("service model needs at least one tier");
  }
  for (const Params& p : per_model_) {
    if (p.sigma < 0 || p.floor < 0) {
      throw ValidationError("service sigma and floor must be nonnegative");
    }
  }
}

double ServiceTimeModel::sample(std::uint64_t seed, RequestId request, int agent,
                                int model) const {
  const Params& p = params(model);
  rng::Stream stream(rng::mix({seed, rng::kServiceSalt, request,
                               static_cast<std::uint64_t>(agent),
                               static_cast<std::uint64_t>(model)}));
  return p.floor + std::exp(p.mu + p.sigma * stream.next_normal());
}

double ServiceTimeModel::mean(int model) const {
  const Params& p = params(model);
  return p.floor + std::exp(p.mu + 0.5 * p.sigma * p.sigma);
}

const ServiceTimeModel::Params& ServiceTimeModel::params(int model) const {
  if (model < 0 || model >= num_models()) {
    throw ValidationError("service model tier out of range");
  }
  return per_model_[static_cast<std::size_t>(model)];
}

void EventQueue::push(Event event) {
  event.seq = next_seq_++;
  heap_.push(event);
}

Event EventQueue::pop() {
  Event e = heap_.top();
  heap_.pop();
  return e;
}

}  // namespace aragog
