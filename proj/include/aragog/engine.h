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

// Engine pools, lognormal service times, and the discrete event queue.
// Virtual time is double seconds throughout.

#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "aragog/errors.h"
#include "aragog/rng.h"
#include "aragog/workflow.h"

namespace aragog {

struct InFlightStage {
  RequestId request = 0;
  int agent = 0;
  double complete_at = 0.0;
};

// One slot pool serving a single model tier.
struct EngineState {
  int model = 0;
  int slots = 0;
  double weight = 1.0;  // utilization contribution of one busy slot
  std::vector<InFlightStage> in_flight;

  int occupancy() const { return static_cast<int>(in_flight.size()); }
  int slots_available() const { return slots - occupancy(); }

  // Occupies one slot until complete_at. A full engine is a scheduler
  // contract breach, not user error.
  void submit_stage(RequestId request, int agent, double complete_at);

  // Removes and returns the matching stage.
  InFlightStage release_stage(RequestId request, int agent);
};

// Shifted lognormal: floor + exp(mu + sigma * z). Parameters are per model
// tier; draws are pure in (seed, request, agent, model).
class ServiceTimeModel {
 public:
  struct Params {
    double mu = 0.0;
    double sigma = 0.0;
    double floor = 0.0;
  };

  explicit ServiceTimeModel(std::vector<Params> per_model);

  double sample(std::uint64_t seed, RequestId request, int agent,
                int model) const;
  double mean(int model) const;
  const Params& params(int model) const;
  int num_models() const { return static_cast<int>(per_model_.size()); }

 private:
  std::vector<Params> per_model_;
};

// Dispatch priority for simultaneous events. Completions land before the
// prediction and arrival bookkeeping at the same instant, and the scheduling
// round runs last so it observes everything that happened at that time.
enum class EventType : int {
  kStageComplete = 0,
  kPredictionComplete = 1,
  kArrival = 2,
  kRoundTrigger = 3,
};

struct Event {
  double time = 0.0;
  EventType type = EventType::kRoundTrigger;
  RequestId request = 0;
  int agent = 0;
  int engine = 0;
  std::uint64_t seq = 0;  // assigned by the queue; final tie break
};

class EventQueue {
 public:
  void push(Event event);
  Event pop();
  bool empty() const { return heap_.empty(); }
  const Event& top() const { return heap_.top(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.type != b.type) return static_cast<int>(a.type) > static_cast<int>(b.type);
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace aragog
