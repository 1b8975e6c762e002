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

// Stage-wise joint scheduler. Each round walks the ready pairs in a fixed
// two-level order and grows partial assignments with a beam; a pair may be
// passed over only when no candidate engine has a free slot in that branch,
// which makes the round work conserving and FIFO safe by construction.
//
// The beam uses nested retention: the kept set at width B contains the kept
// set at width B-1 as a prefix (level w may only adopt a child of the first
// w parents). Final score is therefore nondecreasing in B, and width 1 is
// exactly the greedy scheduler.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "aragog/engine.h"
#include "aragog/request.h"

namespace aragog {

struct SchedulerParams {
  int beam_width = 4;
};

struct ReadyPair {
  std::size_t request_index = 0;  // into the round's queue vector
  int agent = 0;
};

// FIFO across requests on (arrival, id); within a request, deeper stages
// first (more downstream work behind them), ties on declaration index.
std::vector<ReadyPair> two_level_order(const std::vector<const Request*>& queue);

struct AssignmentTriple {
  std::size_t request_index = 0;
  RequestId request = 0;
  int agent = 0;
  int model = 0;
};

struct PartialAssignment {
  std::vector<AssignmentTriple> triples;  // decision order
  std::vector<int> occupancy;             // hypothetical total slots per engine
  long skips = 0;
};

struct ScorePair {
  double utilization = 0.0;
  double flexibility = 1.0;
};

// Primary score: sum over engines of occupied slots times the engine weight.
// Tie break: mean over requests with at least one triple of
// |viable configs consistent with its triples| / |round-start viable|;
// an assignment touching no request scores flexibility 1.0.
ScorePair score_assignment(const PartialAssignment& partial,
                           const std::vector<EngineState>& engines,
                           const std::vector<const Request*>& queue);

struct Assignment {
  std::vector<AssignmentTriple> triples;
  std::vector<int> occupancy;
  double utilization = 0.0;
  double flexibility = 1.0;
  long skips = 0;
  std::size_t states_explored = 0;
};

Assignment beam_schedule(const std::vector<const Request*>& queue,
                         const std::vector<EngineState>& engines,
                         const SchedulerParams& params);

// Exhaustive search over the same decision tree (skip only when forced).
// Test oracle; throws ValidationError past the node cap.
Assignment brute_force_schedule(const std::vector<const Request*>& queue,
                                const std::vector<EngineState>& engines,
                                std::size_t state_cap = 1000000);

struct ApplyOutcome {
  std::vector<AssignmentTriple> applied;
  std::vector<AssignmentTriple> stale;  // engine already full at apply time
};

// Applies triples in decision order: occupies a slot until now +
// service_time(request, agent, model), updates the request, stamps dispatch.
// A triple whose engine has meanwhile filled up is dropped into stale.
ApplyOutcome apply_assignment(
    const Assignment& assignment, const std::vector<Request*>& queue,
    std::vector<EngineState>& engines, double now,
    const std::function<double(RequestId, int, int)>& service_time);

struct FairnessViolation {
  RequestId request = 0;
  int agent = 0;
};

// Replays the round's pair order against the chosen triples and reports every
// unassigned ready pair that still had a free candidate slot at its decision
// point. Empty result means the round was work conserving in FIFO order.
std::vector<FairnessViolation> audit_round_fairness(
    const std::vector<const Request*>& queue,
    const std::vector<EngineState>& engines, const Assignment& assignment);

}  // namespace aragog
