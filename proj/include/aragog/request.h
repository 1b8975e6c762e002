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

#pragma once

#include <vector>

#include "aragog/workflow.h"

namespace aragog {

enum class StageState { kPending, kReady, kInFlight, kDone };

// One in-system request. The viable list shrinks as stages dispatch: after
// agent a runs model m only configurations with c[a] == m survive, so every
// completed request has executed some single configuration from the original
// set.
struct Request {
  RequestId id = 0;
  double arrival = 0.0;
  const WorkflowGraph* graph = nullptr;

  std::vector<Configuration> viable;
  std::vector<StageState> stages;        // by canonical position
  std::vector<int> executed_model;       // -1 until the stage dispatches
  std::vector<double> dispatch_time;     // -1 until set
  std::vector<double> complete_time;     // -1 until set

  // Prediction accounting, filled by the simulation.
  double prediction_start = -1.0;
  double prediction_duration = 0.0;
  int router_evals = 0;
  bool prediction_truncated = false;

  double completion = -1.0;

  static Request make(RequestId id, double arrival, const WorkflowGraph& graph,
                      std::vector<Configuration> viable);

  // Canonical positions that are ready and not yet dispatched, ascending.
  std::vector<int> ready_agents() const;

  // Distinct models the current viable set allows for this agent, ascending.
  std::vector<int> candidate_models(int agent) const;

  // Filters viable to configurations choosing model on agent, records the
  // execution, marks the stage in flight. Throws when the model is not a
  // candidate or the stage is not ready.
  void mark_dispatched(int agent, int model, double now);

  // Marks done and promotes successors whose predecessors are all done.
  void mark_complete(int agent, double now);

  bool finished() const;
};

}  // namespace aragog
