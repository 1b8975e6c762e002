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

#include "aragog/request.h"

#include <algorithm>

#include "aragog/errors.h"

namespace aragog {

Request Request::make(RequestId id, double arrival, const WorkflowGraph& graph,
                      std::vector<Configuration> viable) {
  if (viable.empty()) {
    throw ValidationError("request needs a nonempty viable set");
  }
  for (const Configuration& c : viable) {
    if (static_cast<int>(c.models.size()) != graph.num_agents()) {
      throw ValidationError("viable configuration length mismatch");
    }
  }
  Request r;
  r.id = id;
  r.arrival = arrival;
  r.graph = &graph;
  r.viable = std::move(viable);
  const std::size_t n = static_cast<std::size_t>(graph.num_agents());
  r.stages.assign(n, StageState::kPending);
  r.executed_model.assign(n, -1);
  r.dispatch_time.assign(n, -1.0);
  r.complete_time.assign(n, -1.0);
  for (int p = 0; p < graph.num_agents(); ++p) {
    if (graph.predecessors(p).empty()) {
      r.stages[static_cast<std::size_t>(p)] = StageState::kReady;
    }
  }
  return r;
}

std::vector<int> Request::ready_agents() const {
  std::vector<int> out;
  for (std::size_t p = 0; p < stages.size(); ++p) {
    if (stages[p] == StageState::kReady) out.push_back(static_cast<int>(p));
  }
  return out;
}

std::vector<int> Request::candidate_models(int agent) const {
  std::vector<int> models;
  for (const Configuration& c : viable) {
    models.push_back(c.models[static_cast<std::size_t>(agent)]);
  }
  std::sort(models.begin(), models.end());
  models.erase(std::unique(models.begin(), models.end()), models.end());
  return models;
}

void Request::mark_dispatched(int agent, int model, double now) {
  std::size_t a = static_cast<std::size_t>(agent);
  if (a >= stages.size() || stages[a] != StageState::kReady) {
    throw ValidationError("dispatch of a stage that is not ready");
  }
  std::vector<Configuration> kept;
  for (Configuration& c : viable) {
    if (c.models[a] == model) kept.push_back(std::move(c));
  }
  if (kept.empty()) {
    throw ValidationError("dispatched model is not a viable candidate");
  }
  viable = std::move(kept);
  stages[a] = StageState::kInFlight;
  executed_model[a] = model;
  dispatch_time[a] = now;
}

void Request::mark_complete(int agent, double now) {
  std::size_t a = static_cast<std::size_t>(agent);
  if (a >= stages.size() || stages[a] != StageState::kInFlight) {
    throw ValidationError("completion of a stage that is not in flight");
  }
  stages[a] = StageState::kDone;
  complete_time[a] = now;
  for (int s : graph->successors(agent)) {
    if (stages[static_cast<std::size_t>(s)] != StageState::kPending) continue;
    bool all_done = true;
    for (int p : graph->predecessors(s)) {
      if (stages[static_cast<std::size_t>(p)] != StageState::kDone) {
        all_done = false;
        break;
      }
    }
    if (all_done) stages[static_cast<std::size_t>(s)] = StageState::kReady;
  }
  if (finished()) completion = now;
}

bool Request::finished() const {
  return std::all_of(stages.begin(), stages.end(),
                     [](StageState s) { return s == StageState::kDone; });
}

}  // namespace aragog
