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

// Random mid-flight scheduler states for beam quality studies: a handful of
// requests with mixed progress and viable sets over partially busy engine
// pools, sized so the exhaustive oracle stays tractable.

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "aragog/engine.h"
#include "aragog/request.h"
#include "aragog/workflow.h"

namespace aragog {

// Owns everything the requests point into; not movable, hence the
// unique_ptr factory.
struct SchedulerSnapshot {
  SchedulerSnapshot(WorkflowGraph g, ModelCatalog c)
      : graph(std::move(g)), catalog(std::move(c)) {}
  SchedulerSnapshot(const SchedulerSnapshot&) = delete;
  SchedulerSnapshot& operator=(const SchedulerSnapshot&) = delete;

  WorkflowGraph graph;
  ModelCatalog catalog;
  std::vector<EngineState> engines;
  std::vector<Request> requests;

  std::vector<const Request*> queue() const;
};

std::unique_ptr<SchedulerSnapshot> generate_snapshot(std::uint64_t seed,
                                                     std::uint64_t index);

}  // namespace aragog
