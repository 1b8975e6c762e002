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

// Arrival processes and the baseline selection policies that Aragog is
// compared against. All baselines pick from ground truth; what varies is the
// granularity (whole workflow vs per input) and the cost signal (static cost
// vs estimated completion under current load).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aragog/accuracy.h"
#include "aragog/engine.h"
#include "aragog/workflow.h"

namespace aragog {

// Poisson process: i.i.d. exponential gaps, pure in (seed).
std::vector<double> poisson_arrivals(double rate, std::size_t count,
                                     std::uint64_t seed);

// Arrivals strictly before the horizon.
std::vector<double> poisson_arrivals_until(double rate, double horizon,
                                           std::uint64_t seed);

enum class PolicyKind {
  kAragog,
  kPerWorkflow,
  kPerInputStatic,
  kPerInputRuntimeCost,
};

PolicyKind parse_policy(const std::string& name);
std::string policy_name(PolicyKind kind);
const std::vector<PolicyKind>& all_policies();

// One fixed configuration for every request: the cheapest one whose accurate
// fraction over the sample reaches the top configuration's (1 by definition)
// minus tolerance. Ties on static cost resolve to the smaller canonical
// index. Requires an enumerable space.
Configuration select_per_workflow_config(const std::vector<AccurateSet>& sample,
                                         const ConfigSpace& space,
                                         double tolerance = 0.0);

// Engine load snapshot for the runtime-cost estimator, frozen at the
// request's arrival. queued_ahead counts ready undispatched stages whose
// candidate set includes the tier; requests still inside the router lane are
// not counted (their configuration is unknown at that instant).
struct RuntimeCostContext {
  std::vector<int> occupancy;     // per model tier
  std::vector<int> queued_ahead;  // per model tier
  std::vector<int> slots;         // per model tier
  const ServiceTimeModel* service = nullptr;
};

// Sum over stages of (load / slots) * mean service + mean service.
double estimate_completion(const RuntimeCostContext& ctx,
                           const Configuration& config);

// Per-input choice from the request's ground-truth accurate set.
// kPerInputStatic: minimum static cost (ties: canonical index).
// kPerInputRuntimeCost: minimum estimated completion (ties: static cost,
// then canonical index); ctx must be provided.
Configuration select_per_input_config(const AccurateSet& accurate,
                                      const ConfigSpace& space, PolicyKind kind,
                                      const RuntimeCostContext* ctx = nullptr);

}  // namespace aragog
