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

// One-time per-request prediction of the accuracy-preserving configuration
// set. Chains cover the lattice from base to top; a binary search per chain
// finds the cheapest accurate rung under near-monotone labels; a verification
// pass re-checks every individual candidate so the final set never depends on
// monotonicity actually holding.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "aragog/router.h"
#include "aragog/workflow.h"

namespace aragog {

struct ViableSet {
  // Sorted by canonical index; always contains top.
  std::vector<Configuration> configs;

  bool contains(const Configuration& c) const;
};

struct ChainPlan {
  // Each chain runs base -> top through single +1 upgrades.
  std::vector<std::vector<Configuration>> chains;
  // True when the chains jointly cover every lattice element.
  bool exhaustive = false;
};

// Deterministic DFS from base, raising the earliest agent first. A maximal
// chain is emitted iff it covers an element no earlier chain covered.
// Coverage mode engages when the space has at most exhaustive_limit elements;
// larger spaces emit the first chain_cap chains instead (chain_cap <= 0 means
// 64).
ChainPlan build_chains(const ConfigSpace& space, int chain_cap = 0,
                       std::uint64_t exhaustive_limit = 4096);

// Smallest index in [lo, hi) whose verdict is true, assuming verdicts are
// monotone (false* true*); hi when none is. The verdict callback may return
// nullopt to abort (budget exhausted), propagated as nullopt. Under
// non-monotone verdicts the result is still some index consistent with a
// monotone completion of the answers actually seen.
std::optional<std::size_t> find_chain_boundary(
    const std::vector<Configuration>& chain,
    const std::function<std::optional<bool>(const Configuration&)>& verdict,
    std::size_t lo, std::size_t hi);

// Convenience overload over a router: no budget, whole chain.
std::size_t find_chain_boundary(const std::vector<Configuration>& chain,
                                const RouterBackend& router, RequestId request);

struct PredictorParams {
  int chain_cap = 0;  // <= 0: default
  std::uint64_t exhaustive_limit = 4096;
};

struct PredictionResult {
  ViableSet viable;
  int search_evals = 0;   // charged during chain searches
  int verify_evals = 0;   // charged during the verification pass
  double router_time = 0.0;
  bool truncated = false;  // budget ran out before the full sweep

  int router_eval_count() const { return search_evals + verify_evals; }
};

class ConfigPredictor {
 public:
  ConfigPredictor(const ConfigSpace& space, const RouterBackend& router,
                  PredictorParams params = {});

  // Budget is in seconds of router time; infinity means unbounded. An
  // evaluation is only issued while spent + eval_latency <= budget, so a zero
  // budget yields {top} at zero cost. Every unique (request, configuration)
  // pair is charged at most once; top is never charged.
  PredictionResult predict(RequestId request, double budget) const;

  const ChainPlan& chains() const { return plan_; }
  const ConfigSpace& space() const { return *space_; }

 private:
  const ConfigSpace* space_;
  const RouterBackend* router_;
  ChainPlan plan_;
};

}  // namespace aragog
