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

// End-to-end discrete-event simulation of one run: Poisson arrivals, a
// router lane producing per-request viable sets under the selected policy,
// event-driven scheduling rounds over shared engine pools, and a trace with
// per-request, per-round, and sampled occupancy records.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aragog/scenario.h"
#include "aragog/workload.h"

namespace aragog {

enum class RunMode { kDrain, kHorizon };

struct RunOptions {
  PolicyKind policy = PolicyKind::kAragog;
  RunMode mode = RunMode::kDrain;
  std::optional<double> arrival_rate;
  std::optional<std::uint64_t> seed;
  std::optional<int> beam_width;
  std::optional<std::size_t> num_requests;  // drain mode
  std::optional<double> horizon;            // horizon mode
};

struct RequestRecord {
  RequestId id = 0;
  double arrival = 0.0;
  double prediction_start = -1.0;
  double prediction_duration = 0.0;
  int router_evals = 0;
  bool prediction_truncated = false;
  int viable_count = 0;
  double first_dispatch = -1.0;
  double completion = -1.0;  // -1: not completed within the run
  std::vector<int> executed;  // model per canonical agent, -1 where not run
  bool accurate = false;      // executed configuration is in ground truth
  double static_cost = 0.0;   // of the executed configuration, completed only
};

struct RoundRecord {
  double time = 0.0;
  std::size_t queue_len = 0;
  std::size_t pairs = 0;
  std::size_t assigned = 0;
  long skips = 0;
  std::size_t states_explored = 0;
  double utilization = 0.0;
  double flexibility = 1.0;
  bool fairness_ok = true;
};

struct OccupancySample {
  double time = 0.0;
  std::vector<int> occupancy;  // per engine
  std::size_t in_system = 0;
};

struct RunTrace {
  std::string scenario_name;
  std::string policy;
  RunMode mode = RunMode::kDrain;
  double rate = 0.0;
  std::uint64_t seed = 0;
  int beam_width = 4;
  double horizon = -1.0;  // -1 in drain mode
  double end_time = 0.0;
  double realized_rate = 0.0;
  std::size_t offered = 0;
  std::size_t completed = 0;
  std::size_t fairness_violations = 0;
  std::size_t stale_drops = 0;

  std::vector<RequestRecord> requests;  // by id
  std::vector<RoundRecord> rounds;
  std::vector<OccupancySample> samples;

  // One JSON object per line: meta, then requests, rounds, samples.
  void write_jsonl(std::ostream& out) const;
};

RunTrace run_simulation(const Scenario& scenario, const RunOptions& options);

}  // namespace aragog
