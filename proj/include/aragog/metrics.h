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

// Run summaries, CSV emission, rate sweeps, policy comparisons, and the
// figure harnesses. Sweeps fan out over a worker pool; results are keyed by
// task index, so output bytes do not depend on the pool size.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aragog/scenario.h"
#include "aragog/simulation.h"
#include "aragog/workload.h"

namespace aragog {

// Nearest-rank percentile of an unsorted sample; throws on empty input.
double percentile_nearest_rank(std::vector<double> values, double pct);

struct RunReport {
  std::string scenario;
  std::string policy;
  std::string mode;
  double rate = 0.0;
  std::uint64_t seed = 0;
  bool aggregate = false;  // mean over seeds; the seed column prints "mean"
  double horizon = -1.0;
  std::size_t offered = 0;
  std::size_t completed = 0;
  double realized_rate = 0.0;
  double throughput = 0.0;
  double mean_latency = 0.0;
  double p25 = 0.0, p50 = 0.0, p90 = 0.0, p95 = 0.0;
  double mean_queue_delay = 0.0;
  double served_accuracy = 0.0;
  double mean_router_time = 0.0;
  double router_share = 0.0;  // mean prediction time / mean end-to-end latency
  double mean_router_evals = 0.0;
  double mean_viable = 0.0;
  double mean_static_cost = 0.0;
  double mean_in_system = 0.0;
  std::size_t fairness_violations = 0;
  std::size_t stale_drops = 0;
};

RunReport summarize_run(const RunTrace& trace);

// Full-precision doubles; empty statistics print NA.
std::string report_csv_header();
std::string report_csv_row(const RunReport& report);
void write_reports_csv(const std::string& path,
                       const std::vector<RunReport>& reports);

struct SweepPoint {
  double rate = 0.0;
  RunReport mean;
  std::vector<RunReport> per_seed;
};

struct SweepResult {
  std::string policy;
  std::vector<SweepPoint> points;  // rates strictly increasing
  double saturation = 0.0;         // max mean throughput across rates
};

// Hard-horizon runs over the rate x seed grid.
SweepResult run_sweep(const Scenario& scenario, PolicyKind policy,
                      const std::vector<double>& rates,
                      const std::vector<std::uint64_t>& seeds, double horizon,
                      std::optional<int> beam_width, int jobs);

struct CompareResult {
  std::vector<SweepResult> policies;  // all_policies() order

  const SweepResult& find(PolicyKind kind) const;
  double saturation_ratio(PolicyKind a, PolicyKind b) const;
};

CompareResult compare_policies(const Scenario& scenario,
                               const std::vector<double>& rates,
                               const std::vector<std::uint64_t>& seeds,
                               double horizon, int jobs);

// Prediction cost against exhaustive evaluation on small random instances.
struct PruningRow {
  std::size_t instance = 0;
  int agents = 0;
  int tiers = 0;
  std::uint64_t space_size = 0;
  int evals = 0;
  double reduction = 0.0;  // 1 - evals / space_size
};
std::vector<PruningRow> figure_pruning(std::size_t instances,
                                       std::uint64_t seed);
std::string pruning_csv(const std::vector<PruningRow>& rows);

// Beam against greedy and the exhaustive oracle on random snapshots.
struct BeamQualityRow {
  std::size_t snapshot = 0;
  double beam = 0.0;
  double greedy = 0.0;
  double brute = 0.0;
};
std::vector<BeamQualityRow> figure_beam_quality(std::size_t snapshots,
                                                std::uint64_t seed,
                                                int beam_width,
                                                std::size_t brute_cap);
std::string beam_quality_csv(const std::vector<BeamQualityRow>& rows);

// Saturation throughput per beam width on the scenario's sweep grid.
struct BeamSizeRow {
  int width = 0;
  double saturation = 0.0;
};
std::vector<BeamSizeRow> figure_beam_size(const Scenario& scenario,
                                          const std::vector<int>& widths,
                                          int jobs);
std::string beam_size_csv(const std::vector<BeamSizeRow>& rows);

int default_jobs();

// Runs fn(0..count-1) on up to jobs threads. The first exception wins and is
// rethrown after all workers finish.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace aragog
