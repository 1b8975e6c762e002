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

#include "aragog/metrics.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "aragog/accuracy.h"
#include "aragog/predictor.h"
#include "aragog/scheduler.h"
#include "aragog/snapshots.h"

namespace aragog {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

double percentile_nearest_rank(std::vector<double> values, double pct) {
  if (values.empty()) throw ValidationError("percentile of an empty sample");
  if (pct <= 0 || pct > 100) throw ValidationError("percentile outside (0, 100]");
  std::sort(values.begin(), values.end());
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(pct / 100.0 * static_cast<double>(values.size())));
  if (rank == 0) rank = 1;
  return values[rank - 1];
}

RunReport summarize_run(const RunTrace& trace) {
  RunReport r;
  r.scenario = trace.scenario_name;
  r.policy = trace.policy;
  r.mode = trace.mode == RunMode::kDrain ? "drain" : "horizon";
  r.rate = trace.rate;
  r.seed = trace.seed;
  r.horizon = trace.horizon;
  r.offered = trace.offered;
  r.completed = trace.completed;
  r.realized_rate = trace.realized_rate;
  r.fairness_violations = trace.fairness_violations;
  r.stale_drops = trace.stale_drops;

  std::vector<double> latencies, delays, router_times, evals, viables, costs,
      accs;
  for (const RequestRecord& req : trace.requests) {
    if (req.first_dispatch >= 0) delays.push_back(req.first_dispatch - req.arrival);
    if (req.prediction_start >= 0) {
      router_times.push_back(req.prediction_duration);
      evals.push_back(req.router_evals);
    }
    if (req.viable_count > 0) viables.push_back(req.viable_count);
    if (req.completion >= 0) {
      latencies.push_back(req.completion - req.arrival);
      costs.push_back(req.static_cost);
      accs.push_back(req.accurate ? 1.0 : 0.0);
    }
  }
  r.throughput = trace.end_time > 0
                     ? static_cast<double>(trace.completed) / trace.end_time
                     : 0.0;
  r.mean_latency = mean_of(latencies);
  if (!latencies.empty()) {
    r.p25 = percentile_nearest_rank(latencies, 25);
    r.p50 = percentile_nearest_rank(latencies, 50);
    r.p90 = percentile_nearest_rank(latencies, 90);
    r.p95 = percentile_nearest_rank(latencies, 95);
  } else {
    r.p25 = r.p50 = r.p90 = r.p95 = std::nan("");
  }
  r.mean_queue_delay = mean_of(delays);
  r.served_accuracy = mean_of(accs);
  // Router share over completed requests, both sides of the ratio.
  std::vector<double> completed_router;
  for (const RequestRecord& req : trace.requests) {
    if (req.completion >= 0) {
      completed_router.push_back(req.prediction_start >= 0
                                     ? req.prediction_duration
                                     : 0.0);
    }
  }
  double mean_completed_router = mean_of(completed_router);
  r.mean_router_time = mean_of(router_times);
  if (router_times.empty()) r.mean_router_time = 0.0;
  r.router_share = (!latencies.empty() && r.mean_latency > 0 &&
                    !std::isnan(mean_completed_router))
                       ? mean_completed_router / r.mean_latency
                       : 0.0;
  r.mean_router_evals = evals.empty() ? 0.0 : mean_of(evals);
  r.mean_viable = mean_of(viables);
  r.mean_static_cost = mean_of(costs);

  std::vector<double> in_system;
  in_system.reserve(trace.samples.size());
  for (const OccupancySample& s : trace.samples) {
    in_system.push_back(static_cast<double>(s.in_system));
  }
  r.mean_in_system = in_system.empty() ? 0.0 : mean_of(in_system);
  return r;
}

std::string report_csv_header() {
  return "scenario,policy,mode,rate,seed,horizon,offered,completed,"
         "realized_rate,throughput,mean_latency,p25,p50,p90,p95,"
         "mean_queue_delay,served_accuracy,mean_router_time,router_share,"
         "mean_router_evals,mean_viable,mean_static_cost,mean_in_system,"
         "fairness_violations,stale_drops";
}

std::string report_csv_row(const RunReport& r) {
  std::ostringstream os;
  os << r.scenario << ',' << r.policy << ',' << r.mode << ',' << fmt(r.rate)
     << ',' << (r.aggregate ? std::string("mean") : std::to_string(r.seed))
     << ',' << fmt(r.horizon) << ',' << r.offered << ',' << r.completed << ','
     << fmt(r.realized_rate) << ',' << fmt(r.throughput) << ','
     << fmt(r.mean_latency) << ',' << fmt(r.p25) << ',' << fmt(r.p50) << ','
     << fmt(r.p90) << ',' << fmt(r.p95) << ',' << fmt(r.mean_queue_delay)
     << ',' << fmt(r.served_accuracy) << ',' << fmt(r.mean_router_time) << ','
     << fmt(r.router_share) << ',' << fmt(r.mean_router_evals) << ','
     << fmt(r.mean_viable) << ',' << fmt(r.mean_static_cost) << ','
     << fmt(r.mean_in_system) << ',' << r.fairness_violations << ','
     << r.stale_drops;
  return os.str();
}

void write_reports_csv(const std::string& path,
                       const std::vector<RunReport>& reports) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << report_csv_header() << "\n";
  for (const RunReport& r : reports) out << report_csv_row(r) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

namespace {

RunReport aggregate_reports(const std::vector<RunReport>& per_seed) {
  RunReport m = per_seed.front();
  m.aggregate = true;
  m.offered = 0;
  m.completed = 0;
  m.fairness_violations = 0;
  m.stale_drops = 0;
  auto avg = [&](auto field) {
    double s = 0;
    for (const RunReport& r : per_seed) s += r.*field;
    return s / static_cast<double>(per_seed.size());
  };
  m.realized_rate = avg(&RunReport::realized_rate);
  m.throughput = avg(&RunReport::throughput);
  m.mean_latency = avg(&RunReport::mean_latency);
  m.p25 = avg(&RunReport::p25);
  m.p50 = avg(&RunReport::p50);
  m.p90 = avg(&RunReport::p90);
  m.p95 = avg(&RunReport::p95);
  m.mean_queue_delay = avg(&RunReport::mean_queue_delay);
  m.served_accuracy = avg(&RunReport::served_accuracy);
  m.mean_router_time = avg(&RunReport::mean_router_time);
  m.router_share = avg(&RunReport::router_share);
  m.mean_router_evals = avg(&RunReport::mean_router_evals);
  m.mean_viable = avg(&RunReport::mean_viable);
  m.mean_static_cost = avg(&RunReport::mean_static_cost);
  m.mean_in_system = avg(&RunReport::mean_in_system);
  for (const RunReport& r : per_seed) {
    m.offered += r.offered;
    m.completed += r.completed;
    m.fairness_violations += r.fairness_violations;
    m.stale_drops += r.stale_drops;
  }
  return m;
}

}  // namespace

SweepResult run_sweep(const Scenario& scenario, PolicyKind policy,
                      const std::vector<double>& rates,
                      const std::vector<std::uint64_t>& seeds, double horizon,
                      std::optional<int> beam_width, int jobs) {
  if (rates.empty()) throw ValidationError("sweep needs at least one rate");
  if (seeds.empty()) throw ValidationError("sweep needs at least one seed");
  for (std::size_t i = 1; i < rates.size(); ++i) {
    if (rates[i] <= rates[i - 1]) {
      throw ValidationError("sweep rates must strictly increase");
    }
  }
  if (horizon <= 0) throw ValidationError("sweep horizon must be positive");

  std::vector<RunReport> reports(rates.size() * seeds.size());
  parallel_for(reports.size(), jobs, [&](std::size_t task) {
    std::size_t ri = task / seeds.size();
    std::size_t si = task % seeds.size();
    RunOptions opts;
    opts.policy = policy;
    opts.mode = RunMode::kHorizon;
    opts.arrival_rate = rates[ri];
    opts.seed = seeds[si];
    opts.horizon = horizon;
    opts.beam_width = beam_width;
    reports[task] = summarize_run(run_simulation(scenario, opts));
  });

  SweepResult result;
  result.policy = policy_name(policy);
  for (std::size_t ri = 0; ri < rates.size(); ++ri) {
    SweepPoint point;
    point.rate = rates[ri];
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      point.per_seed.push_back(reports[ri * seeds.size() + si]);
    }
    point.mean = aggregate_reports(point.per_seed);
    result.saturation = std::max(result.saturation, point.mean.throughput);
    result.points.push_back(std::move(point));
  }
  return result;
}

const SweepResult& CompareResult::find(PolicyKind kind) const {
  const std::string name = policy_name(kind);
  for (const SweepResult& s : policies) {
    if (s.policy == name) return s;
  }
  throw ValidationError("comparison is missing policy " + name);
}

double CompareResult::saturation_ratio(PolicyKind a, PolicyKind b) const {
  double denom = find(b).saturation;
  if (denom <= 0) throw ValidationError("saturation ratio with zero baseline");
  return find(a).saturation / denom;
}

CompareResult compare_policies(const Scenario& scenario,
                               const std::vector<double>& rates,
                               const std::vector<std::uint64_t>& seeds,
                               double horizon, int jobs) {
  CompareResult result;
  for (PolicyKind kind : all_policies()) {
    result.policies.push_back(
        run_sweep(scenario, kind, rates, seeds, horizon, std::nullopt, jobs));
  }
  return result;
}

std::vector<PruningRow> figure_pruning(std::size_t instances,
                                       std::uint64_t seed) {
  static const std::pair<int, int> kGrid[] = {{2, 2}, {2, 3}, {3, 2},
                                              {3, 3}, {4, 2}, {4, 3}};
  std::vector<PruningRow> rows;
  rows.reserve(instances);
  for (std::size_t i = 0; i < instances; ++i) {
    auto [n, m] = kGrid[i % (sizeof(kGrid) / sizeof(kGrid[0]))];
    std::vector<std::string> agents;
    std::vector<std::pair<std::string, std::string>> edges;
    for (int a = 0; a < n; ++a) {
      agents.push_back("a" + std::to_string(a));
      if (a > 0) edges.emplace_back(agents[static_cast<std::size_t>(a - 1)],
                                    agents[static_cast<std::size_t>(a)]);
    }
    WorkflowGraph graph = WorkflowGraph::build(agents, edges);
    std::vector<ModelSpec> models;
    for (int t = 0; t < m; ++t) {
      models.push_back(ModelSpec{"m" + std::to_string(t), 1.0 + t,
                                 static_cast<double>(m - t)});
    }
    ModelCatalog catalog(models);
    ConfigSpace space(graph, catalog);

    AccuracyGenParams params;  // defaults: monotone tables
    AccurateSet set = generate_accurate_set(space, params, seed, i);
    AccuracyTable table(space, {set});
    OracleRouter router(table, 0.001);
    ConfigPredictor predictor(space, router);
    PredictionResult res =
        predictor.predict(0, std::numeric_limits<double>::infinity());

    PruningRow row;
    row.instance = i;
    row.agents = n;
    row.tiers = m;
    row.space_size = space.size();
    row.evals = res.router_eval_count();
    row.reduction =
        1.0 - static_cast<double>(row.evals) / static_cast<double>(row.space_size);
    rows.push_back(row);
  }
  return rows;
}

std::string pruning_csv(const std::vector<PruningRow>& rows) {
  std::ostringstream os;
  os << "instance,agents,tiers,space_size,evals,reduction\n";
  for (const PruningRow& r : rows) {
    os << r.instance << ',' << r.agents << ',' << r.tiers << ',' << r.space_size
       << ',' << r.evals << ',' << fmt(r.reduction) << "\n";
  }
  return os.str();
}

std::vector<BeamQualityRow> figure_beam_quality(std::size_t snapshots,
                                                std::uint64_t seed,
                                                int beam_width,
                                                std::size_t brute_cap) {
  std::vector<BeamQualityRow> rows(snapshots);
  for (std::size_t i = 0; i < snapshots; ++i) {
    std::unique_ptr<SchedulerSnapshot> snap = generate_snapshot(seed, i);
    std::vector<const Request*> queue = snap->queue();
    SchedulerParams beam;
    beam.beam_width = beam_width;
    SchedulerParams greedy;
    greedy.beam_width = 1;
    rows[i].snapshot = i;
    rows[i].beam = beam_schedule(queue, snap->engines, beam).utilization;
    rows[i].greedy = beam_schedule(queue, snap->engines, greedy).utilization;
    rows[i].brute =
        brute_force_schedule(queue, snap->engines, brute_cap).utilization;
  }
  return rows;
}

std::string beam_quality_csv(const std::vector<BeamQualityRow>& rows) {
  std::ostringstream os;
  os << "snapshot,beam,greedy,brute\n";
  for (const BeamQualityRow& r : rows) {
    os << r.snapshot << ',' << fmt(r.beam) << ',' << fmt(r.greedy) << ','
       << fmt(r.brute) << "\n";
  }
  return os.str();
}

std::vector<BeamSizeRow> figure_beam_size(const Scenario& scenario,
                                          const std::vector<int>& widths,
                                          int jobs) {
  if (scenario.sweep.rates.empty() || scenario.sweep.seeds.empty()) {
    throw ValidationError("scenario has no sweep grid for the beam study");
  }
  std::vector<BeamSizeRow> rows;
  for (int w : widths) {
    SweepResult sweep =
        run_sweep(scenario, PolicyKind::kAragog, scenario.sweep.rates,
                  scenario.sweep.seeds, scenario.sweep.horizon, w, jobs);
    rows.push_back(BeamSizeRow{w, sweep.saturation});
  }
  return rows;
}

std::string beam_size_csv(const std::vector<BeamSizeRow>& rows) {
  std::ostringstream os;
  os << "beam_width,saturation\n";
  for (const BeamSizeRow& r : rows) {
    os << r.width << ',' << fmt(r.saturation) << "\n";
  }
  return os.str();
}

int default_jobs() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (jobs < 1) throw ValidationError("jobs must be at least 1");
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace aragog
