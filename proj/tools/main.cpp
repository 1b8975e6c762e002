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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aragog/errors.h"
#include "aragog/metrics.h"
#include "aragog/scenario.h"
#include "aragog/simulation.h"

namespace {

using namespace aragog;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

void emit(const std::optional<std::string>& out, const std::string& text) {
  if (out.has_value()) {
    write_text(*out, text);
  } else {
    std::cout << text;
  }
}

void print_report(const RunReport& r) {
  std::cout << "scenario          " << r.scenario << "\n"
            << "policy            " << r.policy << "\n"
            << "mode              " << r.mode << "\n"
            << "rate              " << r.rate << " req/s (realized "
            << r.realized_rate << ")\n"
            << "offered/completed " << r.offered << "/" << r.completed << "\n"
            << "throughput        " << r.throughput << " req/s\n"
            << "latency mean      " << r.mean_latency << " s (p25 " << r.p25
            << ", p50 " << r.p50 << ", p90 " << r.p90 << ", p95 " << r.p95
            << ")\n"
            << "queue delay mean  " << r.mean_queue_delay << " s\n"
            << "served accuracy   " << r.served_accuracy << "\n"
            << "router time mean  " << r.mean_router_time << " s (share "
            << r.router_share << ", evals " << r.mean_router_evals << ")\n"
            << "viable mean       " << r.mean_viable << "\n"
            << "static cost mean  " << r.mean_static_cost << "\n"
            << "in-system mean    " << r.mean_in_system << "\n"
            << "fairness breaks   " << r.fairness_violations << "\n";
}

struct CommonSweepArgs {
  std::string scenario_path;
  std::vector<double> rates;
  std::vector<std::uint64_t> seeds;
  double horizon = 0.0;
  int jobs = 0;

  // Falls back to the scenario's sweep section where flags are absent.
  void resolve(const Scenario& sc) {
    if (rates.empty()) rates = sc.sweep.rates;
    if (seeds.empty()) seeds = sc.sweep.seeds;
    if (horizon <= 0) horizon = sc.sweep.horizon;
    if (jobs <= 0) jobs = default_jobs();
    if (rates.empty()) throw ValidationError("no sweep rates given");
    if (seeds.empty()) throw ValidationError("no sweep seeds given");
  }
};

int run_main(int argc, char** argv) {
  CLI::App app{"workflow serving simulator"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "simulate one run and report metrics");
  std::string run_scenario;
  std::string run_policy = "aragog";
  std::string run_mode = "drain";
  std::optional<double> run_rate;
  std::optional<std::uint64_t> run_seed;
  std::optional<int> run_beam;
  std::optional<std::size_t> run_requests;
  std::optional<double> run_horizon;
  std::optional<std::string> run_trace, run_report;
  run->add_option("--scenario", run_scenario, "scenario file")->required();
  run->add_option("--policy", run_policy,
                  "aragog | per-workflow | per-input-static | "
                  "per-input-runtime-cost");
  run->add_option("--mode", run_mode, "drain | horizon");
  run->add_option("--rate", run_rate, "arrival rate override, req/s");
  run->add_option("--seed", run_seed, "seed override");
  run->add_option("--beam-width", run_beam, "beam width override");
  run->add_option("--requests", run_requests, "request count (drain mode)");
  run->add_option("--horizon", run_horizon, "horizon seconds (horizon mode)");
  run->add_option("--trace", run_trace, "write a JSONL trace here");
  run->add_option("--report", run_report, "write a one-row CSV report here");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "rate sweep for one policy");
  CommonSweepArgs sweep_args;
  std::string sweep_policy = "aragog";
  std::optional<int> sweep_beam;
  std::optional<std::string> sweep_out;
  sweep->add_option("--scenario", sweep_args.scenario_path, "scenario file")
      ->required();
  sweep->add_option("--policy", sweep_policy, "policy to sweep");
  sweep->add_option("--rates", sweep_args.rates, "rates (default: scenario)")
      ->delimiter(',');
  sweep->add_option("--seeds", sweep_args.seeds, "seeds (default: scenario)")
      ->delimiter(',');
  sweep->add_option("--horizon", sweep_args.horizon, "horizon seconds");
  sweep->add_option("--jobs", sweep_args.jobs, "worker threads");
  sweep->add_option("--beam-width", sweep_beam, "beam width override");
  sweep->add_option("--out", sweep_out, "CSV output path (default stdout)");

  // compare
  auto* compare = app.add_subcommand("compare", "sweep all policies");
  CommonSweepArgs cmp_args;
  std::optional<std::string> cmp_out;
  compare->add_option("--scenario", cmp_args.scenario_path, "scenario file")
      ->required();
  compare->add_option("--rates", cmp_args.rates, "rates (default: scenario)")
      ->delimiter(',');
  compare->add_option("--seeds", cmp_args.seeds, "seeds (default: scenario)")
      ->delimiter(',');
  compare->add_option("--horizon", cmp_args.horizon, "horizon seconds");
  compare->add_option("--jobs", cmp_args.jobs, "worker threads");
  compare->add_option("--out", cmp_out, "CSV output path (default stdout)");

  // figure
  auto* figure = app.add_subcommand("figure", "reproduce a study CSV");
  std::string fig_name;
  std::optional<std::string> fig_out;
  std::string fig_scenario;
  std::size_t fig_count = 0;
  std::uint64_t fig_seed = 1;
  int fig_beam = 4;
  std::size_t fig_cap = 2000000;
  std::vector<int> fig_widths{1, 2, 4, 8};
  int fig_jobs = 0;
  figure->add_option("--name", fig_name, "pruning | beam-quality | beam-size")
      ->required();
  figure->add_option("--out", fig_out, "CSV output path (default stdout)");
  figure->add_option("--scenario", fig_scenario, "scenario (beam-size)");
  figure->add_option("--count", fig_count, "instances / snapshots");
  figure->add_option("--seed", fig_seed, "generator seed");
  figure->add_option("--beam-width", fig_beam, "beam width (beam-quality)");
  figure->add_option("--brute-cap", fig_cap, "oracle state cap (beam-quality)");
  figure->add_option("--widths", fig_widths, "beam widths (beam-size)")
      ->delimiter(',');
  figure->add_option("--jobs", fig_jobs, "worker threads (beam-size)");

  // validate-scenario
  auto* validate = app.add_subcommand("validate-scenario",
                                      "parse a scenario and print a summary");
  std::string val_scenario;
  validate->add_option("--scenario", val_scenario, "scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (run->parsed()) {
    Scenario sc = Scenario::load(run_scenario);
    RunOptions opts;
    opts.policy = parse_policy(run_policy);
    if (run_mode == "drain") {
      opts.mode = RunMode::kDrain;
    } else if (run_mode == "horizon") {
      opts.mode = RunMode::kHorizon;
    } else {
      throw ValidationError("unknown mode: " + run_mode);
    }
    opts.arrival_rate = run_rate;
    opts.seed = run_seed;
    opts.beam_width = run_beam;
    opts.num_requests = run_requests;
    opts.horizon = run_horizon;
    RunTrace trace = run_simulation(sc, opts);
    if (run_trace.has_value()) {
      std::ofstream out(*run_trace);
      if (!out) throw IoError("cannot open for writing: " + *run_trace);
      trace.write_jsonl(out);
      if (!out) throw IoError("write failed: " + *run_trace);
    }
    RunReport report = summarize_run(trace);
    if (run_report.has_value()) write_reports_csv(*run_report, {report});
    print_report(report);
    return 0;
  }

  if (sweep->parsed()) {
    Scenario sc = Scenario::load(sweep_args.scenario_path);
    sweep_args.resolve(sc);
    SweepResult result =
        run_sweep(sc, parse_policy(sweep_policy), sweep_args.rates,
                  sweep_args.seeds, sweep_args.horizon, sweep_beam,
                  sweep_args.jobs);
    std::vector<RunReport> rows;
    for (const SweepPoint& p : result.points) {
      for (const RunReport& r : p.per_seed) rows.push_back(r);
      rows.push_back(p.mean);
    }
    std::ostringstream os;
    os << report_csv_header() << "\n";
    for (const RunReport& r : rows) os << report_csv_row(r) << "\n";
    emit(sweep_out, os.str());
    std::cerr << "saturation " << result.saturation << " req/s\n";
    return 0;
  }

  if (compare->parsed()) {
    Scenario sc = Scenario::load(cmp_args.scenario_path);
    cmp_args.resolve(sc);
    CompareResult result =
        compare_policies(sc, cmp_args.rates, cmp_args.seeds, cmp_args.horizon,
                         cmp_args.jobs);
    std::ostringstream os;
    os << report_csv_header() << "\n";
    for (const SweepResult& s : result.policies) {
      for (const SweepPoint& p : s.points) {
        for (const RunReport& r : p.per_seed) os << report_csv_row(r) << "\n";
        os << report_csv_row(p.mean) << "\n";
      }
    }
    emit(cmp_out, os.str());
    for (const SweepResult& s : result.policies) {
      std::cerr << s.policy << " saturation " << s.saturation << " req/s\n";
    }
    std::cerr << "aragog/per-input-static "
              << result.saturation_ratio(PolicyKind::kAragog,
                                         PolicyKind::kPerInputStatic)
              << "\naragog/per-workflow "
              << result.saturation_ratio(PolicyKind::kAragog,
                                         PolicyKind::kPerWorkflow)
              << "\n";
    return 0;
  }

  if (figure->parsed()) {
    if (fig_name == "pruning") {
      std::size_t count = fig_count == 0 ? 200 : fig_count;
      emit(fig_out, pruning_csv(figure_pruning(count, fig_seed)));
    } else if (fig_name == "beam-quality") {
      std::size_t count = fig_count == 0 ? 200 : fig_count;
      emit(fig_out, beam_quality_csv(
                        figure_beam_quality(count, fig_seed, fig_beam, fig_cap)));
    } else if (fig_name == "beam-size") {
      if (fig_scenario.empty()) {
        throw ValidationError("beam-size needs --scenario");
      }
      Scenario sc = Scenario::load(fig_scenario);
      int jobs = fig_jobs <= 0 ? default_jobs() : fig_jobs;
      emit(fig_out, beam_size_csv(figure_beam_size(sc, fig_widths, jobs)));
    } else {
      throw ValidationError("unknown figure: " + fig_name);
    }
    return 0;
  }

  Scenario sc = Scenario::load(val_scenario);
  std::cout << sc.summary();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
