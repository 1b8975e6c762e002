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

// Scenario files: one JSON document describing workflow, models, engines,
// router, predictor, accuracy generation, workload, and sweep grid. Parsing
// is strict; unknown keys and malformed values raise ValidationError with
// the offending path.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aragog/accuracy.h"
#include "aragog/engine.h"
#include "aragog/scheduler.h"
#include "aragog/workflow.h"

namespace aragog {

struct RouterConfig {
  enum class Kind { kOracle, kNoisy };
  Kind kind = Kind::kOracle;
  double eval_latency = 0.002;
  double false_positive_rate = 0.0;
  double false_negative_rate = 0.0;
  std::optional<std::uint64_t> noise_seed;  // default: derived from run seed
};

struct PredictorConfig {
  double min_budget = 0.05;
  double ema_alpha = 0.2;
  int chain_cap = 0;  // <= 0: library default
  int router_lanes = 1;
};

struct WorkloadConfig {
  double arrival_rate = 1.0;
  std::size_t num_requests = 500;  // drain mode
  double horizon = 240.0;          // hard-horizon mode
  std::size_t per_workflow_sample = 256;
};

struct SweepConfig {
  std::vector<double> rates;
  std::vector<std::uint64_t> seeds;
  double horizon = 240.0;
};

struct EngineConfig {
  int model = 0;  // tier index, resolved from the model name
  int slots = 1;
  ServiceTimeModel::Params service;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 1;

  std::vector<std::string> agents;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<ModelSpec> models;
  std::vector<EngineConfig> engines;  // exactly one pool per tier, tier order

  RouterConfig router;
  PredictorConfig predictor;
  AccuracyGenParams accuracy;
  WorkloadConfig workload;
  SchedulerParams scheduler;
  SweepConfig sweep;
  double sample_interval = 0.5;

  static Scenario load(const std::string& path);      // IoError on file trouble
  static Scenario from_json_text(const std::string&);  // ValidationError

  // Live objects; graph and catalog must outlive the returned service/engines
  // users as usual.
  WorkflowGraph build_graph() const;
  ModelCatalog build_catalog() const;
  ServiceTimeModel build_service_model() const;
  std::vector<EngineState> build_engines() const;

  // Human-oriented summary for validate-scenario.
  std::string summary() const;
};

}  // namespace aragog
