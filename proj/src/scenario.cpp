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

#include "aragog/scenario.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace aragog {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError("scenario: " + path + ": " + what);
}

const json& need(const json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing key '" + key + "'");
  return *it;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(path, "unknown key '" + it.key() + "'");
  }
}

double get_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double opt_double(const json& j, const char* key, double fallback,
                  const std::string& path) {
  auto it = j.find(key);
  return it == j.end() ? fallback : get_double(*it, path + "." + key);
}

std::int64_t get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::int64_t opt_int(const json& j, const char* key, std::int64_t fallback,
                     const std::string& path) {
  auto it = j.find(key);
  return it == j.end() ? fallback : get_int(*it, path + "." + key);
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

}  // namespace

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read scenario file: " + path);
  return from_json_text(buf.str());
}

Scenario Scenario::from_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError("scenario: invalid JSON");
  check_keys(j,
             {"name", "seed", "workflow", "models", "engines", "router",
              "predictor", "accuracy", "workload", "scheduler", "sweep",
              "metrics"},
             "$");

  Scenario s;
  s.name = get_string(need(j, "name", "$"), "$.name");
  s.seed = static_cast<std::uint64_t>(opt_int(j, "seed", 1, "$"));

  const json& wf = need(j, "workflow", "$");
  check_keys(wf, {"agents", "edges"}, "$.workflow");
  const json& agents = need(wf, "agents", "$.workflow");
  if (!agents.is_array() || agents.empty()) {
    fail("$.workflow.agents", "expected a nonempty array");
  }
  for (const json& a : agents) {
    s.agents.push_back(get_string(a, "$.workflow.agents[]"));
  }
  if (auto it = wf.find("edges"); it != wf.end()) {
    if (!it->is_array()) fail("$.workflow.edges", "expected an array");
    for (const json& e : *it) {
      if (!e.is_array() || e.size() != 2) {
        fail("$.workflow.edges[]", "expected [from, to]");
      }
      s.edges.emplace_back(get_string(e[0], "$.workflow.edges[][0]"),
                           get_string(e[1], "$.workflow.edges[][1]"));
    }
  }

  const json& models = need(j, "models", "$");
  if (!models.is_array() || models.size() < 2) {
    fail("$.models", "expected an array of at least 2 tiers");
  }
  for (std::size_t i = 0; i < models.size(); ++i) {
    std::string path = "$.models[" + std::to_string(i) + "]";
    const json& m = models[i];
    check_keys(m, {"name", "cost", "slot_throughput"}, path);
    ModelSpec spec;
    spec.name = get_string(need(m, "name", path), path + ".name");
    spec.cost = get_double(need(m, "cost", path), path + ".cost");
    spec.slot_throughput = get_double(need(m, "slot_throughput", path),
                                      path + ".slot_throughput");
    s.models.push_back(std::move(spec));
  }

  const json& engines = need(j, "engines", "$");
  if (!engines.is_array()) fail("$.engines", "expected an array");
  for (std::size_t i = 0; i < engines.size(); ++i) {
    std::string path = "$.engines[" + std::to_string(i) + "]";
    const json& e = engines[i];
    check_keys(e, {"model", "slots", "service"}, path);
    EngineConfig cfg;
    std::string model_name = get_string(need(e, "model", path), path + ".model");
    auto it = std::find_if(s.models.begin(), s.models.end(),
                           [&](const ModelSpec& m) { return m.name == model_name; });
    if (it == s.models.end()) fail(path + ".model", "unknown model '" + model_name + "'");
    cfg.model = static_cast<int>(it - s.models.begin());
    cfg.slots = static_cast<int>(get_int(need(e, "slots", path), path + ".slots"));
    if (cfg.slots < 1) fail(path + ".slots", "expected at least 1");
    const json& svc = need(e, "service", path);
    check_keys(svc, {"mu", "sigma", "floor"}, path + ".service");
    cfg.service.mu = get_double(need(svc, "mu", path), path + ".service.mu");
    cfg.service.sigma = opt_double(svc, "sigma", 0.0, path + ".service");
    cfg.service.floor = opt_double(svc, "floor", 0.0, path + ".service");
    if (cfg.service.sigma < 0) fail(path + ".service.sigma", "expected >= 0");
    if (cfg.service.floor < 0) fail(path + ".service.floor", "expected >= 0");
    s.engines.push_back(cfg);
  }
  // Exactly one pool per tier, stored in tier order.
  if (s.engines.size() != s.models.size()) {
    fail("$.engines", "expected exactly one engine pool per model tier");
  }
  std::sort(s.engines.begin(), s.engines.end(),
            [](const EngineConfig& a, const EngineConfig& b) {
              return a.model < b.model;
            });
  for (std::size_t i = 0; i < s.engines.size(); ++i) {
    if (s.engines[i].model != static_cast<int>(i)) {
      fail("$.engines", "expected exactly one engine pool per model tier");
    }
  }

  if (auto it = j.find("router"); it != j.end()) {
    const json& r = *it;
    check_keys(r,
               {"kind", "eval_latency", "false_positive_rate",
                "false_negative_rate", "noise_seed"},
               "$.router");
    std::string kind = get_string(need(r, "kind", "$.router"), "$.router.kind");
    if (kind == "oracle") {
      s.router.kind = RouterConfig::Kind::kOracle;
    } else if (kind == "noisy") {
      s.router.kind = RouterConfig::Kind::kNoisy;
    } else {
      fail("$.router.kind", "expected 'oracle' or 'noisy'");
    }
    s.router.eval_latency =
        opt_double(r, "eval_latency", s.router.eval_latency, "$.router");
    s.router.false_positive_rate =
        opt_double(r, "false_positive_rate", 0.0, "$.router");
    s.router.false_negative_rate =
        opt_double(r, "false_negative_rate", 0.0, "$.router");
    if (auto ns = r.find("noise_seed"); ns != r.end()) {
      s.router.noise_seed =
          static_cast<std::uint64_t>(get_int(*ns, "$.router.noise_seed"));
    }
    if (s.router.eval_latency < 0) fail("$.router.eval_latency", "expected >= 0");
    double fp = s.router.false_positive_rate, fn = s.router.false_negative_rate;
    if (fp < 0 || fp > 1 || fn < 0 || fn > 1) {
      fail("$.router", "error rates outside [0, 1]");
    }
  }

  if (auto it = j.find("predictor"); it != j.end()) {
    const json& p = *it;
    check_keys(p, {"min_budget", "ema_alpha", "chain_cap", "router_lanes"},
               "$.predictor");
    s.predictor.min_budget =
        opt_double(p, "min_budget", s.predictor.min_budget, "$.predictor");
    s.predictor.ema_alpha =
        opt_double(p, "ema_alpha", s.predictor.ema_alpha, "$.predictor");
    s.predictor.chain_cap = static_cast<int>(
        opt_int(p, "chain_cap", s.predictor.chain_cap, "$.predictor"));
    s.predictor.router_lanes = static_cast<int>(
        opt_int(p, "router_lanes", s.predictor.router_lanes, "$.predictor"));
    if (s.predictor.min_budget < 0) fail("$.predictor.min_budget", "expected >= 0");
    if (s.predictor.ema_alpha <= 0 || s.predictor.ema_alpha > 1) {
      fail("$.predictor.ema_alpha", "expected in (0, 1]");
    }
    if (s.predictor.router_lanes < 1) {
      fail("$.predictor.router_lanes", "expected at least 1");
    }
  }

  if (auto it = j.find("accuracy"); it != j.end()) {
    const json& a = *it;
    check_keys(a,
               {"p_easy", "p_medium", "p_hard", "easy_base_prob",
                "violation_rate"},
               "$.accuracy");
    s.accuracy.p_easy = opt_double(a, "p_easy", s.accuracy.p_easy, "$.accuracy");
    s.accuracy.p_medium =
        opt_double(a, "p_medium", s.accuracy.p_medium, "$.accuracy");
    s.accuracy.p_hard = opt_double(a, "p_hard", s.accuracy.p_hard, "$.accuracy");
    s.accuracy.easy_base_prob =
        opt_double(a, "easy_base_prob", s.accuracy.easy_base_prob, "$.accuracy");
    s.accuracy.violation_rate =
        opt_double(a, "violation_rate", s.accuracy.violation_rate, "$.accuracy");
  }

  if (auto it = j.find("workload"); it != j.end()) {
    const json& w = *it;
    check_keys(w,
               {"arrival_rate", "num_requests", "horizon",
                "per_workflow_sample"},
               "$.workload");
    s.workload.arrival_rate =
        opt_double(w, "arrival_rate", s.workload.arrival_rate, "$.workload");
    s.workload.num_requests = static_cast<std::size_t>(opt_int(
        w, "num_requests", static_cast<std::int64_t>(s.workload.num_requests),
        "$.workload"));
    s.workload.horizon = opt_double(w, "horizon", s.workload.horizon, "$.workload");
    s.workload.per_workflow_sample = static_cast<std::size_t>(
        opt_int(w, "per_workflow_sample",
                static_cast<std::int64_t>(s.workload.per_workflow_sample),
                "$.workload"));
    if (s.workload.arrival_rate <= 0) fail("$.workload.arrival_rate", "expected > 0");
    if (s.workload.horizon <= 0) fail("$.workload.horizon", "expected > 0");
    if (s.workload.num_requests < 1) fail("$.workload.num_requests", "expected >= 1");
    if (s.workload.per_workflow_sample < 1) {
      fail("$.workload.per_workflow_sample", "expected >= 1");
    }
  }

  if (auto it = j.find("scheduler"); it != j.end()) {
    check_keys(*it, {"beam_width"}, "$.scheduler");
    s.scheduler.beam_width =
        static_cast<int>(opt_int(*it, "beam_width", 4, "$.scheduler"));
    if (s.scheduler.beam_width < 1) fail("$.scheduler.beam_width", "expected >= 1");
  }

  if (auto it = j.find("sweep"); it != j.end()) {
    const json& sw = *it;
    check_keys(sw, {"rates", "seeds", "horizon"}, "$.sweep");
    if (auto rates = sw.find("rates"); rates != sw.end()) {
      if (!rates->is_array()) fail("$.sweep.rates", "expected an array");
      for (const json& r : *rates) {
        double v = get_double(r, "$.sweep.rates[]");
        if (v <= 0) fail("$.sweep.rates[]", "expected > 0");
        s.sweep.rates.push_back(v);
      }
      for (std::size_t i = 1; i < s.sweep.rates.size(); ++i) {
        if (s.sweep.rates[i] <= s.sweep.rates[i - 1]) {
          fail("$.sweep.rates", "expected strictly increasing rates");
        }
      }
    }
    if (auto seeds = sw.find("seeds"); seeds != sw.end()) {
      if (!seeds->is_array()) fail("$.sweep.seeds", "expected an array");
      for (const json& v : *seeds) {
        s.sweep.seeds.push_back(
            static_cast<std::uint64_t>(get_int(v, "$.sweep.seeds[]")));
      }
    }
    s.sweep.horizon = opt_double(sw, "horizon", s.sweep.horizon, "$.sweep");
    if (s.sweep.horizon <= 0) fail("$.sweep.horizon", "expected > 0");
  }

  if (auto it = j.find("metrics"); it != j.end()) {
    check_keys(*it, {"sample_interval"}, "$.metrics");
    s.sample_interval =
        opt_double(*it, "sample_interval", s.sample_interval, "$.metrics");
    if (s.sample_interval <= 0) fail("$.metrics.sample_interval", "expected > 0");
  }

  // Cross checks: constructors throw ValidationError on bad graph or catalog,
  // and the generator params get a space to validate against.
  WorkflowGraph graph = s.build_graph();
  ModelCatalog catalog = s.build_catalog();
  ConfigSpace space(graph, catalog);
  s.accuracy.validate(space);
  return s;
}

WorkflowGraph Scenario::build_graph() const {
  return WorkflowGraph::build(agents, edges);
}

ModelCatalog Scenario::build_catalog() const { return ModelCatalog(models); }

ServiceTimeModel Scenario::build_service_model() const {
  std::vector<ServiceTimeModel::Params> params;
  params.reserve(engines.size());
  for (const EngineConfig& e : engines) params.push_back(e.service);
  return ServiceTimeModel(std::move(params));
}

std::vector<EngineState> Scenario::build_engines() const {
  std::vector<EngineState> out;
  out.reserve(engines.size());
  for (const EngineConfig& e : engines) {
    EngineState state;
    state.model = e.model;
    state.slots = e.slots;
    state.weight = models[static_cast<std::size_t>(e.model)].slot_throughput;
    out.push_back(std::move(state));
  }
  return out;
}

std::string Scenario::summary() const {
  WorkflowGraph graph = build_graph();
  ModelCatalog catalog = build_catalog();
  ConfigSpace space(graph, catalog);
  ServiceTimeModel service = build_service_model();

  std::ostringstream os;
  os << "scenario '" << name << "' (seed " << seed << ")\n";
  os << "  agents (" << graph.num_agents() << "):";
  for (const std::string& a : graph.topo_order()) os << " " << a;
  int max_depth = 0;
  for (int p = 0; p < graph.num_agents(); ++p) {
    max_depth = std::max(max_depth, graph.depth(p));
  }
  os << "\n  edges: " << edges.size() << ", max depth " << max_depth << "\n";
  os << "  models (" << catalog.size() << "):";
  for (const ModelSpec& m : catalog.models()) {
    os << " " << m.name << "(cost " << m.cost << ", weight "
       << m.slot_throughput << ")";
  }
  os << "\n  configurations: " << space.size() << "\n";
  os << "  engines:";
  for (const EngineConfig& e : engines) {
    os << " " << catalog.at(e.model).name << "[slots " << e.slots
       << ", mean service " << service.mean(e.model) << "s]";
  }
  os << "\n  router: "
     << (router.kind == RouterConfig::Kind::kOracle ? "oracle" : "noisy")
     << ", eval latency " << router.eval_latency << "s";
  if (router.kind == RouterConfig::Kind::kNoisy) {
    os << ", fp " << router.false_positive_rate << ", fn "
       << router.false_negative_rate;
  }
  os << "\n  predictor: min budget " << predictor.min_budget << "s, alpha "
     << predictor.ema_alpha << ", lanes " << predictor.router_lanes << "\n";
  os << "  accuracy mix: easy " << accuracy.p_easy << ", medium "
     << accuracy.p_medium << ", hard " << accuracy.p_hard << ", base prob "
     << accuracy.easy_base_prob << ", violation rate "
     << accuracy.violation_rate << "\n";
  os << "  workload: rate " << workload.arrival_rate << "/s, "
     << workload.num_requests << " requests (drain), horizon "
     << workload.horizon << "s\n";
  os << "  scheduler: beam width " << scheduler.beam_width << "\n";
  if (!sweep.rates.empty()) {
    os << "  sweep: rates";
    for (double r : sweep.rates) os << " " << r;
    os << "; seeds";
    for (std::uint64_t sd : sweep.seeds) os << " " << sd;
    os << "; horizon " << sweep.horizon << "s\n";
  }
  return os.str();
}

}  // namespace aragog
