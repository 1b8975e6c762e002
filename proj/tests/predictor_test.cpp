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

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <doctest.h>

#include "aragog/accuracy.h"
#include "aragog/predictor.h"
#include "aragog/router.h"

namespace aragog {
namespace {

constexpr double kUnbounded = std::numeric_limits<double>::infinity();

WorkflowGraph make_chain(int n) {
  std::vector<std::string> agents;
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 0; i < n; ++i) {
    agents.push_back("a" + std::to_string(i));
    if (i > 0) edges.emplace_back(agents[i - 1], agents[i]);
  }
  return WorkflowGraph::build(agents, edges);
}

ModelCatalog make_catalog(int tiers) {
  std::vector<ModelSpec> models;
  for (int t = 0; t < tiers; ++t) {
    models.push_back(ModelSpec{"m" + std::to_string(t), 1.0 + t,
                               static_cast<double>(tiers - t)});
  }
  return ModelCatalog(models);
}

class CountingRouter : public RouterBackend {
 public:
  CountingRouter(const RouterBackend& inner) : inner_(&inner) {}

  bool evaluate(RequestId request, const Configuration& config) const override {
    ++calls_;
    return inner_->evaluate(request, config);
  }
  double eval_latency() const override { return inner_->eval_latency(); }
  int calls() const { return calls_; }
  void reset() { calls_ = 0; }

 private:
  const RouterBackend* inner_;
  mutable int calls_ = 0;
};

bool chain_is_valid(const std::vector<Configuration>& chain,
                    const ConfigSpace& space) {
  if (chain.empty() || !(chain.front() == space.base()) ||
      !space.is_top(chain.back())) {
    return false;
  }
  for (std::size_t i = 1; i < chain.size(); ++i) {
    int diff = 0;
    for (std::size_t k = 0; k < chain[i].models.size(); ++k) {
      int d = chain[i].models[k] - chain[i - 1].models[k];
      if (d == 1) ++diff;
      else if (d != 0) return false;
    }
    if (diff != 1) return false;
  }
  return true;
}

TEST_SUITE("predictor") {

TEST_CASE("two by two lattice needs exactly two chains") {
  WorkflowGraph g = make_chain(2);
  ModelCatalog cat = make_catalog(2);
  ConfigSpace space(g, cat);
  ChainPlan plan = build_chains(space);
  CHECK(plan.exhaustive);
  REQUIRE(plan.chains.size() == 2);
  // DFS raises agent 0 first.
  CHECK(plan.chains[0] ==
        std::vector<Configuration>{{{0, 0}}, {{1, 0}}, {{1, 1}}});
  CHECK(plan.chains[1] ==
        std::vector<Configuration>{{{0, 0}}, {{0, 1}}, {{1, 1}}});
}

TEST_CASE("capped mode emits the first chains only") {
  WorkflowGraph g = make_chain(2);
  ModelCatalog cat = make_catalog(3);
  ConfigSpace space(g, cat);
  // Force capped mode by refusing coverage tracking.
  ChainPlan plan = build_chains(space, 3, 0);
  CHECK(!plan.exhaustive);
  REQUIRE(plan.chains.size() == 3);
  for (const auto& chain : plan.chains) CHECK(chain_is_valid(chain, space));
}

TEST_CASE("coverage chains are valid, distinct, and cover the lattice") {
  for (int agents = 1; agents <= 3; ++agents) {
    for (int tiers = 2; tiers <= 3; ++tiers) {
      WorkflowGraph g = make_chain(agents);
      ModelCatalog cat = make_catalog(tiers);
      ConfigSpace space(g, cat);
      ChainPlan plan = build_chains(space);
      CHECK(plan.exhaustive);
      std::vector<char> covered(space.size(), 0);
      for (const auto& chain : plan.chains) {
        CHECK(chain_is_valid(chain, space));
        for (const Configuration& c : chain) covered[space.index_of(c)] = 1;
      }
      CHECK(std::count(covered.begin(), covered.end(), 0) == 0);
      // Every chain earned its place by covering something new, so there can
      // be at most one chain per lattice element.
      CHECK(plan.chains.size() <= space.size());
    }
  }
}

TEST_CASE("boundary search is logarithmic and monotone safe") {
  std::vector<Configuration> chain;
  for (int i = 0; i < 5; ++i) chain.push_back(Configuration{{i}});

  int evals = 0;
  auto verdict_at = [&](std::size_t first_true) {
    return [&, first_true](const Configuration& c) -> std::optional<bool> {
      ++evals;
      return static_cast<std::size_t>(c.models[0]) >= first_true;
    };
  };

  for (std::size_t boundary = 0; boundary <= 5; ++boundary) {
    evals = 0;
    auto result = find_chain_boundary(chain, verdict_at(boundary), 0, 5);
    REQUIRE(result.has_value());
    CHECK(*result == boundary);
    CHECK(evals <= 3);  // ceil(log2(5)) + 1
  }
}

TEST_CASE("boundary search propagates a budget abort") {
  std::vector<Configuration> chain;
  for (int i = 0; i < 8; ++i) chain.push_back(Configuration{{i}});
  int calls = 0;
  auto verdict = [&](const Configuration&) -> std::optional<bool> {
    if (++calls >= 2) return std::nullopt;
    return false;
  };
  CHECK(!find_chain_boundary(chain, verdict, 0, 8).has_value());
}

TEST_CASE("non monotone verdicts still land inside the range") {
  std::vector<Configuration> chain;
  for (int i = 0; i < 5; ++i) chain.push_back(Configuration{{i}});
  auto verdict = [](const Configuration& c) -> std::optional<bool> {
    return c.models[0] % 2 == 0;  // T F T F T
  };
  auto result = find_chain_boundary(chain, verdict, 0, 5);
  REQUIRE(result.has_value());
  CHECK(*result <= 5);
}

TEST_CASE("single agent boundary costs two searches") {
  WorkflowGraph g = make_chain(1);
  ModelCatalog cat = make_catalog(3);
  ConfigSpace space(g, cat);
  AccurateSet set;
  set.seeds = {Configuration{{1}}};
  AccuracyTable table(space, std::vector<AccurateSet>(1, set));
  OracleRouter router(table, 0.001);
  ConfigPredictor predictor(space, router);

  PredictionResult result = predictor.predict(0, kUnbounded);
  CHECK(result.search_evals == 2);
  CHECK(result.verify_evals == 0);
  CHECK(result.router_eval_count() == 2);
  CHECK(result.viable.configs ==
        std::vector<Configuration>{{{1}}, {{2}}});
}

TEST_CASE("zero budget predicts top at zero cost") {
  WorkflowGraph g = make_chain(2);
  ModelCatalog cat = make_catalog(3);
  ConfigSpace space(g, cat);
  AccuracyGenParams params;
  AccuracyTable table = generate_accuracy_table(space, params, 10, 3);
  OracleRouter router(table, 0.002);
  ConfigPredictor predictor(space, router);

  for (RequestId id = 0; id < 10; ++id) {
    PredictionResult result = predictor.predict(id, 0.0);
    CHECK(result.router_eval_count() == 0);
    CHECK(result.router_time == 0.0);
    CHECK(result.truncated);
    REQUIRE(result.viable.configs.size() == 1);
    CHECK(space.is_top(result.viable.configs[0]));
  }
}

TEST_CASE("unbounded prediction equals the enumerated truth") {
  AccuracyGenParams params;
  int instances = 0;
  for (int agents = 1; agents <= 3; ++agents) {
    for (int tiers = 2; tiers <= 3; ++tiers) {
      WorkflowGraph g = make_chain(agents);
      ModelCatalog cat = make_catalog(tiers);
      ConfigSpace space(g, cat);
      AccuracyTable table = generate_accuracy_table(space, params, 40, 23);
      OracleRouter router(table, 0.001);
      ConfigPredictor predictor(space, router);
      for (RequestId id = 0; id < 40; ++id) {
        PredictionResult result = predictor.predict(id, kUnbounded);
        CHECK(!result.truncated);
        CHECK(result.viable.configs == enumerate_members(table.at(id), space));
        ++instances;
      }
    }
  }
  CHECK(instances == 240);
}

TEST_CASE("every unique pair is charged at most once and top never") {
  WorkflowGraph g = make_chain(3);
  ModelCatalog cat = make_catalog(3);
  ConfigSpace space(g, cat);
  AccuracyGenParams params;
  AccuracyTable table = generate_accuracy_table(space, params, 60, 29);
  OracleRouter oracle(table, 0.001);
  CountingRouter counting(oracle);
  ConfigPredictor predictor(space, counting);

  for (RequestId id = 0; id < 60; ++id) {
    counting.reset();
    PredictionResult result = predictor.predict(id, kUnbounded);
    // Calls that reach the backend equal the charges: no double evaluation.
    CHECK(counting.calls() == result.router_eval_count());
    CHECK(counting.calls() < 27);
  }
}

TEST_CASE("noisy verdicts with zero false positives only shrink the set") {
  WorkflowGraph g = make_chain(2);
  ModelCatalog cat = make_catalog(3);
  ConfigSpace space(g, cat);
  AccuracyGenParams params;
  AccuracyTable table = generate_accuracy_table(space, params, 300, 37);
  OracleRouter oracle(table, 0.001);
  NoisyRouter noisy(oracle, 0.0, 0.3, 91);
  ConfigPredictor predictor(space, noisy);

  for (RequestId id = 0; id < 300; ++id) {
    PredictionResult result = predictor.predict(id, kUnbounded);
    REQUIRE(!result.viable.configs.empty());
    CHECK(space.is_top(result.viable.configs.back()));
    for (const Configuration& c : result.viable.configs) {
      CHECK(table.accurate(id, c));
    }
  }
}

TEST_CASE("budget truncation stays inside the allowance") {
  WorkflowGraph g = make_chain(2);
  ModelCatalog cat = make_catalog(3);
  ConfigSpace space(g, cat);
  AccuracyGenParams params;
  params.p_easy = 1.0;
  params.p_medium = 0.0;
  params.p_hard = 0.0;
  AccuracyTable table = generate_accuracy_table(space, params, 50, 43);
  OracleRouter router(table, 1.0);  // one second per evaluation
  ConfigPredictor predictor(space, router);

  for (RequestId id = 0; id < 50; ++id) {
    PredictionResult result = predictor.predict(id, 3.0);
    CHECK(result.router_eval_count() <= 3);
    CHECK(result.router_time <= 3.0 + 1e-12);
    // Whatever survives was genuinely verified.
    for (const Configuration& c : result.viable.configs) {
      CHECK(table.accurate(id, c));
    }
    PredictionResult full = predictor.predict(id, kUnbounded);
    if (full.router_eval_count() > 3) CHECK(result.truncated);
  }
}

TEST_CASE("viable sets are sorted and contain top") {
  WorkflowGraph g = make_chain(3);
  ModelCatalog cat = make_catalog(2);
  ConfigSpace space(g, cat);
  AccuracyGenParams params;
  AccuracyTable table = generate_accuracy_table(space, params, 80, 53);
  OracleRouter router(table, 0.001);
  ConfigPredictor predictor(space, router);

  for (RequestId id = 0; id < 80; ++id) {
    PredictionResult result = predictor.predict(id, kUnbounded);
    const auto& configs = result.viable.configs;
    CHECK(std::is_sorted(configs.begin(), configs.end()));
    CHECK(result.viable.contains(space.top()));
    CHECK(!result.viable.contains(Configuration{{9, 9, 9}}));
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace aragog
