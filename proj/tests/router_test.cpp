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

#include <cstdint>
#include <string>
#include <vector>

#include <doctest.h>

#include "aragog/accuracy.h"
#include "aragog/router.h"

namespace aragog {
namespace {

struct Fixture {
  WorkflowGraph graph;
  ModelCatalog catalog;
  ConfigSpace space;
  AccuracyTable table;

  Fixture()
      : graph(WorkflowGraph::build({"a", "b"}, {{"a", "b"}})),
        catalog(ModelCatalog({{"s", 1.0, 2.0}, {"m", 2.0, 1.0}, {"l", 3.0, 0.5}})),
        space(graph, catalog),
        table(make_table(space)) {}

  static AccuracyTable make_table(const ConfigSpace& space) {
    AccuracyGenParams params;
    return generate_accuracy_table(space, params, 2000, 19);
  }
};

TEST_SUITE("router") {

TEST_CASE("oracle reads ground truth") {
  Fixture f;
  OracleRouter router(f.table, 0.004);
  CHECK(router.eval_latency() == 0.004);
  for (RequestId id = 0; id < 50; ++id) {
    for (std::uint64_t i = 0; i < f.space.size(); ++i) {
      Configuration c = f.space.at_index(i);
      CHECK(router.evaluate(id, c) == f.table.accurate(id, c));
    }
  }
}

TEST_CASE("noisy verdicts are deterministic per pair") {
  Fixture f;
  OracleRouter oracle(f.table, 0.004);
  NoisyRouter noisy(oracle, 0.1, 0.3, 77);
  CHECK(noisy.eval_latency() == 0.004);
  for (RequestId id = 0; id < 30; ++id) {
    for (std::uint64_t i = 0; i < f.space.size(); ++i) {
      Configuration c = f.space.at_index(i);
      bool first = noisy.evaluate(id, c);
      CHECK(noisy.evaluate(id, c) == first);
      CHECK(noisy.evaluate(id, c) == first);
    }
  }
}

TEST_CASE("zero false positives never invent accuracy") {
  Fixture f;
  OracleRouter oracle(f.table, 0.004);
  NoisyRouter noisy(oracle, 0.0, 0.3, 101);
  for (RequestId id = 0; id < 400; ++id) {
    for (std::uint64_t i = 0; i < f.space.size(); ++i) {
      Configuration c = f.space.at_index(i);
      if (noisy.evaluate(id, c)) CHECK(oracle.evaluate(id, c));
    }
  }
}

TEST_CASE("flip rates match the configuration") {
  Fixture f;
  OracleRouter oracle(f.table, 0.004);
  NoisyRouter noisy(oracle, 0.1, 0.3, 55);
  int true_pairs = 0, dropped = 0, false_pairs = 0, invented = 0;
  for (RequestId id = 0; id < 2000; ++id) {
    for (std::uint64_t i = 0; i < f.space.size(); ++i) {
      Configuration c = f.space.at_index(i);
      bool truth = oracle.evaluate(id, c);
      bool seen = noisy.evaluate(id, c);
      if (truth) {
        ++true_pairs;
        if (!seen) ++dropped;
      } else {
        ++false_pairs;
        if (seen) ++invented;
      }
    }
  }
  REQUIRE(true_pairs > 2000);
  REQUIRE(false_pairs > 2000);
  CHECK(dropped / static_cast<double>(true_pairs) ==
        doctest::Approx(0.3).epsilon(0.1));
  CHECK(invented / static_cast<double>(false_pairs) ==
        doctest::Approx(0.1).epsilon(0.2));
}

TEST_CASE("budget tracks an exponential moving average of queue delay") {
  PredictorBudget budget(0.05, 0.2);
  CHECK(budget.ema() == 0.0);
  CHECK(budget.budget() == 0.05);
  budget.observe_queue_delay(1.0);
  CHECK(budget.ema() == doctest::Approx(0.2));
  budget.observe_queue_delay(2.0);
  CHECK(budget.ema() == doctest::Approx(0.2 * 2.0 + 0.8 * 0.2));
  CHECK(budget.budget() == doctest::Approx(0.56));
  CHECK_THROWS_AS(budget.observe_queue_delay(-0.1), ValidationError);
}

TEST_CASE("budget floor carries an idle system") {
  PredictorBudget budget(0.4, 0.2);
  for (int i = 0; i < 10; ++i) budget.observe_queue_delay(0.0);
  CHECK(budget.ema() == 0.0);
  CHECK(budget.budget() == 0.4);
  budget.observe_queue_delay(10.0);
  CHECK(budget.budget() == doctest::Approx(2.0));
}

TEST_CASE("budget rejects bad construction") {
  CHECK_THROWS_AS(PredictorBudget(-0.1, 0.2), ValidationError);
  CHECK_THROWS_AS(PredictorBudget(0.1, 0.0), ValidationError);
  CHECK_THROWS_AS(PredictorBudget(0.1, 1.5), ValidationError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace aragog
