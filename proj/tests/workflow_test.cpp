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
#include <string>
#include <vector>

#include <doctest.h>

#include "aragog/rng.h"
#include "aragog/workflow.h"

namespace aragog {
namespace {

ModelCatalog three_tiers() {
  return ModelCatalog({{"s", 1.0, 3.0}, {"m", 2.0, 1.5}, {"l", 4.0, 0.7}});
}

WorkflowGraph chain(int n) {
  std::vector<std::string> agents;
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 0; i < n; ++i) {
    agents.push_back("a" + std::to_string(i));
    if (i > 0) edges.emplace_back(agents[i - 1], agents[i]);
  }
  return WorkflowGraph::build(agents, edges);
}

// Longest path to any sink, recomputed the slow way.
int depth_oracle(const std::vector<std::vector<int>>& succs, int node) {
  int best = 0;
  for (int s : succs[node]) best = std::max(best, 1 + depth_oracle(succs, s));
  return best;
}

TEST_SUITE("workflow") {

TEST_CASE("catalog rejects bad tier orderings") {
  CHECK_THROWS_AS(ModelCatalog({{"only", 1.0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(ModelCatalog({{"a", 2.0, 3.0}, {"b", 2.0, 1.0}}),
                  ValidationError);
  CHECK_THROWS_AS(ModelCatalog({{"a", 1.0, 1.0}, {"b", 2.0, 2.0}}),
                  ValidationError);
  CHECK_THROWS_AS(ModelCatalog({{"a", -1.0, 3.0}, {"b", 2.0, 1.0}}),
                  ValidationError);
  CHECK_NOTHROW(three_tiers());
}

TEST_CASE("graph validation names the problem") {
  CHECK_THROWS_AS(WorkflowGraph::build({"a", "a"}, {}), ValidationError);
  CHECK_THROWS_AS(WorkflowGraph::build({"a"}, {{"a", "b"}}), ValidationError);
  CHECK_THROWS_AS(WorkflowGraph::build({"a"}, {{"a", "a"}}), ValidationError);
  try {
    WorkflowGraph::build({"a", "b", "c"},
                         {{"a", "b"}, {"b", "c"}, {"c", "a"}});
    FAIL("expected a cycle error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("cycle") != std::string::npos);
  }
}

TEST_CASE("canonical order breaks depth ties on declaration index") {
  // z precedes x in the topo order forced by the edge, but among the two
  // sinks y and x the declared-earlier one must come first.
  WorkflowGraph g = WorkflowGraph::build({"x", "y", "z"}, {{"z", "x"}});
  std::vector<std::string> order = g.topo_order();
  CHECK(order == std::vector<std::string>{"y", "z", "x"});
  CHECK(g.position_of("y") == 0);
  CHECK(g.position_of("z") == 1);
  CHECK(g.position_of("x") == 2);
  CHECK(g.declaration_index(g.position_of("z")) == 2);
  CHECK(g.agent_name(1) == "z");
}

TEST_CASE("diamond depths and neighbors") {
  WorkflowGraph g = WorkflowGraph::build(
      {"a", "b", "c", "d"}, {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});
  int pa = g.position_of("a"), pb = g.position_of("b");
  int pc = g.position_of("c"), pd = g.position_of("d");
  CHECK(g.depth(pa) == 2);
  CHECK(g.depth(pb) == 1);
  CHECK(g.depth(pc) == 1);
  CHECK(g.depth(pd) == 0);
  CHECK(g.predecessors(pd) == std::vector<int>{pb, pc});
  CHECK(g.successors(pa) == std::vector<int>{pb, pc});
  CHECK(g.predecessors(pa).empty());
}

TEST_CASE("depth matches a recursive oracle on random dags") {
  rng::Stream stream(rng::mix({99, 0xD46}));
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + static_cast<int>(stream.next_below(6));
    std::vector<std::string> agents;
    for (int i = 0; i < n; ++i) agents.push_back("n" + std::to_string(i));
    // Edges only go declaration-forward, so the graph is a DAG by
    // construction while the canonical order may still reshuffle.
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (stream.next_bernoulli(0.3)) edges.emplace_back(agents[i], agents[j]);
      }
    }
    WorkflowGraph g = WorkflowGraph::build(agents, edges);
    std::vector<std::vector<int>> succs(static_cast<std::size_t>(n));
    for (int pos = 0; pos < n; ++pos) succs[pos] = g.successors(pos);
    for (int pos = 0; pos < n; ++pos) {
      CHECK(g.depth(pos) == depth_oracle(succs, pos));
    }
    // Canonical order is topological: every edge goes forward.
    for (int pos = 0; pos < n; ++pos) {
      for (int s : g.successors(pos)) CHECK(s > pos);
    }
  }
}

TEST_CASE("config comparison") {
  Configuration a{{0, 1}}, b{{1, 1}}, c{{0, 2}};
  CHECK(compare_configs(a, a) == ConfigOrder::kEqual);
  CHECK(compare_configs(a, b) == ConfigOrder::kBelow);
  CHECK(compare_configs(b, a) == ConfigOrder::kAbove);
  CHECK(compare_configs(b, c) == ConfigOrder::kIncomparable);
  CHECK(config_leq(a, b));
  CHECK(!config_leq(b, c));
  CHECK_THROWS_AS(compare_configs(a, Configuration{{0, 1, 2}}), ValidationError);
}

TEST_CASE("space index round trip preserves lexicographic order") {
  WorkflowGraph g = chain(3);
  ModelCatalog cat = three_tiers();
  ConfigSpace space(g, cat);
  REQUIRE(space.indexable());
  REQUIRE(space.size() == 27);

  std::vector<Configuration> by_index;
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    Configuration c = space.at_index(i);
    CHECK(space.index_of(c) == i);
    by_index.push_back(c);
  }
  CHECK(std::is_sorted(by_index.begin(), by_index.end()));
  CHECK(by_index.front() == space.base());
  CHECK(by_index.back() == space.top());
  CHECK(space.is_top(space.top()));
  CHECK(!space.is_top(space.base()));
}

TEST_CASE("upgrade successors raise exactly one agent by one") {
  WorkflowGraph g = chain(3);
  ModelCatalog cat = three_tiers();
  ConfigSpace space(g, cat);
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    Configuration c = space.at_index(i);
    int below_top = 0;
    for (int m : c.models) below_top += (m < space.num_models() - 1) ? 1 : 0;
    std::vector<Configuration> succ = space.upgrade_successors(c);
    CHECK(static_cast<int>(succ.size()) == below_top);
    for (const Configuration& s : succ) {
      int diff = 0;
      for (std::size_t k = 0; k < c.models.size(); ++k) {
        if (s.models[k] != c.models[k]) {
          ++diff;
          CHECK(s.models[k] == c.models[k] + 1);
        }
      }
      CHECK(diff == 1);
    }
  }
  CHECK(space.upgrade_successors(space.top()).empty());
}

TEST_CASE("static cost sums the catalog") {
  WorkflowGraph g = chain(3);
  ModelCatalog cat = three_tiers();
  ConfigSpace space(g, cat);
  CHECK(space.static_cost(space.base()) == doctest::Approx(3.0));
  CHECK(space.static_cost(space.top()) == doctest::Approx(12.0));
  CHECK(space.static_cost(Configuration{{0, 1, 2}}) == doctest::Approx(7.0));
}

TEST_CASE("space validate rejects malformed configurations") {
  WorkflowGraph g = chain(2);
  ModelCatalog cat = three_tiers();
  ConfigSpace space(g, cat);
  CHECK_THROWS_AS(space.validate(Configuration{{0}}), ValidationError);
  CHECK_THROWS_AS(space.validate(Configuration{{0, 3}}), ValidationError);
  CHECK_THROWS_AS(space.validate(Configuration{{-1, 0}}), ValidationError);
  CHECK_NOTHROW(space.validate(Configuration{{2, 1}}));
}

}  // TEST_SUITE

}  // namespace
}  // namespace aragog
