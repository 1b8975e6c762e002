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
#include <utility>
#include <vector>

#include <doctest.h>

#include "aragog/scheduler.h"
#include "aragog/snapshots.h"
#include "aragog/workflow.h"

namespace aragog {
namespace {

WorkflowGraph diamond() {
  return WorkflowGraph::build(
      {"a", "b", "c", "d"}, {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});
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

EngineState engine(int model, int slots, double weight) {
  EngineState e;
  e.model = model;
  e.slots = slots;
  e.weight = weight;
  return e;
}

std::vector<Configuration> full_space(int agents, int tiers) {
  std::vector<Configuration> out;
  Configuration c;
  c.models.assign(static_cast<std::size_t>(agents), 0);
  while (true) {
    out.push_back(c);
    int k = agents - 1;
    while (k >= 0 && c.models[static_cast<std::size_t>(k)] == tiers - 1) {
      c.models[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
    ++c.models[static_cast<std::size_t>(k)];
  }
  return out;
}

std::vector<const Request*> queue_of(const Request& r) { return {&r}; }

TEST_SUITE("scheduler") {

TEST_CASE("pair order is fifo across requests, depth first within") {
  WorkflowGraph dia = diamond();
  WorkflowGraph ch = chain(3);

  // First arrival: diamond with the root complete, so b and c are ready.
  Request r1 = Request::make(1, 0.0, dia, full_space(4, 2));
  int pa = dia.position_of("a");
  r1.mark_dispatched(pa, 0, 0.0);
  r1.mark_complete(pa, 0.1);

  Request r2 = Request::make(2, 1.0, ch, full_space(3, 2));

  std::vector<const Request*> queue{&r2, &r1};  // container order is irrelevant
  std::vector<ReadyPair> pairs = two_level_order(queue);
  REQUIRE(pairs.size() == 3);
  CHECK(queue[pairs[0].request_index]->id == 1);
  CHECK(pairs[0].agent == dia.position_of("b"));  // ties on declaration index
  CHECK(queue[pairs[1].request_index]->id == 1);
  CHECK(pairs[1].agent == dia.position_of("c"));
  CHECK(queue[pairs[2].request_index]->id == 2);
  CHECK(pairs[2].agent == ch.position_of("a0"));
}

TEST_CASE("stages with more downstream work come first within a request") {
  // z feeds x while y is a free-floating sink, so z has depth 1 and y
  // depth 0; both are ready at the start.
  WorkflowGraph g = WorkflowGraph::build({"x", "y", "z"}, {{"z", "x"}});
  Request r = Request::make(1, 0.0, g, full_space(3, 2));
  std::vector<ReadyPair> pairs = two_level_order(queue_of(r));
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].agent == g.position_of("z"));
  CHECK(pairs[1].agent == g.position_of("y"));
}

TEST_CASE("a pair is skipped only when no candidate engine has a slot") {
  WorkflowGraph g = chain(1);
  Request r = Request::make(1, 0.0, g, {Configuration{{0}}});

  std::vector<EngineState> engines{engine(0, 1, 2.0), engine(1, 4, 1.0)};
  engines[0].submit_stage(99, 0, 1e18);  // the only candidate pool is full

  Assignment out = beam_schedule(queue_of(r), engines, SchedulerParams{4});
  CHECK(out.triples.empty());
  CHECK(out.skips == 1);
  CHECK(audit_round_fairness(queue_of(r), engines, out).empty());
}

TEST_CASE("parallel branches of one request stay mutually consistent") {
  WorkflowGraph g = diamond();
  // After the root ran model 0 the surviving configurations pair a cheap b
  // with an expensive c or the reverse; b and c may not both go cheap even
  // though that would score higher.
  std::vector<Configuration> viable{Configuration{{0, 0, 1, 1}},
                                    Configuration{{0, 1, 0, 1}}};
  Request r = Request::make(1, 0.0, g, viable);
  int pa = g.position_of("a");
  r.mark_dispatched(pa, 0, 0.0);
  r.mark_complete(pa, 0.1);

  std::vector<EngineState> engines{engine(0, 4, 2.0), engine(1, 4, 1.0)};
  Assignment out = beam_schedule(queue_of(r), engines, SchedulerParams{4});
  REQUIRE(out.triples.size() == 2);
  CHECK(out.utilization == doctest::Approx(3.0));
  int mb = out.triples[0].model;
  int mc = out.triples[1].model;
  CHECK(mb + mc == 1);  // one cheap, one expensive
  CHECK(mb == 0);       // equal-score alternatives resolve to smaller triples
}

TEST_CASE("equal utilization ties break toward flexibility") {
  WorkflowGraph g = chain(2);
  std::vector<Configuration> viable{Configuration{{0, 0}},
                                    Configuration{{0, 1}},
                                    Configuration{{1, 1}}};
  Request r = Request::make(1, 0.0, g, viable);
  // Same weight on both pools, so utilization cannot separate the choices.
  std::vector<EngineState> engines{engine(0, 1, 1.0), engine(1, 1, 1.0)};
  Assignment out = beam_schedule(queue_of(r), engines, SchedulerParams{1});
  REQUIRE(out.triples.size() == 1);
  // Model 0 keeps two of three configurations alive; model 1 keeps one.
  CHECK(out.triples[0].model == 0);
  CHECK(out.flexibility == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("joint choice beats pairwise greed on coupled branches") {
  WorkflowGraph g = diamond();
  // Two incomparable viable branches: a cheap b forces an expensive c and
  // the other way round. Greedy grabs the heavy pool for b and strands c on
  // the lightest one.
  std::vector<Configuration> viable;
  for (int b = 0; b < 3; ++b) {
    for (int c = 0; c < 3; ++c) {
      for (int d = 0; d < 3; ++d) {
        if (c >= 2 || b >= 1) viable.push_back(Configuration{{0, b, c, d}});
      }
    }
  }
  Request r = Request::make(1, 0.0, g, viable);
  int pa = g.position_of("a");
  r.mark_dispatched(pa, 0, 0.0);
  r.mark_complete(pa, 0.1);

  std::vector<EngineState> engines{engine(0, 1, 3.0), engine(1, 1, 1.7),
                                   engine(2, 1, 0.9)};
  Assignment greedy = beam_schedule(queue_of(r), engines, SchedulerParams{1});
  Assignment beam = beam_schedule(queue_of(r), engines, SchedulerParams{4});
  Assignment brute = brute_force_schedule(queue_of(r), engines);
  CHECK(greedy.utilization == doctest::Approx(3.9));
  CHECK(beam.utilization == doctest::Approx(4.7));
  CHECK(brute.utilization == doctest::Approx(4.7));
}

TEST_CASE("wider beams never score worse on random snapshots") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto snap = generate_snapshot(7, i);
    auto queue = snap->queue();
    double prev = -1.0;
    for (int width : {1, 2, 4, 8}) {
      Assignment out =
          beam_schedule(queue, snap->engines, SchedulerParams{width});
      CHECK(out.utilization >= prev - 1e-9);
      prev = out.utilization;
    }
    Assignment brute = brute_force_schedule(queue, snap->engines, 5000000);
    CHECK(brute.utilization >= prev - 1e-9);
  }
}

TEST_CASE("beam rounds pass the fairness audit on random snapshots") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto snap = generate_snapshot(15, i);
    auto queue = snap->queue();
    Assignment out = beam_schedule(queue, snap->engines, SchedulerParams{4});
    CHECK(audit_round_fairness(queue, snap->engines, out).empty());
  }
}

TEST_CASE("the audit flags a dropped assignment") {
  WorkflowGraph g = chain(1);
  Request r1 = Request::make(1, 0.0, g, full_space(1, 2));
  Request r2 = Request::make(2, 1.0, g, full_space(1, 2));
  std::vector<const Request*> queue{&r1, &r2};
  std::vector<EngineState> engines{engine(0, 2, 2.0), engine(1, 2, 1.0)};

  Assignment out = beam_schedule(queue, engines, SchedulerParams{4});
  REQUIRE(out.triples.size() == 2);
  CHECK(audit_round_fairness(queue, engines, out).empty());

  Assignment doctored = out;
  doctored.triples.erase(doctored.triples.begin());
  std::vector<FairnessViolation> violations =
      audit_round_fairness(queue, engines, doctored);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].request == 1);
}

TEST_CASE("apply stamps dispatches and drops stale triples") {
  WorkflowGraph g = chain(2);
  Request r1 = Request::make(1, 0.0, g, full_space(2, 2));
  Request r2 = Request::make(2, 1.0, g, full_space(2, 2));
  std::vector<const Request*> cqueue{&r1, &r2};
  std::vector<EngineState> engines{engine(0, 2, 2.0), engine(1, 2, 1.0)};

  Assignment out = beam_schedule(cqueue, engines, SchedulerParams{4});
  REQUIRE(out.triples.size() == 2);

  // The heavy pool fills up between the decision and the apply.
  engines[0].submit_stage(77, 0, 1e18);
  engines[0].submit_stage(78, 0, 1e18);

  std::vector<Request*> queue{&r1, &r2};
  ApplyOutcome first = apply_assignment(
      out, queue, engines, 5.0, [](RequestId, int, int) { return 2.5; });
  CHECK(first.applied.empty());
  REQUIRE(first.stale.size() == 2);
  for (const AssignmentTriple& t : first.stale) CHECK(t.model == 0);
  CHECK(r1.dispatch_time[0] == -1.0);
  CHECK(r1.stages[0] == StageState::kReady);

  // A fresh round routes around the full pool.
  Assignment retry = beam_schedule(cqueue, engines, SchedulerParams{4});
  ApplyOutcome second = apply_assignment(
      retry, queue, engines, 6.0, [](RequestId, int, int) { return 2.5; });
  CHECK(second.stale.empty());
  REQUIRE(second.applied.size() == 2);
  CHECK(r1.dispatch_time[0] == 6.0);
  CHECK(r1.executed_model[0] == 1);
  CHECK(r1.stages[0] == StageState::kInFlight);
  CHECK(engines[1].occupancy() == 2);
  CHECK(engines[1].in_flight[0].complete_at == doctest::Approx(8.5));
}

TEST_CASE("apply rejects nonpositive service times") {
  WorkflowGraph g = chain(1);
  Request r = Request::make(1, 0.0, g, full_space(1, 2));
  std::vector<EngineState> engines{engine(0, 1, 2.0), engine(1, 1, 1.0)};
  Assignment out = beam_schedule(queue_of(r), engines, SchedulerParams{1});
  REQUIRE(!out.triples.empty());
  std::vector<Request*> queue{&r};
  CHECK_THROWS_AS(apply_assignment(out, queue, engines, 0.0,
                                   [](RequestId, int, int) { return 0.0; }),
                  ValidationError);
}

TEST_CASE("the oracle refuses to explore past its cap") {
  WorkflowGraph g = chain(1);
  Request r1 = Request::make(1, 0.0, g, full_space(1, 3));
  Request r2 = Request::make(2, 1.0, g, full_space(1, 3));
  std::vector<const Request*> queue{&r1, &r2};
  std::vector<EngineState> engines{engine(0, 2, 3.0), engine(1, 2, 1.7),
                                   engine(2, 2, 0.9)};
  CHECK_THROWS_AS(brute_force_schedule(queue, engines, 2), ValidationError);
  CHECK_NOTHROW(brute_force_schedule(queue, engines));
}

TEST_CASE("score validates occupancy against capacity") {
  WorkflowGraph g = chain(1);
  Request r = Request::make(1, 0.0, g, full_space(1, 2));
  std::vector<const Request*> queue = queue_of(r);
  std::vector<EngineState> engines{engine(0, 2, 2.0), engine(1, 2, 1.0)};

  PartialAssignment partial;
  partial.occupancy = {1, 2};
  CHECK(score_assignment(partial, engines, queue).utilization ==
        doctest::Approx(4.0));
  CHECK(score_assignment(partial, engines, queue).flexibility == 1.0);

  partial.occupancy = {3, 0};
  CHECK_THROWS_AS(score_assignment(partial, engines, queue), ValidationError);
  partial.occupancy = {1};
  CHECK_THROWS_AS(score_assignment(partial, engines, queue), ValidationError);
}

TEST_CASE("empty queue schedules nothing") {
  std::vector<const Request*> queue;
  std::vector<EngineState> engines{engine(0, 2, 2.0), engine(1, 2, 1.0)};
  Assignment out = beam_schedule(queue, engines, SchedulerParams{4});
  CHECK(out.triples.empty());
  CHECK(out.skips == 0);
  CHECK(out.utilization == 0.0);
  CHECK(audit_round_fairness(queue, engines, out).empty());
}

TEST_CASE("duplicate engine pools for one tier are rejected") {
  WorkflowGraph g = chain(1);
  Request r = Request::make(1, 0.0, g, {Configuration{{0}}});
  std::vector<EngineState> engines{engine(0, 2, 2.0), engine(0, 2, 1.0)};
  CHECK_THROWS_AS(beam_schedule(queue_of(r), engines, SchedulerParams{4}),
                  ValidationError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace aragog
