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

#include "aragog/snapshots.h"

#include <string>
#include <utility>

#include "aragog/accuracy.h"
#include "aragog/rng.h"

namespace aragog {

namespace {

constexpr double kCosts[] = {1.0, 2.1, 4.4, 9.0};
constexpr double kWeights[] = {3.0, 1.7, 0.9, 0.5};

WorkflowGraph make_graph(rng::Stream& stream) {
  // Diamonds dominate the mix: parallel branches with coupled viable sets
  // are the one shape where pairwise-greedy rounds can be strictly
  // suboptimal.
  if (stream.next_bernoulli(0.6)) {
    return WorkflowGraph::build(
        {"a", "b", "c", "d"},
        {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});
  }
  int len = 1 + static_cast<int>(stream.next_below(3));
  std::vector<std::string> agents;
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 0; i < len; ++i) {
    agents.push_back("a" + std::to_string(i));
    if (i > 0) edges.emplace_back(agents[static_cast<std::size_t>(i - 1)],
                                  agents[static_cast<std::size_t>(i)]);
  }
  return WorkflowGraph::build(agents, edges);
}

}  // namespace

std::vector<const Request*> SchedulerSnapshot::queue() const {
  std::vector<const Request*> q;
  q.reserve(requests.size());
  for (const Request& r : requests) q.push_back(&r);
  return q;
}

std::unique_ptr<SchedulerSnapshot> generate_snapshot(std::uint64_t seed,
                                                     std::uint64_t index) {
  rng::Stream stream(rng::mix({seed, rng::kSnapshotSalt, index}));

  const int tiers = 3 + static_cast<int>(stream.next_below(2));
  std::vector<ModelSpec> models;
  for (int m = 0; m < tiers; ++m) {
    models.push_back(ModelSpec{"m" + std::to_string(m), kCosts[m], kWeights[m]});
  }

  auto snapshot = std::make_unique<SchedulerSnapshot>(make_graph(stream),
                                                      ModelCatalog(models));
  ConfigSpace space(snapshot->graph, snapshot->catalog);

  // Background load fills at most half a pool, so capacity usually exceeds
  // the queue: placement quality, not admission, separates the schedulers.
  for (int m = 0; m < tiers; ++m) {
    EngineState engine;
    engine.model = m;
    engine.slots = 2 + static_cast<int>(stream.next_below(3));
    engine.weight = kWeights[m];
    int busy = static_cast<int>(
        stream.next_below(static_cast<std::uint64_t>(engine.slots / 2) + 1));
    for (int b = 0; b < busy; ++b) {
      // Background stages from requests outside the snapshot.
      engine.in_flight.push_back(
          InFlightStage{1000000 + static_cast<RequestId>(b), 0, 1e18});
    }
    snapshot->engines.push_back(std::move(engine));
  }

  AccuracyGenParams params;
  params.p_easy = 0.2;
  params.p_medium = 0.55;
  params.p_hard = 0.25;
  params.easy_base_prob = 0.5;

  // Wider tiers branch harder, so fewer requests keep the oracle tractable.
  std::size_t count = tiers == 4 ? 2 + stream.next_below(2)
                                 : 2 + stream.next_below(4);
  for (std::size_t i = 0; i < count; ++i) {
    AccurateSet set = generate_accurate_set(space, params, seed,
                                            index * 64 + i, rng::kSnapshotSalt);
    Request r = Request::make(i, static_cast<double>(i), snapshot->graph,
                              enumerate_members(set, space));
    // Random consistent progress: dispatch and complete a few stages. Fanout
    // roots mostly complete in one step so both branches sit in the queue.
    double advance = snapshot->graph.num_agents() == 4 ? 0.7 : 0.45;
    int progressed = 0;
    while (progressed + 1 < snapshot->graph.num_agents()) {
      std::vector<int> ready = r.ready_agents();
      if (ready.empty() || !stream.next_bernoulli(advance)) break;
      int agent = ready[stream.next_below(ready.size())];
      std::vector<int> cands = r.candidate_models(agent);
      int model = cands[stream.next_below(cands.size())];
      r.mark_dispatched(agent, model, r.arrival);
      r.mark_complete(agent, r.arrival);
      ++progressed;
      advance *= 0.35;
    }
    snapshot->requests.push_back(std::move(r));
  }
  return snapshot;
}

}  // namespace aragog
