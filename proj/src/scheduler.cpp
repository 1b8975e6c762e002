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

#include "aragog/scheduler.h"

#include <algorithm>
#include <numeric>

namespace aragog {

namespace {

constexpr std::size_t kMaxEngines = 32;  // masks are uint32

// Shared round context: ordered pairs, per-pair base candidate engine masks,
// model -> engine lookup.
struct RoundContext {
  const std::vector<const Request*>& queue;
  const std::vector<EngineState>& engines;
  std::vector<ReadyPair> pairs;
  std::vector<std::uint32_t> base_mask;  // per pair, over engine indices
  std::vector<int> model_to_engine;

  explicit RoundContext(const std::vector<const Request*>& q,
                        const std::vector<EngineState>& e)
      : queue(q), engines(e) {
    if (engines.size() > kMaxEngines) {
      throw ValidationError("more engine pools than the scheduler supports");
    }
    int max_model = -1;
    for (const EngineState& eng : engines) max_model = std::max(max_model, eng.model);
    model_to_engine.assign(static_cast<std::size_t>(max_model + 1), -1);
    for (std::size_t i = 0; i < engines.size(); ++i) {
      int m = engines[i].model;
      if (m < 0) throw ValidationError("engine with negative model tier");
      if (model_to_engine[static_cast<std::size_t>(m)] != -1) {
        throw ValidationError("two engine pools serve the same model tier");
      }
      model_to_engine[static_cast<std::size_t>(m)] = static_cast<int>(i);
    }

    pairs = two_level_order(queue);
    base_mask.reserve(pairs.size());
    for (const ReadyPair& p : pairs) {
      base_mask.push_back(mask_of_models(
          queue[p.request_index]->candidate_models(p.agent)));
    }
  }

  std::uint32_t mask_of_models(const std::vector<int>& models) const {
    std::uint32_t mask = 0;
    for (int m : models) {
      if (m < 0 || static_cast<std::size_t>(m) >= model_to_engine.size() ||
          model_to_engine[static_cast<std::size_t>(m)] < 0) {
        throw ValidationError("viable model tier without an engine pool");
      }
      mask |= 1u << model_to_engine[static_cast<std::size_t>(m)];
    }
    return mask;
  }
};

struct TouchedEntry {
  std::size_t request_index = 0;
  std::vector<std::uint32_t> surviving;  // indices into the request's viable
};

struct BeamState {
  std::vector<AssignmentTriple> triples;
  std::vector<int> occupancy;
  std::uint32_t free_mask = 0;
  double util = 0.0;
  double flex_sum = 0.0;
  int flex_count = 0;
  long skips = 0;
  std::vector<TouchedEntry> touched;

  double flexibility() const {
    return flex_count > 0 ? flex_sum / flex_count : 1.0;
  }
};

bool triples_less(const std::vector<AssignmentTriple>& a,
                  const std::vector<AssignmentTriple>& b) {
  auto key = [](const AssignmentTriple& t) {
    return std::tuple<std::size_t, int, int>(t.request_index, t.agent, t.model);
  };
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(),
      [&](const AssignmentTriple& x, const AssignmentTriple& y) {
        return key(x) < key(y);
      });
}

// Total order on candidate states: utilization, then flexibility, then fewer
// forced skips, then lexicographically smallest triple sequence.
bool state_better(const BeamState& a, const BeamState& b) {
  if (a.util != b.util) return a.util > b.util;
  double fa = a.flexibility(), fb = b.flexibility();
  if (fa != fb) return fa > fb;
  if (a.skips != b.skips) return a.skips < b.skips;
  return triples_less(a.triples, b.triples);
}

BeamState initial_state(const RoundContext& ctx) {
  BeamState s;
  s.occupancy.reserve(ctx.engines.size());
  for (std::size_t i = 0; i < ctx.engines.size(); ++i) {
    const EngineState& e = ctx.engines[i];
    if (e.occupancy() > e.slots) throw ValidationError("engine over capacity");
    s.occupancy.push_back(e.occupancy());
    s.util += e.occupancy() * e.weight;
    if (e.slots_available() > 0) s.free_mask |= 1u << i;
  }
  return s;
}

const TouchedEntry* find_touched(const BeamState& s, std::size_t request_index) {
  for (const TouchedEntry& t : s.touched) {
    if (t.request_index == request_index) return &t;
  }
  return nullptr;
}

// Candidate engines for the pair in this branch: the request's viable set
// narrowed by in-round choices, intersected with engines that still have a
// free slot.
std::uint32_t allowed_engines(const RoundContext& ctx, const BeamState& s,
                              std::size_t pair_idx) {
  const ReadyPair& pair = ctx.pairs[pair_idx];
  std::uint32_t mask;
  const TouchedEntry* entry = find_touched(s, pair.request_index);
  if (entry == nullptr) {
    mask = ctx.base_mask[pair_idx];
  } else {
    const Request& r = *ctx.queue[pair.request_index];
    mask = 0;
    for (std::uint32_t j : entry->surviving) {
      int m = r.viable[j].models[static_cast<std::size_t>(pair.agent)];
      mask |= 1u << ctx.model_to_engine[static_cast<std::size_t>(m)];
    }
  }
  return mask & s.free_mask;
}

BeamState extend_state(const RoundContext& ctx, const BeamState& s,
                       std::size_t pair_idx, int engine_idx) {
  const ReadyPair& pair = ctx.pairs[pair_idx];
  const Request& r = *ctx.queue[pair.request_index];
  const int model = ctx.engines[static_cast<std::size_t>(engine_idx)].model;

  BeamState next = s;
  next.triples.push_back(AssignmentTriple{pair.request_index, r.id, pair.agent,
                                          model});
  int& occ = next.occupancy[static_cast<std::size_t>(engine_idx)];
  ++occ;
  if (occ >= ctx.engines[static_cast<std::size_t>(engine_idx)].slots) {
    next.free_mask &= ~(1u << engine_idx);
  }
  next.util += ctx.engines[static_cast<std::size_t>(engine_idx)].weight;

  const double initial = static_cast<double>(r.viable.size());
  TouchedEntry* entry = nullptr;
  for (TouchedEntry& t : next.touched) {
    if (t.request_index == pair.request_index) {
      entry = &t;
      break;
    }
  }
  if (entry == nullptr) {
    TouchedEntry t;
    t.request_index = pair.request_index;
    for (std::uint32_t j = 0; j < r.viable.size(); ++j) {
      if (r.viable[j].models[static_cast<std::size_t>(pair.agent)] == model) {
        t.surviving.push_back(j);
      }
    }
    next.flex_sum += static_cast<double>(t.surviving.size()) / initial;
    ++next.flex_count;
    next.touched.push_back(std::move(t));
  } else {
    double before = static_cast<double>(entry->surviving.size()) / initial;
    std::vector<std::uint32_t> kept;
    for (std::uint32_t j : entry->surviving) {
      if (r.viable[j].models[static_cast<std::size_t>(pair.agent)] == model) {
        kept.push_back(j);
      }
    }
    entry->surviving = std::move(kept);
    next.flex_sum +=
        static_cast<double>(entry->surviving.size()) / initial - before;
  }
  return next;
}

Assignment finalize(const RoundContext& ctx, BeamState winner,
                    std::size_t states_explored) {
  Assignment out;
  out.skips = winner.skips;
  out.states_explored = states_explored;
  out.occupancy = std::move(winner.occupancy);
  out.triples = std::move(winner.triples);
  PartialAssignment partial{out.triples, out.occupancy, out.skips};
  ScorePair score = score_assignment(partial, ctx.engines, ctx.queue);
  out.utilization = score.utilization;
  out.flexibility = score.flexibility;
  return out;
}

}  // namespace

std::vector<ReadyPair> two_level_order(const std::vector<const Request*>& queue) {
  std::vector<std::size_t> order(queue.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Request& ra = *queue[a];
    const Request& rb = *queue[b];
    if (ra.arrival != rb.arrival) return ra.arrival < rb.arrival;
    return ra.id < rb.id;
  });

  std::vector<ReadyPair> pairs;
  for (std::size_t qi : order) {
    const Request& r = *queue[qi];
    std::vector<int> ready = r.ready_agents();
    std::sort(ready.begin(), ready.end(), [&](int a, int b) {
      int da = r.graph->depth(a), db = r.graph->depth(b);
      if (da != db) return da > db;
      return r.graph->declaration_index(a) < r.graph->declaration_index(b);
    });
    for (int agent : ready) pairs.push_back(ReadyPair{qi, agent});
  }
  return pairs;
}

ScorePair score_assignment(const PartialAssignment& partial,
                           const std::vector<EngineState>& engines,
                           const std::vector<const Request*>& queue) {
  if (partial.occupancy.size() != engines.size()) {
    throw ValidationError("occupancy length does not match engine count");
  }
  ScorePair score;
  for (std::size_t i = 0; i < engines.size(); ++i) {
    if (partial.occupancy[i] < 0 || partial.occupancy[i] > engines[i].slots) {
      throw ValidationError("occupancy outside engine capacity");
    }
    score.utilization += partial.occupancy[i] * engines[i].weight;
  }

  double flex_sum = 0.0;
  int flex_count = 0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    bool touched = false;
    int consistent = 0;
    for (const Configuration& c : queue[qi]->viable) {
      bool ok = true;
      for (const AssignmentTriple& t : partial.triples) {
        if (t.request_index != qi) continue;
        touched = true;
        if (c.models[static_cast<std::size_t>(t.agent)] != t.model) {
          ok = false;
          break;
        }
      }
      if (ok) ++consistent;
    }
    if (touched) {
      flex_sum += static_cast<double>(consistent) /
                  static_cast<double>(queue[qi]->viable.size());
      ++flex_count;
    }
  }
  score.flexibility = flex_count > 0 ? flex_sum / flex_count : 1.0;
  return score;
}

Assignment beam_schedule(const std::vector<const Request*>& queue,
                         const std::vector<EngineState>& engines,
                         const SchedulerParams& params) {
  if (params.beam_width < 1) throw ValidationError("beam width < 1");
  const std::size_t width = static_cast<std::size_t>(params.beam_width);
  RoundContext ctx(queue, engines);

  std::vector<BeamState> states;
  states.push_back(initial_state(ctx));
  std::size_t explored = 1;

  for (std::size_t pi = 0; pi < ctx.pairs.size(); ++pi) {
    // Once every branch is out of slots the remaining pairs are all forced
    // skips; account for them and stop expanding.
    bool any_free = false;
    for (const BeamState& s : states) {
      if (s.free_mask != 0) {
        any_free = true;
        break;
      }
    }
    if (!any_free) {
      long remaining = static_cast<long>(ctx.pairs.size() - pi);
      for (BeamState& s : states) s.skips += remaining;
      explored += states.size() * static_cast<std::size_t>(remaining);
      break;
    }

    std::vector<std::uint32_t> masks(states.size());
    bool any_candidate = false;
    for (std::size_t si = 0; si < states.size(); ++si) {
      masks[si] = allowed_engines(ctx, states[si], pi);
      if (masks[si] != 0) any_candidate = true;
    }
    // All branches skip this pair: an in-place pass keeps order and scores
    // consistent with full expansion.
    if (!any_candidate) {
      for (BeamState& s : states) ++s.skips;
      explored += states.size();
      continue;
    }

    std::vector<BeamState> children;
    std::vector<std::size_t> parent_of;
    for (std::size_t si = 0; si < states.size(); ++si) {
      if (masks[si] == 0) {
        BeamState child = states[si];
        ++child.skips;
        children.push_back(std::move(child));
        parent_of.push_back(si);
        continue;
      }
      for (std::size_t e = 0; e < engines.size(); ++e) {
        if ((masks[si] >> e) & 1u) {
          children.push_back(extend_state(ctx, states[si], pi,
                                          static_cast<int>(e)));
          parent_of.push_back(si);
        }
      }
    }
    explored += children.size();

    // Nested retention: level w adopts the best unused child of the first w
    // parents; the first w-1 picks are exactly the width-(w-1) beam.
    std::vector<std::size_t> picked;
    std::vector<char> used(children.size(), 0);
    for (std::size_t w = 1; w <= width; ++w) {
      std::size_t best = children.size();
      for (std::size_t j = 0; j < children.size(); ++j) {
        if (used[j] || parent_of[j] >= w) continue;
        if (best == children.size() || state_better(children[j], children[best])) {
          best = j;
        }
      }
      if (best == children.size()) continue;
      used[best] = 1;
      picked.push_back(best);
    }
    std::vector<BeamState> next;
    next.reserve(picked.size());
    for (std::size_t j : picked) next.push_back(std::move(children[j]));
    states = std::move(next);
  }

  std::size_t best = 0;
  for (std::size_t si = 1; si < states.size(); ++si) {
    if (state_better(states[si], states[best])) best = si;
  }
  return finalize(ctx, std::move(states[best]), explored);
}

Assignment brute_force_schedule(const std::vector<const Request*>& queue,
                                const std::vector<EngineState>& engines,
                                std::size_t state_cap) {
  RoundContext ctx(queue, engines);
  std::size_t visited = 0;
  bool have_best = false;
  BeamState best;

  // Plain DFS with state copies; the cap bounds total nodes.
  std::vector<std::pair<BeamState, std::size_t>> stack;
  stack.emplace_back(initial_state(ctx), 0);
  while (!stack.empty()) {
    auto [state, pi] = std::move(stack.back());
    stack.pop_back();
    if (++visited > state_cap) {
      throw ValidationError("assignment search space exceeds the oracle cap");
    }
    if (pi == ctx.pairs.size()) {
      if (!have_best || state_better(state, best)) {
        best = std::move(state);
        have_best = true;
      }
      continue;
    }
    std::uint32_t mask = allowed_engines(ctx, state, pi);
    if (mask == 0) {
      BeamState child = std::move(state);
      ++child.skips;
      stack.emplace_back(std::move(child), pi + 1);
      continue;
    }
    for (std::size_t e = 0; e < engines.size(); ++e) {
      if ((mask >> e) & 1u) {
        stack.emplace_back(extend_state(ctx, state, pi, static_cast<int>(e)),
                           pi + 1);
      }
    }
  }
  return finalize(ctx, std::move(best), visited);
}

ApplyOutcome apply_assignment(
    const Assignment& assignment, const std::vector<Request*>& queue,
    std::vector<EngineState>& engines, double now,
    const std::function<double(RequestId, int, int)>& service_time) {
  std::vector<int> model_to_engine;
  int max_model = -1;
  for (const EngineState& e : engines) max_model = std::max(max_model, e.model);
  model_to_engine.assign(static_cast<std::size_t>(max_model + 1), -1);
  for (std::size_t i = 0; i < engines.size(); ++i) {
    model_to_engine[static_cast<std::size_t>(engines[i].model)] =
        static_cast<int>(i);
  }

  ApplyOutcome outcome;
  for (const AssignmentTriple& t : assignment.triples) {
    if (t.model < 0 || static_cast<std::size_t>(t.model) >= model_to_engine.size() ||
        model_to_engine[static_cast<std::size_t>(t.model)] < 0) {
      throw ValidationError("assignment names a model without an engine pool");
    }
    EngineState& engine =
        engines[static_cast<std::size_t>(model_to_engine[static_cast<std::size_t>(t.model)])];
    if (engine.slots_available() <= 0) {
      outcome.stale.push_back(t);
      continue;
    }
    Request& r = *queue[t.request_index];
    double duration = service_time(r.id, t.agent, t.model);
    if (duration <= 0) throw ValidationError("service time must be positive");
    engine.submit_stage(r.id, t.agent, now + duration);
    r.mark_dispatched(t.agent, t.model, now);
    outcome.applied.push_back(t);
  }
  return outcome;
}

std::vector<FairnessViolation> audit_round_fairness(
    const std::vector<const Request*>& queue,
    const std::vector<EngineState>& engines, const Assignment& assignment) {
  RoundContext ctx(queue, engines);
  BeamState state = initial_state(ctx);

  std::vector<FairnessViolation> violations;
  std::size_t pos = 0;
  for (std::size_t pi = 0; pi < ctx.pairs.size(); ++pi) {
    const ReadyPair& pair = ctx.pairs[pi];
    bool assigned = pos < assignment.triples.size() &&
                    assignment.triples[pos].request_index == pair.request_index &&
                    assignment.triples[pos].agent == pair.agent;
    if (assigned) {
      int eng = ctx.model_to_engine[static_cast<std::size_t>(
          assignment.triples[pos].model)];
      state = extend_state(ctx, state, pi, eng);
      ++pos;
    } else if (allowed_engines(ctx, state, pi) != 0) {
      violations.push_back(
          FairnessViolation{ctx.queue[pair.request_index]->id, pair.agent});
    }
  }
  return violations;
}

}  // namespace aragog
