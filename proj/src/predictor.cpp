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

#include "aragog/predictor.h"

#include <algorithm>
#include <map>
#include <utility>

namespace aragog {

namespace {

constexpr int kDefaultChainCap = 64;

struct ChainBuilder {
  const ConfigSpace& space;
  bool track_coverage;
  std::size_t cap;  // 0: unlimited (coverage decides termination)
  std::vector<std::vector<Configuration>> chains;

  // Uncovered canonical indices, only when track_coverage. Scanned from the
  // back: later indices are lexicographically larger and more likely to sit
  // above a grown path prefix.
  std::vector<std::uint64_t> uncovered;
  std::vector<char> covered;

  bool has_uncovered_above(const Configuration& c) {
    for (std::size_t k = uncovered.size(); k-- > 0;) {
      if (config_leq(c, space.at_index(uncovered[k]))) return true;
    }
    return false;
  }

  // True while the grown path still holds an element no emitted chain has
  // covered; such a path must reach top so its chain can be emitted, even
  // through fully covered territory.
  bool path_has_fresh(const std::vector<Configuration>& path) const {
    for (const Configuration& c : path) {
      if (!covered[space.index_of(c)]) return true;
    }
    return false;
  }

  // Marks the path covered; true when anything new was covered.
  bool cover(const std::vector<Configuration>& path) {
    bool fresh = false;
    for (const Configuration& c : path) {
      std::uint64_t idx = space.index_of(c);
      if (!covered[idx]) {
        covered[idx] = 1;
        fresh = true;
      }
    }
    if (fresh) {
      uncovered.erase(std::remove_if(uncovered.begin(), uncovered.end(),
                                     [&](std::uint64_t i) { return covered[i]; }),
                      uncovered.end());
    }
    return fresh;
  }

  bool done() const {
    if (cap != 0 && chains.size() >= cap) return true;
    return track_coverage && uncovered.empty();
  }

  void dfs(std::vector<Configuration>& path) {
    if (done()) return;
    // Copy: growing the path reallocates and would invalidate a reference.
    const Configuration tail = path.back();
    if (space.is_top(tail)) {
      if (!track_coverage || cover(path)) chains.push_back(path);
      return;
    }
    for (std::size_t i = 0; i < tail.models.size() && !done(); ++i) {
      if (tail.models[i] + 1 >= space.num_models()) continue;
      Configuration next = tail;
      ++next.models[i];
      if (track_coverage && !path_has_fresh(path) && !has_uncovered_above(next))
        continue;
      path.push_back(std::move(next));
      dfs(path);
      path.pop_back();
    }
  }
};

}  // namespace

bool ViableSet::contains(const Configuration& c) const {
  return std::find(configs.begin(), configs.end(), c) != configs.end();
}

ChainPlan build_chains(const ConfigSpace& space, int chain_cap,
                       std::uint64_t exhaustive_limit) {
  ChainBuilder builder{space,
                       space.indexable() && space.size() <= exhaustive_limit,
                       0,
                       {},
                       {},
                       {}};
  if (builder.track_coverage) {
    builder.covered.assign(space.size(), 0);
    builder.uncovered.resize(space.size());
    for (std::uint64_t i = 0; i < space.size(); ++i) builder.uncovered[i] = i;
  } else {
    builder.cap = static_cast<std::size_t>(chain_cap > 0 ? chain_cap
                                                         : kDefaultChainCap);
  }

  std::vector<Configuration> path{space.base()};
  builder.dfs(path);

  ChainPlan plan;
  plan.chains = std::move(builder.chains);
  plan.exhaustive = builder.track_coverage && builder.uncovered.empty();
  return plan;
}

std::optional<std::size_t> find_chain_boundary(
    const std::vector<Configuration>& chain,
    const std::function<std::optional<bool>(const Configuration&)>& verdict,
    std::size_t lo, std::size_t hi) {
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    std::optional<bool> v = verdict(chain[mid]);
    if (!v.has_value()) return std::nullopt;
    if (*v) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

std::size_t find_chain_boundary(const std::vector<Configuration>& chain,
                                const RouterBackend& router, RequestId request) {
  auto verdict = [&](const Configuration& c) -> std::optional<bool> {
    return router.evaluate(request, c);
  };
  return *find_chain_boundary(chain, verdict, 0, chain.size());
}

ConfigPredictor::ConfigPredictor(const ConfigSpace& space,
                                 const RouterBackend& router,
                                 PredictorParams params)
    : space_(&space),
      router_(&router),
      plan_(build_chains(space, params.chain_cap, params.exhaustive_limit)) {}

PredictionResult ConfigPredictor::predict(RequestId request,
                                          double budget) const {
  PredictionResult result;
  const double latency = router_->eval_latency();
  const Configuration top = space_->top();

  // Verdict cache keyed by configuration; one charge per unique pair.
  std::map<Configuration, bool> cache;
  int* charging = &result.search_evals;

  // nullopt: budget refused the evaluation.
  auto eval = [&](const Configuration& c) -> std::optional<bool> {
    if (c == top) return true;
    auto it = cache.find(c);
    if (it != cache.end()) return it->second;
    if (result.router_time + latency > budget) {
      result.truncated = true;
      return std::nullopt;
    }
    bool v = router_->evaluate(request, c);
    result.router_time += latency;
    ++*charging;
    cache.emplace(c, v);
    return v;
  };

  auto cached = [&](const Configuration& c) -> std::optional<bool> {
    if (c == top) return true;
    auto it = cache.find(c);
    if (it == cache.end()) return std::nullopt;
    return it->second;
  };

  // Phase one: boundary per chain, with bounds narrowed by cached verdicts
  // from earlier chains. Chains whose search the budget interrupts contribute
  // no candidates; verification keeps the rest honest.
  std::vector<std::size_t> boundaries(plan_.chains.size());
  std::vector<char> searched(plan_.chains.size(), 0);
  for (std::size_t ci = 0; ci < plan_.chains.size(); ++ci) {
    if (result.truncated) break;
    const auto& chain = plan_.chains[ci];
    std::size_t lo = 0, hi = chain.size();
    for (std::size_t i = 0; i < chain.size(); ++i) {
      std::optional<bool> v = cached(chain[i]);
      if (!v.has_value()) continue;
      if (*v) {
        hi = std::min(hi, i);
      } else {
        lo = std::max(lo, i + 1);
      }
    }
    if (lo > hi) {
      // Cached verdicts are non-monotone along this chain; any cut point
      // consistent with part of them works, verification decides membership.
      boundaries[ci] = hi;
      searched[ci] = 1;
      continue;
    }
    std::optional<std::size_t> b = find_chain_boundary(chain, eval, lo, hi);
    if (!b.has_value()) break;
    boundaries[ci] = *b;
    searched[ci] = 1;
  }

  // Phase two: verify each distinct candidate, cheapest static cost first.
  charging = &result.verify_evals;
  std::vector<Configuration> candidates;
  for (std::size_t ci = 0; ci < plan_.chains.size(); ++ci) {
    if (!searched[ci]) continue;
    const auto& chain = plan_.chains[ci];
    for (std::size_t i = boundaries[ci]; i < chain.size(); ++i) {
      if (chain[i] == top) continue;
      candidates.push_back(chain[i]);
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](const Configuration& a, const Configuration& b) {
              double ca = space_->static_cost(a), cb = space_->static_cost(b);
              if (ca != cb) return ca < cb;
              return a.models < b.models;
            });
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  std::vector<Configuration> kept;
  for (const Configuration& c : candidates) {
    std::optional<bool> v = eval(c);
    if (!v.has_value()) continue;  // out of budget; later cache hits still count
    if (*v) kept.push_back(c);
  }
  kept.push_back(top);
  std::sort(kept.begin(), kept.end(),
            [](const Configuration& a, const Configuration& b) {
              return a.models < b.models;
            });
  result.viable.configs = std::move(kept);
  return result;
}

}  // namespace aragog
