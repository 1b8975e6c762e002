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

#include "aragog/accuracy.h"

#include <algorithm>
#include <cmath>

#include "aragog/rng.h"

namespace aragog {

namespace {

// Drops seeds dominated by another seed; membership is unchanged.
void minimalize(std::vector<Configuration>& seeds) {
  std::vector<Configuration> kept;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < seeds.size() && !dominated; ++j) {
      if (i == j) continue;
      ConfigOrder o = compare_configs(seeds[j], seeds[i]);
      if (o == ConfigOrder::kBelow) dominated = true;
      // Among equal seeds keep only the first occurrence.
      if (o == ConfigOrder::kEqual && j < i) dominated = true;
    }
    if (!dominated) kept.push_back(seeds[i]);
  }
  seeds = std::move(kept);
}

// Members as a bitmap over canonical indices; only for enumerable spaces.
std::vector<char> materialize(const AccurateSet& set, const ConfigSpace& space) {
  std::uint64_t n = space.size();
  std::vector<char> member(n, 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    member[i] = set.contains(space.at_index(i)) ? 1 : 0;
  }
  return member;
}

std::uint64_t count_edges(const ConfigSpace& space) {
  // Each of the N agents contributes (M-1) steps against M^(N-1) contexts.
  std::uint64_t per_agent =
      static_cast<std::uint64_t>(space.num_models() - 1) *
      (space.size() / static_cast<std::uint64_t>(space.num_models()));
  return per_agent * static_cast<std::uint64_t>(space.num_agents());
}

// Net violation change if c were removed: every accurate strict lower
// neighbor gains a violated edge, every already-inaccurate upper neighbor
// loses one.
long long removal_delta(const ConfigSpace& space, const std::vector<char>& member,
                        const Configuration& c) {
  long long delta = 0;
  Configuration probe = c;
  for (std::size_t i = 0; i < probe.models.size(); ++i) {
    if (probe.models[i] > 0) {
      --probe.models[i];
      if (member[space.index_of(probe)]) ++delta;
      ++probe.models[i];
    }
    if (probe.models[i] + 1 < space.num_models()) {
      ++probe.models[i];
      if (!member[space.index_of(probe)]) --delta;
      --probe.models[i];
    }
  }
  return delta;
}

void inject_violations(const ConfigSpace& space, const AccuracyGenParams& params,
                       rng::Stream& stream, AccurateSet& set) {
  std::uint64_t edges = count_edges(space);
  double expectation = params.violation_rate * static_cast<double>(edges);
  std::uint64_t target = static_cast<std::uint64_t>(std::floor(expectation));
  if (stream.next_bernoulli(expectation - std::floor(expectation))) ++target;
  if (target == 0) return;

  std::vector<char> member = materialize(set, space);
  const std::uint64_t top_idx = space.index_of(space.top());
  std::uint64_t violated = 0;
  while (violated < target) {
    std::uint64_t remaining = target - violated;
    std::vector<std::uint64_t> candidates;
    for (std::uint64_t i = 0; i < member.size(); ++i) {
      if (!member[i] || i == top_idx) continue;
      long long delta = removal_delta(space, member, space.at_index(i));
      if (delta >= 1 && static_cast<std::uint64_t>(delta) <= remaining) {
        candidates.push_back(i);
      }
    }
    if (candidates.empty()) break;
    std::uint64_t pick = candidates[stream.next_below(candidates.size())];
    Configuration c = space.at_index(pick);
    violated += static_cast<std::uint64_t>(removal_delta(space, member, c));
    member[pick] = 0;
    set.removed.push_back(std::move(c));
  }
}

}  // namespace

bool AccurateSet::contains(const Configuration& c) const {
  for (const Configuration& r : removed) {
    if (r == c) return false;
  }
  for (const Configuration& s : seeds) {
    if (config_leq(s, c)) return true;
  }
  return false;
}

void AccuracyGenParams::validate(const ConfigSpace& space) const {
  if (p_easy < 0 || p_medium < 0 || p_hard < 0 ||
      p_easy + p_medium + p_hard <= 0) {
    throw ValidationError("difficulty mix needs nonnegative weights, sum > 0");
  }
  if (easy_base_prob < 0 || easy_base_prob > 1) {
    throw ValidationError("easy_base_prob outside [0, 1]");
  }
  if (violation_rate < 0 || violation_rate >= 1) {
    throw ValidationError("violation_rate outside [0, 1)");
  }
  if (violation_rate > 0 &&
      (!space.indexable() || space.size() > kEnumerableLimit)) {
    throw ValidationError(
        "violation injection needs an enumerable configuration space");
  }
}

AccurateSet generate_accurate_set(const ConfigSpace& space,
                                  const AccuracyGenParams& params,
                                  std::uint64_t seed, RequestId request_id,
                                  std::uint64_t salt) {
  params.validate(space);
  rng::Stream stream(rng::mix({seed, salt, request_id}));
  const double total = params.p_easy + params.p_medium + params.p_hard;
  const double u = stream.next_unit() * total;

  AccurateSet set;
  const int n = space.num_agents();
  const int m = space.num_models();
  if (u < params.p_easy) {
    set.tier = DifficultyTier::kEasy;
    if (stream.next_bernoulli(params.easy_base_prob)) {
      set.seeds.push_back(space.base());
    } else {
      // Low-biased seeds; a seed equal to base would silently widen the
      // base-accurate probability, so bump one coordinate instead.
      std::size_t k = 1 + stream.next_below(2);
      for (std::size_t s = 0; s < k; ++s) {
        Configuration c = space.base();
        for (int i = 0; i < n; ++i) {
          double v = stream.next_unit();
          c.models[static_cast<std::size_t>(i)] =
              std::min(m - 1, static_cast<int>(v * v * m));
        }
        if (c == space.base()) {
          c.models[stream.next_below(static_cast<std::uint64_t>(n))] = 1;
        }
        set.seeds.push_back(std::move(c));
      }
    }
  } else if (u < params.p_easy + params.p_medium) {
    set.tier = DifficultyTier::kMedium;
    std::size_t k = 1 + stream.next_below(2);
    for (std::size_t s = 0; s < k; ++s) {
      Configuration c = space.base();
      for (int i = 0; i < n; ++i) {
        c.models[static_cast<std::size_t>(i)] =
            static_cast<int>(stream.next_below(static_cast<std::uint64_t>(m)));
      }
      set.seeds.push_back(std::move(c));
    }
  } else {
    set.tier = DifficultyTier::kHard;
    set.seeds.push_back(space.top());
  }
  minimalize(set.seeds);

  if (params.violation_rate > 0) {
    inject_violations(space, params, stream, set);
  }
  return set;
}

AccuracyTable::AccuracyTable(const ConfigSpace& space,
                             std::vector<AccurateSet> sets)
    : space_(&space), sets_(std::move(sets)) {}

const AccurateSet& AccuracyTable::at(RequestId id) const {
  if (id >= sets_.size()) {
    throw ValidationError("request id outside accuracy table");
  }
  return sets_[static_cast<std::size_t>(id)];
}

bool AccuracyTable::accurate(RequestId id, const Configuration& c) const {
  return at(id).contains(c);
}

AccuracyTable generate_accuracy_table(const ConfigSpace& space,
                                      const AccuracyGenParams& params,
                                      std::size_t count, std::uint64_t seed) {
  params.validate(space);
  std::vector<AccurateSet> sets;
  sets.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    sets.push_back(generate_accurate_set(space, params, seed, i));
  }
  return AccuracyTable(space, std::move(sets));
}

std::vector<Configuration> enumerate_members(const AccurateSet& set,
                                             const ConfigSpace& space) {
  if (!space.indexable() || space.size() > kEnumerableLimit) {
    throw ValidationError("configuration space too large to enumerate");
  }
  std::vector<Configuration> members;
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    Configuration c = space.at_index(i);
    if (set.contains(c)) members.push_back(std::move(c));
  }
  return members;
}

double violated_edge_fraction(const AccurateSet& set, const ConfigSpace& space) {
  if (!space.indexable() || space.size() > kEnumerableLimit) {
    throw ValidationError("configuration space too large to enumerate");
  }
  std::uint64_t violated = 0;
  std::uint64_t edges = 0;
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    Configuration lower = space.at_index(i);
    bool lower_in = set.contains(lower);
    for (const Configuration& upper : space.upgrade_successors(lower)) {
      ++edges;
      if (lower_in && !set.contains(upper)) ++violated;
    }
  }
  return edges == 0 ? 0.0 : static_cast<double>(violated) / static_cast<double>(edges);
}

}  // namespace aragog
