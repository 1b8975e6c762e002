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

// Ground-truth accuracy labels per request. A label set is an upward-closed
// region of the lattice (generated by seed configurations) minus a small
// carved-out list that models near-monotone noise.

#pragma once

#include <cstdint>
#include <vector>

#include "aragog/rng.h"
#include "aragog/workflow.h"

namespace aragog {

enum class DifficultyTier { kEasy = 0, kMedium = 1, kHard = 2 };

// Membership: some seed <= c, and c is not in removed. The top configuration
// is always a member (any seed is <= top; removals never target top).
struct AccurateSet {
  DifficultyTier tier = DifficultyTier::kEasy;
  std::vector<Configuration> seeds;
  std::vector<Configuration> removed;

  bool contains(const Configuration& c) const;
};

struct AccuracyGenParams {
  double p_easy = 0.6;
  double p_medium = 0.3;
  double p_hard = 0.1;
  // Probability that an easy request is accurate everywhere (seeded at base).
  double easy_base_prob = 0.5;
  // Expected fraction of adjacent lattice edges violating monotonicity.
  double violation_rate = 0.0;

  void validate(const ConfigSpace& space) const;
};

// Pure function of (seed, salt, request_id); the same tuple always yields the
// same set regardless of generation order.
AccurateSet generate_accurate_set(const ConfigSpace& space,
                                  const AccuracyGenParams& params,
                                  std::uint64_t seed, RequestId request_id,
                                  std::uint64_t salt = rng::kTableSalt);

class AccuracyTable {
 public:
  AccuracyTable(const ConfigSpace& space, std::vector<AccurateSet> sets);

  std::size_t size() const { return sets_.size(); }
  const AccurateSet& at(RequestId id) const;
  bool accurate(RequestId id, const Configuration& c) const;
  const ConfigSpace& space() const { return *space_; }

 private:
  const ConfigSpace* space_;
  std::vector<AccurateSet> sets_;
};

// Sets for request ids 0..count-1.
AccuracyTable generate_accuracy_table(const ConfigSpace& space,
                                      const AccuracyGenParams& params,
                                      std::size_t count, std::uint64_t seed);

// All members in canonical index order. Requires an enumerable space.
std::vector<Configuration> enumerate_members(const AccurateSet& set,
                                             const ConfigSpace& space);

// Fraction of adjacent pairs (one +1 step apart) where the lower element is
// accurate and the upper is not. Requires an enumerable space.
double violated_edge_fraction(const AccurateSet& set, const ConfigSpace& space);

// Upper bound used by generation and by tests: spaces past this size keep
// violation_rate at zero and skip whole-lattice scans.
inline constexpr std::uint64_t kEnumerableLimit = 4096;

}  // namespace aragog
