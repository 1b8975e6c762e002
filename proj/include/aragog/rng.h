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

// Deterministic random primitives. Every stochastic draw in the project is a
// pure function of (seed, domain salt, entity ids) so that traces are
// byte-identical across runs, platforms, and worker pool sizes. Standard
// library distributions are deliberately not used: their output is not
// specified bit-for-bit and differs across implementations.

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace aragog::rng {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// splitmix64 step. Advances the state and returns a well-mixed word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += kGamma);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Folds a list of words into one key. Used to derive independent streams
// from (seed, salt, request id, ...) tuples.
inline std::uint64_t mix(std::initializer_list<std::uint64_t> words) {
  std::uint64_t state = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t w : words) {
    state ^= w + kGamma + (state << 6) + (state >> 2);
    std::uint64_t s = state;
    state = splitmix64(s);
  }
  return state;
}

// Domain salts keep streams for different purposes disjoint even when the
// remaining id tuple collides.
enum Salt : std::uint64_t {
  kArrivalSalt = 0xA1,
  kTableSalt = 0xA2,
  kRouterSalt = 0xA3,
  kServiceSalt = 0xA4,
  kPolicySampleSalt = 0xA5,
  kSnapshotSalt = 0xA6,
};

// Sequential stream over splitmix64.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double next_unit_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be positive; modulo bias is irrelevant
  // at the n values used here (candidate picks, small index draws).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  bool next_bernoulli(double p) { return next_unit() < p; }

  double next_exponential(double rate) {
    return -std::log(next_unit_pos()) / rate;
  }

  // Standard normal via Box-Muller. One draw consumed per call pair; we keep
  // it stateless across calls and simply burn two uniforms each time.
  double next_normal() {
    double u1 = next_unit_pos();
    double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace aragog::rng
