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

#include "aragog/workload.h"

#include <algorithm>

#include "aragog/rng.h"

namespace aragog {

namespace {

rng::Stream arrival_stream(std::uint64_t seed) {
  return rng::Stream(rng::mix({seed, rng::kArrivalSalt}));
}

// Members sorted by (static cost, canonical index); shared by both per-input
// flavors and the per-workflow scan.
std::vector<Configuration> members_by_cost(const std::vector<Configuration>& in,
                                           const ConfigSpace& space) {
  std::vector<Configuration> members = in;
  std::sort(members.begin(), members.end(),
            [&](const Configuration& a, const Configuration& b) {
              double ca = space.static_cost(a), cb = space.static_cost(b);
              if (ca != cb) return ca < cb;
              return a.models < b.models;
            });
  return members;
}

}  // namespace

std::vector<double> poisson_arrivals(double rate, std::size_t count,
                                     std::uint64_t seed) {
  if (rate <= 0) throw ValidationError("arrival rate must be positive");
  rng::Stream stream = arrival_stream(seed);
  std::vector<double> times;
  times.reserve(count);
  double t = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    t += stream.next_exponential(rate);
    times.push_back(t);
  }
  return times;
}

std::vector<double> poisson_arrivals_until(double rate, double horizon,
                                           std::uint64_t seed) {
  if (rate <= 0) throw ValidationError("arrival rate must be positive");
  if (horizon <= 0) throw ValidationError("horizon must be positive");
  rng::Stream stream = arrival_stream(seed);
  std::vector<double> times;
  double t = stream.next_exponential(rate);
  while (t < horizon) {
    times.push_back(t);
    t += stream.next_exponential(rate);
  }
  return times;
}

PolicyKind parse_policy(const std::string& name) {
  if (name == "aragog") return PolicyKind::kAragog;
  if (name == "per-workflow") return PolicyKind::kPerWorkflow;
  if (name == "per-input-static") return PolicyKind::kPerInputStatic;
  if (name == "per-input-runtime-cost") return PolicyKind::kPerInputRuntimeCost;
  throw ValidationError("unknown policy: " + name);
}

std::string policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kAragog: return "aragog";
    case PolicyKind::kPerWorkflow: return "per-workflow";
    case PolicyKind::kPerInputStatic: return "per-input-static";
    case PolicyKind::kPerInputRuntimeCost: return "per-input-runtime-cost";
  }
  throw ValidationError("unknown policy kind");
}

const std::vector<PolicyKind>& all_policies() {
  static const std::vector<PolicyKind> kAll = {
      PolicyKind::kAragog, PolicyKind::kPerWorkflow,
      PolicyKind::kPerInputStatic, PolicyKind::kPerInputRuntimeCost};
  return kAll;
}

Configuration select_per_workflow_config(const std::vector<AccurateSet>& sample,
                                         const ConfigSpace& space,
                                         double tolerance) {
  if (sample.empty()) throw ValidationError("per-workflow sample is empty");
  if (tolerance < 0 || tolerance > 1) {
    throw ValidationError("tolerance outside [0, 1]");
  }
  if (!space.indexable() || space.size() > kEnumerableLimit) {
    throw ValidationError("configuration space too large to enumerate");
  }
  std::vector<Configuration> all;
  all.reserve(space.size());
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    all.push_back(space.at_index(i));
  }
  all = members_by_cost(all, space);

  const double needed = (1.0 - tolerance) * static_cast<double>(sample.size());
  for (const Configuration& c : all) {
    std::size_t hits = 0;
    for (const AccurateSet& s : sample) {
      if (s.contains(c)) ++hits;
    }
    if (static_cast<double>(hits) >= needed) return c;
  }
  // The top configuration is accurate on every sample, so the scan cannot
  // fall through.
  throw ValidationError("per-workflow scan found no configuration");
}

double estimate_completion(const RuntimeCostContext& ctx,
                           const Configuration& config) {
  if (ctx.service == nullptr) throw ValidationError("estimator needs services");
  if (ctx.occupancy.size() != ctx.slots.size() ||
      ctx.queued_ahead.size() != ctx.slots.size()) {
    throw ValidationError("estimator context arrays disagree on tier count");
  }
  double total = 0.0;
  for (int m : config.models) {
    std::size_t mi = static_cast<std::size_t>(m);
    if (mi >= ctx.slots.size() || ctx.slots[mi] <= 0) {
      throw ValidationError("estimator context missing a model tier");
    }
    double load = static_cast<double>(ctx.occupancy[mi] + ctx.queued_ahead[mi]);
    double mean = ctx.service->mean(m);
    total += (load / static_cast<double>(ctx.slots[mi])) * mean + mean;
  }
  return total;
}

Configuration select_per_input_config(const AccurateSet& accurate,
                                      const ConfigSpace& space, PolicyKind kind,
                                      const RuntimeCostContext* ctx) {
  std::vector<Configuration> members = enumerate_members(accurate, space);
  if (members.empty()) {
    // Near-monotone noise never removes top, so an empty set means the
    // caller passed a set from a different space.
    throw ValidationError("accurate set is empty");
  }
  members = members_by_cost(members, space);
  if (kind == PolicyKind::kPerInputStatic) return members.front();
  if (kind != PolicyKind::kPerInputRuntimeCost) {
    throw ValidationError("per-input selection needs a per-input policy kind");
  }
  if (ctx == nullptr) {
    throw ValidationError("runtime-cost selection needs a load context");
  }
  std::size_t best = 0;
  double best_est = estimate_completion(*ctx, members[0]);
  for (std::size_t i = 1; i < members.size(); ++i) {
    double est = estimate_completion(*ctx, members[i]);
    if (est < best_est) {
      best = i;
      best_est = est;
    }
  }
  return members[best];
}

}  // namespace aragog
