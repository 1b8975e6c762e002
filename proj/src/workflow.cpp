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

#include "aragog/workflow.h"

#include <algorithm>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace aragog {

namespace {

std::string join_cycle(const std::vector<std::string>& names) {
  std::ostringstream os;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) os << " -> ";
    os << names[i];
  }
  return os.str();
}

}  // namespace

ModelCatalog::ModelCatalog(std::vector<ModelSpec> models)
    : models_(std::move(models)) {
  if (models_.size() < 2) {
    throw ValidationError("model catalog needs at least 2 tiers");
  }
  for (std::size_t i = 0; i < models_.size(); ++i) {
    const ModelSpec& m = models_[i];
    if (m.name.empty()) throw ValidationError("model tier with empty name");
    if (m.cost <= 0.0 || m.slot_throughput <= 0.0) {
      throw ValidationError("model '" + m.name +
                            "' needs positive cost and slot_throughput");
    }
    if (i > 0) {
      if (m.cost <= models_[i - 1].cost) {
        throw ValidationError("model costs must strictly increase with tier");
      }
      if (m.slot_throughput >= models_[i - 1].slot_throughput) {
        throw ValidationError(
            "model slot_throughput must strictly decrease with tier");
      }
    }
  }
}

const ModelSpec& ModelCatalog::at(int index) const {
  if (index < 0 || index >= size()) {
    throw ValidationError("model index out of range");
  }
  return models_[static_cast<std::size_t>(index)];
}

WorkflowGraph WorkflowGraph::build(
    std::vector<std::string> agents,
    std::vector<std::pair<std::string, std::string>> edges) {
  if (agents.empty()) throw ValidationError("workflow needs at least 1 agent");

  std::unordered_map<std::string, int> decl;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].empty()) throw ValidationError("agent with empty name");
    auto [it, inserted] = decl.emplace(agents[i], static_cast<int>(i));
    (void)it;
    if (!inserted) throw ValidationError("duplicate agent name: " + agents[i]);
  }

  const int n = static_cast<int>(agents.size());
  std::vector<std::vector<int>> out(n), in(n);
  for (const auto& [from, to] : edges) {
    auto fi = decl.find(from);
    auto ti = decl.find(to);
    if (fi == decl.end()) throw ValidationError("edge from unknown agent: " + from);
    if (ti == decl.end()) throw ValidationError("edge to unknown agent: " + to);
    if (fi->second == ti->second) {
      throw ValidationError("self loop on agent: " + from);
    }
    out[fi->second].push_back(ti->second);
    in[ti->second].push_back(fi->second);
  }
  for (int i = 0; i < n; ++i) {
    std::sort(out[i].begin(), out[i].end());
    out[i].erase(std::unique(out[i].begin(), out[i].end()), out[i].end());
    std::sort(in[i].begin(), in[i].end());
    in[i].erase(std::unique(in[i].begin(), in[i].end()), in[i].end());
  }

  // Kahn with a min-heap on declaration index: canonical order is the unique
  // topological order that always releases the earliest-declared ready agent.
  std::vector<int> indeg(n);
  for (int i = 0; i < n; ++i) indeg[i] = static_cast<int>(in[i].size());
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int i = 0; i < n; ++i) {
    if (indeg[i] == 0) ready.push(i);
  }
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int u = ready.top();
    ready.pop();
    order.push_back(u);
    for (int v : out[u]) {
      if (--indeg[v] == 0) ready.push(v);
    }
  }
  if (static_cast<int>(order.size()) != n) {
    // Walk back through still-cyclic nodes to report one concrete cycle.
    std::vector<int> on_cycle;
    for (int i = 0; i < n; ++i) {
      if (indeg[i] > 0) on_cycle.push_back(i);
    }
    std::vector<std::string> path;
    int u = on_cycle.front();
    std::vector<int> seen(n, -1);
    std::vector<int> walk;
    while (seen[u] < 0) {
      seen[u] = static_cast<int>(walk.size());
      walk.push_back(u);
      for (int v : out[u]) {
        if (indeg[v] > 0) {
          u = v;
          break;
        }
      }
    }
    for (std::size_t i = static_cast<std::size_t>(seen[u]); i < walk.size(); ++i) {
      path.push_back(agents[walk[i]]);
    }
    path.push_back(agents[u]);
    throw ValidationError("workflow has a cycle: " + join_cycle(path));
  }

  WorkflowGraph g;
  g.names_ = std::move(agents);
  g.order_ = std::move(order);

  std::vector<int> pos_of_decl(n);
  for (int p = 0; p < n; ++p) pos_of_decl[g.order_[p]] = p;

  g.preds_.resize(n);
  g.succs_.resize(n);
  for (int p = 0; p < n; ++p) {
    int d = g.order_[p];
    for (int v : out[d]) g.succs_[p].push_back(pos_of_decl[v]);
    for (int v : in[d]) g.preds_[p].push_back(pos_of_decl[v]);
    std::sort(g.succs_[p].begin(), g.succs_[p].end());
    std::sort(g.preds_[p].begin(), g.preds_[p].end());
  }

  // Longest path to a sink, in edges. Successors sit later in canonical
  // order, so one reverse sweep suffices.
  g.depth_.assign(n, 0);
  for (int p = n - 1; p >= 0; --p) {
    for (int s : g.succs_[p]) {
      g.depth_[p] = std::max(g.depth_[p], g.depth_[s] + 1);
    }
  }
  return g;
}

std::vector<std::string> WorkflowGraph::topo_order() const {
  std::vector<std::string> names;
  names.reserve(order_.size());
  for (int d : order_) names.push_back(names_[d]);
  return names;
}

int WorkflowGraph::position_of(const std::string& name) const {
  for (int p = 0; p < num_agents(); ++p) {
    if (agent_name(p) == name) return p;
  }
  throw ValidationError("unknown agent: " + name);
}

ConfigOrder compare_configs(const Configuration& x, const Configuration& y) {
  if (x.models.size() != y.models.size()) {
    throw ValidationError("configurations compare only within one workflow");
  }
  bool le = true, ge = true;
  for (std::size_t i = 0; i < x.models.size(); ++i) {
    if (x.models[i] > y.models[i]) le = false;
    if (x.models[i] < y.models[i]) ge = false;
  }
  if (le && ge) return ConfigOrder::kEqual;
  if (le) return ConfigOrder::kBelow;
  if (ge) return ConfigOrder::kAbove;
  return ConfigOrder::kIncomparable;
}

bool config_leq(const Configuration& x, const Configuration& y) {
  ConfigOrder o = compare_configs(x, y);
  return o == ConfigOrder::kEqual || o == ConfigOrder::kBelow;
}

ConfigSpace::ConfigSpace(const WorkflowGraph& graph, const ModelCatalog& catalog)
    : graph_(&graph),
      catalog_(&catalog),
      num_agents_(graph.num_agents()),
      num_models_(catalog.size()) {
  indexable_ = true;
  size_ = 1;
  for (int i = 0; i < num_agents_; ++i) {
    if (size_ > UINT64_MAX / static_cast<std::uint64_t>(num_models_)) {
      indexable_ = false;
      size_ = 0;
      break;
    }
    size_ *= static_cast<std::uint64_t>(num_models_);
  }
}

Configuration ConfigSpace::base() const {
  return Configuration{std::vector<int>(static_cast<std::size_t>(num_agents_), 0)};
}

Configuration ConfigSpace::top() const {
  return Configuration{
      std::vector<int>(static_cast<std::size_t>(num_agents_), num_models_ - 1)};
}

bool ConfigSpace::is_top(const Configuration& c) const {
  validate(c);
  for (int m : c.models) {
    if (m != num_models_ - 1) return false;
  }
  return true;
}

std::uint64_t ConfigSpace::size() const {
  if (!indexable_) {
    throw ValidationError("configuration space too large to count");
  }
  return size_;
}

std::uint64_t ConfigSpace::index_of(const Configuration& c) const {
  validate(c);
  if (!indexable_) {
    throw ValidationError("configuration space too large to index");
  }
  std::uint64_t idx = 0;
  for (int m : c.models) {
    idx = idx * static_cast<std::uint64_t>(num_models_) +
          static_cast<std::uint64_t>(m);
  }
  return idx;
}

Configuration ConfigSpace::at_index(std::uint64_t index) const {
  if (!indexable_ || index >= size_) {
    throw ValidationError("configuration index out of range");
  }
  Configuration c;
  c.models.assign(static_cast<std::size_t>(num_agents_), 0);
  for (int i = num_agents_ - 1; i >= 0; --i) {
    c.models[static_cast<std::size_t>(i)] =
        static_cast<int>(index % static_cast<std::uint64_t>(num_models_));
    index /= static_cast<std::uint64_t>(num_models_);
  }
  return c;
}

std::vector<Configuration> ConfigSpace::upgrade_successors(
    const Configuration& c) const {
  validate(c);
  std::vector<Configuration> out;
  for (std::size_t i = 0; i < c.models.size(); ++i) {
    if (c.models[i] + 1 < num_models_) {
      Configuration next = c;
      ++next.models[i];
      out.push_back(std::move(next));
    }
  }
  return out;
}

double ConfigSpace::static_cost(const Configuration& c) const {
  validate(c);
  double cost = 0.0;
  for (int m : c.models) cost += catalog_->at(m).cost;
  return cost;
}

void ConfigSpace::validate(const Configuration& c) const {
  if (static_cast<int>(c.models.size()) != num_agents_) {
    throw ValidationError("configuration length does not match agent count");
  }
  for (int m : c.models) {
    if (m < 0 || m >= num_models_) {
      throw ValidationError("configuration entry outside model range");
    }
  }
}

}  // namespace aragog
