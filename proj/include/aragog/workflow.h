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

// Workflow DAG, model catalog, and the configuration lattice over them.
//
// Agents are referred to by canonical position: the topological order with
// declaration-index tie breaks. Position 0 is the most significant digit of
// a configuration's canonical index, so lexicographic order on the model
// vector equals numeric order on the index.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aragog/errors.h"

namespace aragog {

using RequestId = std::uint64_t;

struct ModelSpec {
  std::string name;
  double cost = 0.0;             // per-invocation accounting cost
  double slot_throughput = 0.0;  // utilization weight of one busy slot
};

// Ordered model tiers. Index 0 is the cheapest; cost strictly increases and
// slot_throughput strictly decreases with the index.
class ModelCatalog {
 public:
  explicit ModelCatalog(std::vector<ModelSpec> models);

  int size() const { return static_cast<int>(models_.size()); }
  const ModelSpec& at(int index) const;
  const std::vector<ModelSpec>& models() const { return models_; }

 private:
  std::vector<ModelSpec> models_;
};

class WorkflowGraph {
 public:
  // Edges are (from, to) agent names. Throws ValidationError on duplicate
  // names, unknown endpoints, self loops, or cycles (the message names one
  // cycle).
  static WorkflowGraph build(
      std::vector<std::string> agents,
      std::vector<std::pair<std::string, std::string>> edges);

  int num_agents() const { return static_cast<int>(order_.size()); }

  // Agent names in canonical order.
  std::vector<std::string> topo_order() const;

  const std::string& agent_name(int pos) const { return names_[order_[pos]]; }
  int position_of(const std::string& name) const;

  // Longest path (in edges) from this agent to any sink; sinks have depth 0.
  int depth(int pos) const { return depth_[pos]; }

  // Original declaration index; equal-depth scheduling ties resolve on it.
  int declaration_index(int pos) const { return order_[pos]; }

  // Neighbors by canonical position.
  const std::vector<int>& predecessors(int pos) const { return preds_[pos]; }
  const std::vector<int>& successors(int pos) const { return succs_[pos]; }

 private:
  WorkflowGraph() = default;

  std::vector<std::string> names_;  // by declaration index
  std::vector<int> order_;          // canonical pos -> declaration index
  std::vector<int> depth_;          // by canonical pos
  std::vector<std::vector<int>> preds_;
  std::vector<std::vector<int>> succs_;
};

// Model choice per agent, in canonical agent order.
struct Configuration {
  std::vector<int> models;

  bool operator==(const Configuration& other) const = default;
  // Lexicographic order on the model vector; unrelated to the upgrade order.
  bool operator<(const Configuration& other) const {
    return models < other.models;
  }
};

enum class ConfigOrder { kEqual, kBelow, kAbove, kIncomparable };

// Pointwise comparison under the upgrade order. Throws ValidationError when
// the vectors have different lengths.
ConfigOrder compare_configs(const Configuration& x, const Configuration& y);

// True iff x[i] <= y[i] for all i.
bool config_leq(const Configuration& x, const Configuration& y);

// The full lattice {0..M-1}^N for a graph with N agents and M model tiers.
// Cheap to copy around by reference; never materializes members eagerly.
class ConfigSpace {
 public:
  ConfigSpace(const WorkflowGraph& graph, const ModelCatalog& catalog);

  int num_agents() const { return num_agents_; }
  int num_models() const { return num_models_; }
  const WorkflowGraph& graph() const { return *graph_; }
  const ModelCatalog& catalog() const { return *catalog_; }

  Configuration base() const;
  Configuration top() const;  // the most expensive configuration
  bool is_top(const Configuration& c) const;

  // True when M^N fits an unsigned 64-bit count and index_of/at_index are
  // usable. All shipped scenarios are far below the limit.
  bool indexable() const { return indexable_; }
  std::uint64_t size() const;  // throws ValidationError when !indexable()

  std::uint64_t index_of(const Configuration& c) const;
  Configuration at_index(std::uint64_t index) const;

  // Configurations reachable by a +1 upgrade on exactly one agent, in agent
  // order. Empty exactly at top().
  std::vector<Configuration> upgrade_successors(const Configuration& c) const;

  double static_cost(const Configuration& c) const;

  // Length and per-entry range check; throws ValidationError.
  void validate(const Configuration& c) const;

 private:
  const WorkflowGraph* graph_;
  const ModelCatalog* catalog_;
  int num_agents_;
  int num_models_;
  bool indexable_;
  std::uint64_t size_;  // valid only when indexable_
};

}  // namespace aragog
