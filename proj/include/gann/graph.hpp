// Copyright 2026 The GANN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "gann/core.hpp"
#include "gann/diversify.hpp"
#include "gann/vector_set.hpp"

namespace gann {

/// Capped-degree directed adjacency over VectorSet rows. The container
/// enforces the degree cap, no self-loops, in-range ids and no duplicates;
/// overflow policy (re-pruning) is owned by the builders.
struct FlatGraph {
  std::size_t n = 0;
  std::size_t d = 0;  // dimensionality of the set the graph was built over
  std::uint32_t cap_R = 0;
  std::vector<std::vector<NodeId>> adjacency;

  FlatGraph() = default;
  FlatGraph(std::size_t n_, std::uint32_t cap_R_)
      : n(n_), cap_R(cap_R_), adjacency(n_) {}

  std::span<const NodeId> neighbors(NodeId u) const { return adjacency[u]; }
  std::size_t degree(NodeId u) const { return adjacency[u].size(); }
  std::size_t edge_count() const;

  /// Appends v to u's list. Throws on self-loop or out-of-range ids (caller
  /// bug); returns false when the list is full or v already present.
  bool add_neighbor(NodeId u, NodeId v);

  /// Replaces u's list wholesale; validates cap, range, self-loops, dups.
  void set_neighbors(NodeId u, std::vector<NodeId> list);

  /// Walks every list and throws std::logic_error on any invariant breach.
  void validate(const char* context = "FlatGraph") const;

  bool operator==(const FlatGraph&) const = default;
};

FlatGraph new_graph(std::size_t n, std::uint32_t cap_R);

/// Sampled hierarchy for stacked-NSW seed selection. layers[0] is the base
/// graph over all n nodes; higher layers hold nested subsets. Each layer's
/// FlatGraph spans the full id space so node ids are global everywhere.
struct LayeredGraph {
  std::vector<FlatGraph> layers;          // base first
  std::vector<std::uint32_t> membership;  // per node: highest layer it joins
  NodeId entry = kInvalidNode;            // fixed node in the top layer

  std::size_t n() const { return layers.empty() ? 0 : layers[0].n; }
  std::size_t top_layer() const { return layers.size() - 1; }

  /// Nodes whose membership is >= layer, ascending.
  std::vector<NodeId> layer_members(std::size_t layer) const;

  void validate() const;

  bool operator==(const LayeredGraph&) const = default;
};

enum class DcMode : std::uint8_t { kMerged = 0, kSeparate = 1 };

/// One divide-and-conquer partition: a graph over local ids 0..m-1, the
/// member list mapping local -> global, and the centroid of the members.
struct Partition {
  FlatGraph graph;              // local ids
  std::vector<NodeId> members;  // global ids, ascending
  std::vector<float> centroid;
  NodeId seed_local = kInvalidNode;  // member nearest its own centroid

  bool operator==(const Partition& o) const {
    return graph == o.graph && members == o.members && centroid == o.centroid;
  }
};

struct PartitionedIndex {
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint32_t cap_R = 0;
  DcMode mode = DcMode::kSeparate;
  std::vector<Partition> partitions;

  void validate() const;

  bool operator==(const PartitionedIndex&) const = default;
};

using AnyIndex = std::variant<FlatGraph, LayeredGraph, PartitionedIndex>;

/// Makes every node reachable from `entry` via directed edges. DFS first;
/// each unreachable node u is then linked from its nearest reachable node v
/// (brute force over the reachable set). If v is at cap, its list is
/// re-pruned with `nd` after inserting u; the new edge is force-kept so the
/// repair always lands. u links back when it has spare degree.
FlatGraph ensure_connected(FlatGraph g, NodeId entry, const VectorSet& set,
                           const NdSpec& nd, DistCounter& counter);

/// Recomputes each partition's seed_local (member nearest the centroid).
void refresh_partition_seeds(PartitionedIndex& index, const VectorSet& set,
                             DistCounter& counter);

}  // namespace gann
