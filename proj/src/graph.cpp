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

#include "gann/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace gann {

std::size_t FlatGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& list : adjacency) total += list.size();
  return total;
}

bool FlatGraph::add_neighbor(NodeId u, NodeId v) {
  if (u >= n || v >= n) {
    throw std::invalid_argument("FlatGraph::add_neighbor: id out of range");
  }
  if (u == v) {
    throw std::invalid_argument("FlatGraph::add_neighbor: self-loop");
  }
  auto& list = adjacency[u];
  if (list.size() >= cap_R) return false;
  if (std::find(list.begin(), list.end(), v) != list.end()) return false;
  list.push_back(v);
  return true;
}

void FlatGraph::set_neighbors(NodeId u, std::vector<NodeId> list) {
  if (u >= n) throw std::invalid_argument("FlatGraph::set_neighbors: id out of range");
  if (list.size() > cap_R) {
    throw std::invalid_argument("FlatGraph::set_neighbors: degree cap exceeded");
  }
  std::unordered_set<NodeId> seen;
  for (NodeId v : list) {
    if (v >= n) throw std::invalid_argument("FlatGraph::set_neighbors: id out of range");
    if (v == u) throw std::invalid_argument("FlatGraph::set_neighbors: self-loop");
    if (!seen.insert(v).second) {
      throw std::invalid_argument("FlatGraph::set_neighbors: duplicate neighbor");
    }
  }
  adjacency[u] = std::move(list);
}

void FlatGraph::validate(const char* context) const {
  if (adjacency.size() != n) {
    throw std::logic_error(std::string(context) + ": adjacency size mismatch");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t u = 0; u < n; ++u) {
    const auto& list = adjacency[u];
    if (list.size() > cap_R) {
      throw std::logic_error(std::string(context) + ": degree cap exceeded at node " +
                             std::to_string(u));
    }
    for (NodeId v : list) {
      if (v >= n) {
        throw std::logic_error(std::string(context) + ": neighbor id out of range at node " +
                               std::to_string(u));
      }
      if (v == static_cast<NodeId>(u)) {
        throw std::logic_error(std::string(context) + ": self-loop at node " +
                               std::to_string(u));
      }
      if (seen[v]) {
        throw std::logic_error(std::string(context) + ": duplicate neighbor at node " +
                               std::to_string(u));
      }
      seen[v] = true;
    }
    for (NodeId v : list) seen[v] = false;
  }
}

FlatGraph new_graph(std::size_t n, std::uint32_t cap_R) {
  if (n == 0 || cap_R == 0) {
    throw std::invalid_argument("new_graph: need n >= 1 and cap_R >= 1");
  }
  return FlatGraph(n, cap_R);
}

std::vector<NodeId> LayeredGraph::layer_members(std::size_t layer) const {
  std::vector<NodeId> members;
  for (std::size_t u = 0; u < membership.size(); ++u) {
    if (membership[u] >= layer) members.push_back(static_cast<NodeId>(u));
  }
  return members;
}

void LayeredGraph::validate() const {
  if (layers.empty()) throw std::logic_error("LayeredGraph: no layers");
  const std::size_t num_nodes = layers[0].n;
  if (membership.size() != num_nodes) {
    throw std::logic_error("LayeredGraph: membership size mismatch");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    layers[l].validate("LayeredGraph layer");
    if (layers[l].n != num_nodes) {
      throw std::logic_error("LayeredGraph: layer node-space mismatch");
    }
    // A node may only have edges in layers it belongs to.
    for (std::size_t u = 0; u < num_nodes; ++u) {
      if (!layers[l].adjacency[u].empty() && membership[u] < l) {
        throw std::logic_error("LayeredGraph: edges above a node's top layer");
      }
    }
  }
  if (entry >= num_nodes || membership[entry] + 1 < layers.size()) {
    throw std::logic_error("LayeredGraph: entry not in the top layer");
  }
}

void PartitionedIndex::validate() const {
  std::vector<bool> covered(n, false);
  for (const Partition& p : partitions) {
    p.graph.validate("Partition graph");
    if (p.graph.n != p.members.size()) {
      throw std::logic_error("PartitionedIndex: graph/member size mismatch");
    }
    if (p.centroid.size() != d) {
      throw std::logic_error("PartitionedIndex: centroid dimension mismatch");
    }
    for (NodeId g : p.members) {
      if (g >= n) throw std::logic_error("PartitionedIndex: member id out of range");
      if (covered[g]) throw std::logic_error("PartitionedIndex: overlapping members");
      covered[g] = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!covered[i]) throw std::logic_error("PartitionedIndex: node not covered");
  }
}

void refresh_partition_seeds(PartitionedIndex& index, const VectorSet& set,
                             DistCounter& counter) {
  for (Partition& p : index.partitions) {
    NodeId best = kInvalidNode;
    float best_dist = 0.0f;
    for (std::size_t local = 0; local < p.members.size(); ++local) {
      const float dist = squared_euclidean(
          std::span<const float>(p.centroid), set.row(p.members[local]), counter);
      if (best == kInvalidNode || dist < best_dist) {
        best = static_cast<NodeId>(local);
        best_dist = dist;
      }
    }
    p.seed_local = best;
  }
}

}  // namespace gann
