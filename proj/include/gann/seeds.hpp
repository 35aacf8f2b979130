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
#include <string>
#include <variant>
#include <vector>

#include "gann/core.hpp"
#include "gann/graph.hpp"
#include "gann/vector_set.hpp"

namespace gann {

enum class SsKind : std::uint8_t {
  kNone = 0,
  kSN = 1,  // stacked-NSW hierarchy (lives in the LayeredGraph)
  kKD = 2,  // K-D tree forest over a sample
  kKM = 3,  // balanced k-means tree over a sample
  kMD = 4,  // approximate medoid, fixed
  kSF = 5,  // single fixed random entry
  kKS = 6,  // fresh random sample per query
};

std::string ss_name(SsKind kind);
SsKind ss_from_name(const std::string& name);

/// Axis-aligned splitting tree: internal nodes split the highest-variance
/// dimension at the median; leaves hold global NodeIds from the sample.
struct KdTree {
  struct Node {
    bool is_leaf = false;
    std::uint32_t split_dim = 0;
    float split_val = 0.0f;
    std::uint32_t left = 0;   // node indexes within `nodes`
    std::uint32_t right = 0;
    std::vector<NodeId> members;  // leaf only

    bool operator==(const Node&) const = default;
  };
  std::vector<Node> nodes;  // root at 0

  bool operator==(const KdTree&) const = default;
};

struct KdForest {
  std::vector<KdTree> trees;
  bool operator==(const KdForest&) const = default;
};

/// Balanced k-means tree: internal nodes hold child centroids; leaves hold
/// global NodeIds from the sample.
struct KmTree {
  struct Node {
    bool is_leaf = false;
    std::vector<std::vector<float>> centroids;  // internal: one per child
    std::vector<std::uint32_t> children;
    std::vector<NodeId> members;  // leaf only

    bool operator==(const Node&) const = default;
  };
  std::vector<Node> nodes;  // root at 0

  bool operator==(const KmTree&) const = default;
};

struct KsSeed {
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  bool operator==(const KsSeed&) const = default;
};

/// One of the six strategies behind a single interface: given a query,
/// produce seed candidates for the beam search.
struct SeedIndex {
  SsKind kind = SsKind::kNone;
  // SN carries no payload of its own (the LayeredGraph is the structure);
  // MD/SF payloads are single fixed nodes.
  std::variant<std::monostate, KdForest, KmTree, NodeId, KsSeed> payload;

  bool operator==(const SeedIndex&) const = default;
};

/// Layer for one sampled draw xi in (0,1): floor(-ln(xi) / ln(M/2)).
/// M must be >= 3 so the formula does not degenerate.
std::uint32_t assign_layer(double xi, std::uint32_t M);

/// Greedy descent from the fixed top-layer entry down to layer 1; returns the
/// base-layer seed (id + squared distance to q). A base-only hierarchy
/// returns the fixed entry.
Candidate sn_descend(const LayeredGraph& layers, std::span<const float> q,
                     const VectorSet& set, DistCounter& counter);

struct SeedParams {
  std::uint32_t kd_num_trees = 4;
  double sample_fraction = 0.05;        // capped at 100K sampled points
  std::uint32_t kd_leaf_cap = 32;
  std::uint32_t km_branching = 8;
  std::uint32_t km_leaf_cap = 64;
};

SeedIndex kd_build(const VectorSet& set, std::uint32_t num_trees,
                   double sample_fraction, std::uint64_t seed);

/// Depth-first descent in each tree, pooled leaf members deduplicated, the s
/// closest returned ascending (squared distances). Returns fewer than s when
/// the pool is smaller.
std::vector<Candidate> kd_seeds(const SeedIndex& idx, const VectorSet& set,
                                std::span<const float> q, std::size_t s,
                                DistCounter& counter);

SeedIndex km_build(const VectorSet& set, std::uint32_t branching,
                   std::uint32_t leaf_cap, double sample_fraction,
                   std::uint64_t seed, DistCounter& counter);

std::vector<Candidate> km_seeds(const SeedIndex& idx, const VectorSet& set,
                                std::span<const float> q, std::size_t s,
                                DistCounter& counter);

/// Leaf member pool a KD descent visits, deduplicated, distances not yet
/// evaluated. Lets callers with their own evaluation cache avoid paying for
/// any pooled node twice.
std::vector<NodeId> kd_pool(const SeedIndex& idx, std::span<const float> q);

/// Members of the KM leaf reached by nearest-centroid descent; centroid
/// evaluations are charged to `counter`.
std::vector<NodeId> km_leaf_members(const SeedIndex& idx, std::span<const float> q,
                                    DistCounter& counter);

/// Nearest point to the dataset centroid (approximate medoid), fixed.
SeedIndex medoid_seed(const VectorSet& set, DistCounter& counter);

/// One uniformly drawn node, fixed across all queries.
SeedIndex sf_seed(const VectorSet& set, std::uint64_t seed);

/// s distinct uniform NodeIds, a fresh replay-stable draw per query.
/// Distances are computed by the caller.
std::vector<NodeId> ks_seeds(std::size_t n, std::size_t s,
                             std::size_t query_index, std::uint64_t seed);

/// Convenience: builds the query-time structure for any non-SN strategy.
SeedIndex build_seed_index(const VectorSet& set, SsKind kind,
                           const SeedParams& params, std::uint64_t seed,
                           DistCounter& counter);

}  // namespace gann
