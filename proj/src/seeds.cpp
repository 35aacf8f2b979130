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

#include "gann/seeds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gann/rng.hpp"
#include "gann/synthetic.hpp"

namespace gann {

namespace {

constexpr std::size_t kSampleCap = 100'000;

std::size_t sample_count(std::size_t n, double fraction) {
  auto want = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  return std::clamp<std::size_t>(want, 1, std::min(n, kSampleCap));
}

}  // namespace

std::string ss_name(SsKind kind) {
  switch (kind) {
    case SsKind::kNone: return "none";
    case SsKind::kSN: return "sn";
    case SsKind::kKD: return "kd";
    case SsKind::kKM: return "km";
    case SsKind::kMD: return "md";
    case SsKind::kSF: return "sf";
    case SsKind::kKS: return "ks";
  }
  return "?";
}

SsKind ss_from_name(const std::string& name) {
  if (name == "none") return SsKind::kNone;
  if (name == "sn") return SsKind::kSN;
  if (name == "kd") return SsKind::kKD;
  if (name == "km") return SsKind::kKM;
  if (name == "md") return SsKind::kMD;
  if (name == "sf") return SsKind::kSF;
  if (name == "ks") return SsKind::kKS;
  throw std::invalid_argument("unknown seed strategy: " + name);
}

std::uint32_t assign_layer(double xi, std::uint32_t M) {
  if (M <= 2) throw std::invalid_argument("assign_layer: M must be > 2");
  if (!(xi > 0.0 && xi < 1.0)) {
    throw std::invalid_argument("assign_layer: xi must be in (0, 1)");
  }
  const double level = -std::log(xi) / std::log(static_cast<double>(M) / 2.0);
  return static_cast<std::uint32_t>(level);
}

Candidate sn_descend(const LayeredGraph& layers, std::span<const float> q,
                     const VectorSet& set, DistCounter& counter) {
  if (layers.layers.empty()) throw std::invalid_argument("sn_descend: empty hierarchy");
  NodeId cur = layers.entry;
  float cur_dist = squared_euclidean(q, set.row(cur), counter);
  // Greedy single-candidate walk per layer, moving only on strict improvement.
  for (std::size_t layer = layers.top_layer(); layer >= 1; --layer) {
    const FlatGraph& g = layers.layers[layer];
    bool moved = true;
    while (moved) {
      moved = false;
      NodeId best = cur;
      float best_dist = cur_dist;
      for (NodeId v : g.neighbors(cur)) {
        const float dist = squared_euclidean(q, set.row(v), counter);
        if (dist < best_dist || (dist == best_dist && v < best)) {
          best = v;
          best_dist = dist;
        }
      }
      if (best_dist < cur_dist) {
        cur = best;
        cur_dist = best_dist;
        moved = true;
      }
    }
  }
  return {cur, cur_dist};
}

// ---------------------------------------------------------------------------
// KD forest

namespace {

void kd_split(const VectorSet& set, std::vector<NodeId>& ids, std::size_t begin,
              std::size_t end, std::uint32_t leaf_cap, KdTree& tree,
              std::uint32_t node_idx) {
  const std::size_t count = end - begin;
  if (count <= leaf_cap) {
    tree.nodes[node_idx].is_leaf = true;
    tree.nodes[node_idx].members.assign(ids.begin() + begin, ids.begin() + end);
    std::sort(tree.nodes[node_idx].members.begin(), tree.nodes[node_idx].members.end());
    return;
  }
  // Highest-variance dimension over this subset.
  const std::size_t d = set.d;
  std::uint32_t best_dim = 0;
  double best_var = -1.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double x = set.values[static_cast<std::size_t>(ids[i]) * d + j];
      mean += x;
      m2 += x * x;
    }
    mean /= static_cast<double>(count);
    const double var = m2 / static_cast<double>(count) - mean * mean;
    if (var > best_var) {
      best_var = var;
      best_dim = static_cast<std::uint32_t>(j);
    }
  }
  if (best_var <= 0.0) {
    // All points identical in every dimension; an oversized leaf is the only
    // sensible stopping point.
    tree.nodes[node_idx].is_leaf = true;
    tree.nodes[node_idx].members.assign(ids.begin() + begin, ids.begin() + end);
    std::sort(tree.nodes[node_idx].members.begin(), tree.nodes[node_idx].members.end());
    return;
  }
  const std::size_t mid = begin + count / 2;
  std::nth_element(ids.begin() + begin, ids.begin() + mid, ids.begin() + end,
                   [&](NodeId a, NodeId b) {
                     const float xa = set.values[static_cast<std::size_t>(a) * d + best_dim];
                     const float xb = set.values[static_cast<std::size_t>(b) * d + best_dim];
                     if (xa != xb) return xa < xb;
                     return a < b;
                   });
  const float split_val = set.values[static_cast<std::size_t>(ids[mid]) * d + best_dim];

  tree.nodes[node_idx].is_leaf = false;
  tree.nodes[node_idx].split_dim = best_dim;
  tree.nodes[node_idx].split_val = split_val;
  const auto left = static_cast<std::uint32_t>(tree.nodes.size());
  tree.nodes.emplace_back();
  const auto right = static_cast<std::uint32_t>(tree.nodes.size());
  tree.nodes.emplace_back();
  tree.nodes[node_idx].left = left;
  tree.nodes[node_idx].right = right;
  kd_split(set, ids, begin, mid, leaf_cap, tree, left);
  kd_split(set, ids, mid, end, leaf_cap, tree, right);
}

const KdTree::Node& kd_descend(const KdTree& tree, std::span<const float> q) {
  const KdTree::Node* node = &tree.nodes[0];
  while (!node->is_leaf) {
    node = q[node->split_dim] < node->split_val ? &tree.nodes[node->left]
                                                : &tree.nodes[node->right];
  }
  return *node;
}

std::vector<Candidate> rank_pool(const VectorSet& set, std::span<const float> q,
                                 std::vector<NodeId> pool, std::size_t s,
                                 DistCounter& counter) {
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  std::vector<Candidate> ranked;
  ranked.reserve(pool.size());
  for (NodeId id : pool) {
    ranked.push_back({id, squared_euclidean(q, set.row(id), counter)});
  }
  std::sort(ranked.begin(), ranked.end(), candidate_less);
  if (ranked.size() > s) ranked.resize(s);
  return ranked;
}

}  // namespace

SeedIndex kd_build(const VectorSet& set, std::uint32_t num_trees,
                   double sample_fraction, std::uint64_t seed) {
  if (num_trees == 0) throw std::invalid_argument("kd_build: need >= 1 tree");
  const std::size_t m = sample_count(set.n, sample_fraction);
  KdForest forest;
  forest.trees.resize(num_trees);
  for (std::uint32_t t = 0; t < num_trees; ++t) {
    // Independent sample per tree.
    std::vector<NodeId> sample =
        sample_indices(set.n, m, seed, rng::substream(rng::kSeedSample, t));
    std::sort(sample.begin(), sample.end());
    KdTree& tree = forest.trees[t];
    tree.nodes.emplace_back();
    kd_split(set, sample, 0, sample.size(), 32, tree, 0);
  }
  SeedIndex idx;
  idx.kind = SsKind::kKD;
  idx.payload = std::move(forest);
  return idx;
}

std::vector<Candidate> kd_seeds(const SeedIndex& idx, const VectorSet& set,
                                std::span<const float> q, std::size_t s,
                                DistCounter& counter) {
  if (s == 0) throw std::invalid_argument("kd_seeds: s must be >= 1");
  return rank_pool(set, q, kd_pool(idx, q), s, counter);
}

std::vector<NodeId> kd_pool(const SeedIndex& idx, std::span<const float> q) {
  if (idx.kind != SsKind::kKD) throw std::invalid_argument("kd_pool: wrong index kind");
  const auto& forest = std::get<KdForest>(idx.payload);
  std::vector<NodeId> pool;
  for (const KdTree& tree : forest.trees) {
    const auto& leaf = kd_descend(tree, q);
    pool.insert(pool.end(), leaf.members.begin(), leaf.members.end());
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  return pool;
}

// ---------------------------------------------------------------------------
// Balanced k-means tree

namespace {

struct KmBuildCtx {
  const VectorSet& set;
  std::uint32_t branching;
  std::uint32_t leaf_cap;
  std::uint64_t seed;
  KmTree& tree;
  DistCounter& counter;
};

std::vector<float> mean_of(const VectorSet& set, std::span<const NodeId> ids) {
  std::vector<double> acc(set.d, 0.0);
  for (NodeId id : ids) {
    auto row = set.row(id);
    for (std::size_t j = 0; j < set.d; ++j) acc[j] += row[j];
  }
  std::vector<float> mean(set.d);
  for (std::size_t j = 0; j < set.d; ++j) {
    mean[j] = static_cast<float>(acc[j] / static_cast<double>(ids.size()));
  }
  return mean;
}

// Capacity-capped assignment: points visit centroids nearest-first and take
// the closest one that still has room, keeping cluster sizes within
// ceil(m / branching).
void km_split(KmBuildCtx& ctx, std::vector<NodeId> ids, std::uint32_t node_idx,
              std::uint64_t stream) {
  KmTree& tree = ctx.tree;
  if (ids.size() <= ctx.leaf_cap) {
    tree.nodes[node_idx].is_leaf = true;
    std::sort(ids.begin(), ids.end());
    tree.nodes[node_idx].members = std::move(ids);
    return;
  }
  const std::size_t m = ids.size();
  const std::uint32_t k = ctx.branching;
  const std::size_t cap = (m + k - 1) / k;

  // Initial centroids: k distinct random members.
  std::vector<std::vector<float>> centroids;
  {
    std::vector<std::size_t> picks;
    std::uint64_t counter_idx = 0;
    while (picks.size() < k) {
      const auto pick = static_cast<std::size_t>(
          rng::uniform_below(ctx.seed, stream, counter_idx++, m));
      if (std::find(picks.begin(), picks.end(), pick) == picks.end()) {
        picks.push_back(pick);
      }
    }
    for (std::size_t p : picks) {
      auto row = ctx.set.row(ids[p]);
      centroids.emplace_back(row.begin(), row.end());
    }
  }

  std::vector<std::uint32_t> assignment(m, 0);
  constexpr int kIters = 5;
  for (int iter = 0; iter < kIters; ++iter) {
    // Distances of every point to every centroid.
    std::vector<float> dists(m * k);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::uint32_t c = 0; c < k; ++c) {
        dists[i * k + c] = squared_euclidean(
            ctx.set.row(ids[i]), std::span<const float>(centroids[c]), ctx.counter);
      }
    }
    // Assign points in order of their best available margin so capacity
    // pressure lands on the points that care least.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      float best_a = dists[a * k], best_b = dists[b * k];
      for (std::uint32_t c = 1; c < k; ++c) {
        best_a = std::min(best_a, dists[a * k + c]);
        best_b = std::min(best_b, dists[b * k + c]);
      }
      if (best_a != best_b) return best_a < best_b;
      return ids[a] < ids[b];
    });
    std::vector<std::size_t> load(k, 0);
    for (std::size_t i : order) {
      std::uint32_t best = k;
      float best_dist = 0.0f;
      for (std::uint32_t c = 0; c < k; ++c) {
        if (load[c] >= cap) continue;
        const float dist = dists[i * k + c];
        if (best == k || dist < best_dist) {
          best = c;
          best_dist = dist;
        }
      }
      assignment[i] = best;
      ++load[best];
    }
    // Recompute centroids as member means.
    std::vector<std::vector<double>> acc(k, std::vector<double>(ctx.set.d, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < m; ++i) {
      auto row = ctx.set.row(ids[i]);
      auto& a = acc[assignment[i]];
      for (std::size_t j = 0; j < ctx.set.d; ++j) a[j] += row[j];
      ++counts[assignment[i]];
    }
    for (std::uint32_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < ctx.set.d; ++j) {
        centroids[c][j] = static_cast<float>(acc[c][j] / static_cast<double>(counts[c]));
      }
    }
  }

  std::vector<std::vector<NodeId>> children_ids(k);
  for (std::size_t i = 0; i < m; ++i) {
    children_ids[assignment[i]].push_back(ids[i]);
  }

  // Collected first: emplace_back below may reallocate the node vector.
  std::vector<std::vector<float>> kept_centroids;
  std::vector<std::uint32_t> kept_children;
  std::vector<std::vector<NodeId>> kept_ids;
  for (std::uint32_t c = 0; c < k; ++c) {
    if (children_ids[c].empty()) continue;
    kept_centroids.push_back(centroids[c]);
    kept_children.push_back(static_cast<std::uint32_t>(tree.nodes.size()));
    tree.nodes.emplace_back();
    kept_ids.push_back(std::move(children_ids[c]));
  }
  tree.nodes[node_idx].is_leaf = false;
  tree.nodes[node_idx].centroids = std::move(kept_centroids);
  tree.nodes[node_idx].children = kept_children;
  for (std::size_t slot = 0; slot < kept_children.size(); ++slot) {
    km_split(ctx, std::move(kept_ids[slot]), kept_children[slot],
             rng::substream(stream, slot + 1));
  }
}

}  // namespace

SeedIndex km_build(const VectorSet& set, std::uint32_t branching,
                   std::uint32_t leaf_cap, double sample_fraction,
                   std::uint64_t seed, DistCounter& counter) {
  if (branching < 2) throw std::invalid_argument("km_build: branching must be >= 2");
  if (leaf_cap < branching) {
    throw std::invalid_argument("km_build: leaf_cap must be >= branching");
  }
  const std::size_t m = sample_count(set.n, sample_fraction);
  std::vector<NodeId> sample =
      sample_indices(set.n, m, seed, rng::substream(rng::kSeedSample, 1ull << 32));
  std::sort(sample.begin(), sample.end());

  KmTree tree;
  tree.nodes.emplace_back();
  KmBuildCtx ctx{set, branching, leaf_cap, seed, tree, counter};
  km_split(ctx, std::move(sample), 0, rng::kKmeansInit);

  SeedIndex idx;
  idx.kind = SsKind::kKM;
  idx.payload = std::move(tree);
  return idx;
}

std::vector<Candidate> km_seeds(const SeedIndex& idx, const VectorSet& set,
                                std::span<const float> q, std::size_t s,
                                DistCounter& counter) {
  if (s == 0) throw std::invalid_argument("km_seeds: s must be >= 1");
  return rank_pool(set, q, km_leaf_members(idx, q, counter), s, counter);
}

std::vector<NodeId> km_leaf_members(const SeedIndex& idx, std::span<const float> q,
                                    DistCounter& counter) {
  if (idx.kind != SsKind::kKM) throw std::invalid_argument("km_leaf_members: wrong index kind");
  const auto& tree = std::get<KmTree>(idx.payload);
  const KmTree::Node* node = &tree.nodes[0];
  while (!node->is_leaf) {
    std::size_t best = 0;
    float best_dist = 0.0f;
    for (std::size_t c = 0; c < node->centroids.size(); ++c) {
      const float dist = squared_euclidean(
          q, std::span<const float>(node->centroids[c]), counter);
      if (c == 0 || dist < best_dist) {
        best = c;
        best_dist = dist;
      }
    }
    node = &tree.nodes[node->children[best]];
  }
  return node->members;
}

// ---------------------------------------------------------------------------

SeedIndex medoid_seed(const VectorSet& set, DistCounter& counter) {
  std::vector<float> centroid(set.d);
  {
    std::vector<double> acc(set.d, 0.0);
    for (std::size_t i = 0; i < set.n; ++i) {
      auto row = set.row(i);
      for (std::size_t j = 0; j < set.d; ++j) acc[j] += row[j];
    }
    for (std::size_t j = 0; j < set.d; ++j) {
      centroid[j] = static_cast<float>(acc[j] / static_cast<double>(set.n));
    }
  }
  NodeId best = 0;
  float best_dist = squared_euclidean(std::span<const float>(centroid), set.row(0), counter);
  for (std::size_t i = 1; i < set.n; ++i) {
    const float dist =
        squared_euclidean(std::span<const float>(centroid), set.row(i), counter);
    if (dist < best_dist) {
      best = static_cast<NodeId>(i);
      best_dist = dist;
    }
  }
  SeedIndex idx;
  idx.kind = SsKind::kMD;
  idx.payload = best;
  return idx;
}

SeedIndex sf_seed(const VectorSet& set, std::uint64_t seed) {
  SeedIndex idx;
  idx.kind = SsKind::kSF;
  idx.payload = static_cast<NodeId>(rng::uniform_below(seed, rng::kFixedEntry, 0, set.n));
  return idx;
}

std::vector<NodeId> ks_seeds(std::size_t n, std::size_t s,
                             std::size_t query_index, std::uint64_t seed) {
  if (s == 0 || s > n) {
    throw std::invalid_argument("ks_seeds: need 1 <= s <= n");
  }
  return sample_indices(n, s, seed, rng::substream(rng::kKsQuery, query_index));
}

SeedIndex build_seed_index(const VectorSet& set, SsKind kind,
                           const SeedParams& params, std::uint64_t seed,
                           DistCounter& counter) {
  switch (kind) {
    case SsKind::kKD:
      return kd_build(set, params.kd_num_trees, params.sample_fraction, seed);
    case SsKind::kKM:
      return km_build(set, params.km_branching, params.km_leaf_cap,
                      params.sample_fraction, seed, counter);
    case SsKind::kMD:
      return medoid_seed(set, counter);
    case SsKind::kSF:
      return sf_seed(set, seed);
    case SsKind::kKS: {
      SeedIndex idx;
      idx.kind = SsKind::kKS;
      idx.payload = KsSeed{set.n, seed};
      return idx;
    }
    case SsKind::kSN: {
      SeedIndex idx;
      idx.kind = SsKind::kSN;
      return idx;
    }
    case SsKind::kNone:
      break;
  }
  return SeedIndex{};
}

}  // namespace gann
