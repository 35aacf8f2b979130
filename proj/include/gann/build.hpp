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
#include <utility>
#include <vector>

#include "gann/diversify.hpp"
#include "gann/graph.hpp"
#include "gann/seeds.hpp"
#include "gann/vector_set.hpp"

namespace gann {

/// All construction tunables. Defaults follow the R=60 / L=800 baseline with
/// alpha = 1.2 and theta = 60 degrees.
struct BuildParams {
  std::uint32_t cap_R = 60;          // max out-degree R
  std::uint32_t beam_L_build = 800;  // construction beam width, >= cap_R
  std::uint32_t M = 16;              // layer-assignment out-degree parameter
  float alpha = 1.2f;                // RRND relaxation, >= 1
  float theta_deg = 60.0f;           // MOND angle threshold, in (0, 180)
  NdKind nd = NdKind::kRND;
  SsKind ss = SsKind::kKS;
  std::uint32_t leaf_size = 10'000;  // DC partition cap
  std::uint64_t seed = 0;

  std::uint32_t threads = 1;
  bool deterministic = true;       // forces one worker
  bool shuffle_insertion = false;  // experiment flag; default is id order
  std::uint32_t build_seed_count = 0;  // KS/KD/KM seeds per insertion; 0 = beam width
  SeedParams seed_params;

  void validate() const;
  NdSpec nd_spec() const { return {nd, alpha, theta_deg}; }
  std::uint32_t workers() const;
};

/// Distance work done by a build, split by phase. distance_calcs is always
/// the exact sum of the phase counters.
struct BuildReport {
  std::uint64_t distance_calcs = 0;
  double wall_time_s = 0.0;
  std::uint64_t search_calcs = 0;  // seed selection + candidate beam searches
  std::uint64_t prune_calcs = 0;   // list annotation + diversification
  std::uint64_t repair_calcs = 0;  // connectivity verification and repair

  void finalize() { distance_calcs = search_calcs + prune_calcs + repair_calcs; }
  BuildReport& operator+=(const BuildReport& o);
};

struct IiBuild {
  AnyIndex index;
  SeedIndex seeds;  // the query-time structure matching the build strategy
  BuildReport report;
};

/// Incremental insertion: nodes enter in ascending id order; each one is
/// wired by a beam search over the partial graph, its candidate pool (final
/// beam contents plus visited set) pruned by the ND strategy, and
/// bi-directional edges added with overflowing neighbors re-pruned. With
/// ss = SN the result is a LayeredGraph, otherwise a FlatGraph.
IiBuild build_ii(const VectorSet& set, const BuildParams& p);

/// Neighborhood propagation: start from a random k-regular out-graph and
/// repeatedly propose neighbor pairs to each other, each node keeping its k
/// closest, until updates die down (delta threshold) or max_iters passes.
/// accepted_per_iter, when given, records each iteration's accepted updates.
std::pair<FlatGraph, BuildReport> nndescent(const VectorSet& set, std::size_t k,
                                            std::size_t max_iters, double delta,
                                            std::uint64_t seed,
                                            std::vector<std::uint64_t>* accepted_per_iter = nullptr);

struct RefineResult {
  FlatGraph graph;
  BuildReport report;
  double pruning_ratio = 0.0;  // 1 - edges_after / edges_before
};

/// Passes every node's distance-annotated neighbor list through the chosen
/// ND pruner with cap_R.
RefineResult refine_with_nd(const FlatGraph& g, const VectorSet& set,
                            const NdSpec& nd, const BuildParams& p);

struct PartitionSpec {
  std::vector<NodeId> members;  // ascending global ids
  std::vector<float> centroid;
};

/// Recursive balanced 2-means until every partition holds at most leaf_size
/// members. Members exactly partition [0, n); each split hands each child
/// half the nodes (within one element).
std::vector<PartitionSpec> balanced_partition(const VectorSet& set,
                                              std::size_t leaf_size,
                                              std::uint64_t seed,
                                              DistCounter& counter);

/// Divide-and-conquer: balanced partitions, one II graph per partition.
/// Merged mode unions the per-partition edges over global ids and repairs
/// connectivity from the approximate medoid; separate mode keeps the
/// partition graphs and centroids for fan-out search.
std::pair<AnyIndex, BuildReport> build_dc(const VectorSet& set,
                                          const BuildParams& p, DcMode mode);

}  // namespace gann
