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
#include <vector>

#include "gann/core.hpp"
#include "gann/vector_set.hpp"

namespace gann {

enum class NdKind : std::uint8_t { kNoND = 0, kRND = 1, kRRND = 2, kMOND = 3 };

std::string nd_name(NdKind kind);
NdKind nd_from_name(const std::string& name);

/// Strategy selector plus its parameters. alpha applies to RRND (>= 1),
/// theta_deg to MOND (in (0, 180)).
struct NdSpec {
  NdKind kind = NdKind::kRND;
  float alpha = 1.2f;
  float theta_deg = 60.0f;

  void validate() const;
};

/// Neighbor candidates for one node being wired. `reference` is the node the
/// distances are measured from; entries are sorted ascending by squared
/// distance, ties by id, contain no duplicates and never the reference.
struct CandidateList {
  NodeId reference = kInvalidNode;
  std::vector<Candidate> entries;  // dist = squared Euclidean to reference

  /// Sorts, deduplicates and drops the reference from a raw pool.
  static CandidateList from_pool(NodeId reference, std::vector<Candidate> pool);
};

/// No diversification: the cap_R nearest candidates, order preserved.
std::vector<NodeId> prune_nond(const CandidateList& c, std::size_t cap_R);

/// Relative neighborhood diversification. Greedy scan in ascending order;
/// a candidate is pruned iff some closer candidate is at least as close to
/// it as the reference is.
std::vector<NodeId> prune_rnd(const VectorSet& set, const CandidateList& c,
                              std::size_t cap_R, DistCounter& counter);

/// Relaxed RND: pruned iff alpha * dist(kept, cand) <= dist(ref, cand).
/// With alpha = 1 the kept set is identical to prune_rnd.
std::vector<NodeId> prune_rrnd(const VectorSet& set, const CandidateList& c,
                               std::size_t cap_R, float alpha,
                               DistCounter& counter);

/// Angle-based diversification: pruned iff the angle at the reference between
/// some kept neighbor and the candidate is below theta_deg. The cosine is
/// derived from the three squared distances (law of cosines) and clamped; a
/// zero-length difference vector yields angle 0 (pruned).
std::vector<NodeId> prune_mond(const VectorSet& set, const CandidateList& c,
                               std::size_t cap_R, float theta_deg,
                               DistCounter& counter);

/// Dispatch on spec.kind.
std::vector<NodeId> prune(const VectorSet& set, const CandidateList& c,
                          std::size_t cap_R, const NdSpec& spec,
                          DistCounter& counter);

}  // namespace gann
