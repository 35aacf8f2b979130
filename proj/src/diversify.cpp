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

#include "gann/diversify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gann {

std::string nd_name(NdKind kind) {
  switch (kind) {
    case NdKind::kNoND: return "nond";
    case NdKind::kRND: return "rnd";
    case NdKind::kRRND: return "rrnd";
    case NdKind::kMOND: return "mond";
  }
  return "?";
}

NdKind nd_from_name(const std::string& name) {
  if (name == "nond") return NdKind::kNoND;
  if (name == "rnd") return NdKind::kRND;
  if (name == "rrnd") return NdKind::kRRND;
  if (name == "mond") return NdKind::kMOND;
  throw std::invalid_argument("unknown ND strategy: " + name);
}

void NdSpec::validate() const {
  if (kind == NdKind::kRRND && alpha < 1.0f) {
    throw std::invalid_argument("RRND requires alpha >= 1");
  }
  if (kind == NdKind::kMOND && !(theta_deg > 0.0f && theta_deg < 180.0f)) {
    throw std::invalid_argument("MOND requires theta in (0, 180) degrees");
  }
}

CandidateList CandidateList::from_pool(NodeId reference,
                                       std::vector<Candidate> pool) {
  std::sort(pool.begin(), pool.end(), candidate_less);
  CandidateList c;
  c.reference = reference;
  c.entries.reserve(pool.size());
  NodeId prev = kInvalidNode;
  for (const Candidate& cand : pool) {
    if (cand.id == reference) continue;
    if (cand.id == prev) continue;  // sorted order puts duplicates adjacent
    // Duplicate ids with unequal distances would not be adjacent; guard anyway.
    bool dup = false;
    if (!c.entries.empty() && cand.dist == c.entries.back().dist) {
      for (auto it = c.entries.rbegin();
           it != c.entries.rend() && it->dist == cand.dist; ++it) {
        if (it->id == cand.id) { dup = true; break; }
      }
    }
    if (dup) continue;
    c.entries.push_back(cand);
    prev = cand.id;
  }
  return c;
}

std::vector<NodeId> prune_nond(const CandidateList& c, std::size_t cap_R) {
  const std::size_t keep = std::min(cap_R, c.entries.size());
  std::vector<NodeId> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(c.entries[i].id);
  return out;
}

namespace {

// Shared greedy scan in ascending candidate order. A candidate is occluded
// when `pruned_by` holds against ANY closer candidate, kept or pruned; this
// is the relative-neighborhood reading under which the pruned-set
// containments (RND vs RRND/MOND) are theorems rather than tendencies.
template <typename PrunedBy>
std::vector<NodeId> greedy_prune(const CandidateList& c, std::size_t cap_R,
                                 PrunedBy&& pruned_by) {
  std::vector<NodeId> kept;
  kept.reserve(std::min(cap_R, c.entries.size()));
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    if (kept.size() >= cap_R) break;
    const Candidate& cand = c.entries[i];
    bool occluded = false;
    for (std::size_t j = 0; j < i; ++j) {
      if (pruned_by(c.entries[j], cand)) { occluded = true; break; }
    }
    if (!occluded) kept.push_back(cand.id);
  }
  return kept;
}

}  // namespace

std::vector<NodeId> prune_rnd(const VectorSet& set, const CandidateList& c,
                              std::size_t cap_R, DistCounter& counter) {
  return greedy_prune(c, cap_R, [&](const Candidate& closer, const Candidate& cand) {
    const float between = squared_euclidean(set.row(closer.id), set.row(cand.id), counter);
    return between <= cand.dist;
  });
}

std::vector<NodeId> prune_rrnd(const VectorSet& set, const CandidateList& c,
                               std::size_t cap_R, float alpha,
                               DistCounter& counter) {
  if (alpha < 1.0f) throw std::invalid_argument("prune_rrnd: alpha must be >= 1");
  // alpha * d(kept,cand) <= d(ref,cand) compared on squared distances; with
  // alpha = 1 the scale factor is exactly 1 and the scan reduces to RND.
  const float alpha_sq = alpha * alpha;
  return greedy_prune(c, cap_R, [&](const Candidate& closer, const Candidate& cand) {
    const float between = squared_euclidean(set.row(closer.id), set.row(cand.id), counter);
    return alpha_sq * between <= cand.dist;
  });
}

std::vector<NodeId> prune_mond(const VectorSet& set, const CandidateList& c,
                               std::size_t cap_R, float theta_deg,
                               DistCounter& counter) {
  if (!(theta_deg > 0.0f && theta_deg < 180.0f)) {
    throw std::invalid_argument("prune_mond: theta must be in (0, 180) degrees");
  }
  const double cos_theta = std::cos(theta_deg * 3.14159265358979323846 / 180.0);
  return greedy_prune(c, cap_R, [&](const Candidate& closer, const Candidate& cand) {
    // Angle at the reference between the closer candidate and this one, from
    // the three squared distances. A coincident point gives angle 0.
    const double a2 = closer.dist;
    const double b2 = cand.dist;
    if (a2 == 0.0 || b2 == 0.0) return true;
    const double c2 = squared_euclidean(set.row(closer.id), set.row(cand.id), counter);
    double cos_angle = (a2 + b2 - c2) / (2.0 * std::sqrt(a2 * b2));
    cos_angle = std::clamp(cos_angle, -1.0, 1.0);
    // angle < theta  <=>  cos(angle) > cos(theta)
    return cos_angle > cos_theta;
  });
}

std::vector<NodeId> prune(const VectorSet& set, const CandidateList& c,
                          std::size_t cap_R, const NdSpec& spec,
                          DistCounter& counter) {
  spec.validate();
  switch (spec.kind) {
    case NdKind::kNoND: return prune_nond(c, cap_R);
    case NdKind::kRND: return prune_rnd(set, c, cap_R, counter);
    case NdKind::kRRND: return prune_rrnd(set, c, cap_R, spec.alpha, counter);
    case NdKind::kMOND: return prune_mond(set, c, cap_R, spec.theta_deg, counter);
  }
  throw std::logic_error("prune: bad NdKind");
}

}  // namespace gann
