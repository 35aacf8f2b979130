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

#include "gann/ground_truth.hpp"

#include <algorithm>
#include <stdexcept>

#include "gann/error.hpp"

namespace gann {

GroundTruthRow brute_force_knn(const VectorSet& set, std::span<const float> query,
                               std::size_t k, DistCounter& counter) {
  if (k == 0 || k > set.n) {
    throw std::invalid_argument("brute_force_knn: need 1 <= k <= n, got k=" +
                                std::to_string(k) + " n=" + std::to_string(set.n));
  }
  std::vector<Candidate> all(set.n);
  for (std::size_t i = 0; i < set.n; ++i) {
    all[i].id = static_cast<NodeId>(i);
    all[i].dist = squared_euclidean(query, set.row(i), counter);
  }
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k),
                    all.end(), candidate_less);
  all.resize(k);
  for (Candidate& c : all) c.dist = to_true_dist(c.dist);
  return all;
}

GroundTruth brute_force_knn_batch(const VectorSet& set, const VectorSet& queries,
                                  std::size_t k, DistCounter& counter) {
  if (queries.d != set.d) {
    throw std::invalid_argument("brute_force_knn_batch: dimension mismatch");
  }
  GroundTruth gt(queries.n);
  for (std::size_t q = 0; q < queries.n; ++q) {
    gt[q] = brute_force_knn(set, queries.row(q), k, counter);
  }
  return gt;
}

void save_ground_truth(const GroundTruth& gt, const std::string& ids_path,
                       const std::string& dists_path) {
  std::vector<std::vector<std::int32_t>> ids(gt.size());
  VectorSet dists(gt.size(), gt.empty() ? 1 : gt[0].size());
  for (std::size_t q = 0; q < gt.size(); ++q) {
    ids[q].reserve(gt[q].size());
    for (std::size_t j = 0; j < gt[q].size(); ++j) {
      ids[q].push_back(static_cast<std::int32_t>(gt[q][j].id));
      dists.values[q * dists.d + j] = gt[q][j].dist;
    }
  }
  save_ivecs(ids, ids_path);
  save_vecs(dists, dists_path, VecFormat::kFvecs);
}

GroundTruth load_ground_truth(const std::string& ids_path,
                              const std::string& dists_path) {
  auto ids = load_ivecs(ids_path);
  VectorSet dists = load_vecs(dists_path, VecFormat::kFvecs);
  if (ids.size() != dists.n || (!ids.empty() && ids[0].size() != dists.d)) {
    throw FormatError("ground truth id/distance files disagree on shape");
  }
  GroundTruth gt(ids.size());
  for (std::size_t q = 0; q < ids.size(); ++q) {
    gt[q].resize(ids[q].size());
    for (std::size_t j = 0; j < ids[q].size(); ++j) {
      gt[q][j].id = static_cast<NodeId>(ids[q][j]);
      gt[q][j].dist = dists.values[q * dists.d + j];
    }
  }
  return gt;
}

std::vector<std::vector<NodeId>> load_ground_truth_ids(const std::string& ids_path) {
  auto raw = load_ivecs(ids_path);
  std::vector<std::vector<NodeId>> ids(raw.size());
  for (std::size_t q = 0; q < raw.size(); ++q) {
    ids[q].assign(raw[q].begin(), raw[q].end());
  }
  return ids;
}

}  // namespace gann
