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

#include <span>
#include <string>
#include <vector>

#include "gann/core.hpp"
#include "gann/vector_set.hpp"

namespace gann {

/// Exact k-NN answers for one query: (id, true distance) ascending by
/// distance, ties broken by smaller id. The oracle all recall numbers are
/// measured against.
using GroundTruthRow = std::vector<Candidate>;
using GroundTruth = std::vector<GroundTruthRow>;

/// Exhaustive scan over the whole set. Errors if k > n or k == 0.
GroundTruthRow brute_force_knn(const VectorSet& set, std::span<const float> query,
                               std::size_t k, DistCounter& counter);

GroundTruth brute_force_knn_batch(const VectorSet& set, const VectorSet& queries,
                                  std::size_t k, DistCounter& counter);

/// Ground-truth files are stored as an ivecs (ids) + fvecs (distances) pair,
/// matching the public Sift/Deep distribution convention.
void save_ground_truth(const GroundTruth& gt, const std::string& ids_path,
                       const std::string& dists_path);
GroundTruth load_ground_truth(const std::string& ids_path,
                              const std::string& dists_path);

/// Loads only the id file; distances are not needed to score recall.
std::vector<std::vector<NodeId>> load_ground_truth_ids(const std::string& ids_path);

}  // namespace gann
