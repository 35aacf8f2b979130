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

#include <string>
#include <vector>

#include "gann/core.hpp"
#include "gann/vector_set.hpp"

namespace gann {

/// Per-query LID and LRC plus aggregate statistics. Lower LID and higher LRC
/// indicate an easier search task.
struct ComplexityReport {
  std::vector<double> lid;  // +infinity allowed
  std::vector<double> lrc;
  double lid_mean = 0.0;
  double lid_median = 0.0;
  double lrc_mean = 0.0;
  double lrc_median = 0.0;
};

/// Local intrinsic dimensionality over the brute-force k-NN distances:
///   LID(x) = -((1/k) * sum_{i=1..k} ln(dist_i / dist_k))^-1.
/// Zero distances (query coincides with a data point) are excluded first;
/// if fewer than 2 distances remain the result is +infinity, and if fewer
/// than k remain an error is raised. Returns +infinity when all k distances
/// are equal.
double lid(std::span<const float> query, const VectorSet& set, std::size_t k,
           DistCounter& counter);

/// Local relative contrast: mean distance to all points over the k-th
/// nearest distance. Errors when dist_k = 0 (query duplicates >= k points).
double lrc(std::span<const float> query, const VectorSet& set, std::size_t k,
           DistCounter& counter);

/// Computes both metrics for every query. The paper-style default is k=100.
ComplexityReport complexity_report(const VectorSet& set, const VectorSet& queries,
                                   std::size_t k, DistCounter& counter);

/// CSV with header `query_id,lid,lrc`, one row per query, `inf` for +infinity.
void write_complexity_csv(const ComplexityReport& report, const std::string& path);

}  // namespace gann
