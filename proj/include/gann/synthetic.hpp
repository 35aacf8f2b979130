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
#include <vector>

#include "gann/vector_set.hpp"

namespace gann {

/// Power-law synthetic data: each coordinate is Y = scale_k * X^exponent_a
/// with X ~ U(0,1). exponent_a = 0 is the uniform case, Y ~ U(0, scale_k);
/// skewness grows with the exponent.
struct PowerLawSpec {
  std::size_t n = 0;
  std::size_t d = 0;
  double exponent_a = 0.0;  // >= 0
  double scale_k = 1.0;     // > 0
  std::uint64_t seed = 0;
};

/// Gaussian query perturbation: mean fixed at 0, variance sigma2. A workload
/// with sigma2 = 0.01 corresponds to the "1% noise" label (p = 100 * sigma2).
struct NoiseSpec {
  double variance_sigma2 = 0.0;  // in [0, 1]
  std::uint64_t seed = 0;
};

/// Deterministic function of the spec; the random stream is keyed by
/// (seed, row, column) so generation order never matters.
VectorSet gen_powerlaw(const PowerLawSpec& spec);

/// Query i = base.row(indices[i]) + iid Gaussian(0, sigma2) per coordinate.
/// sigma2 = 0 returns rows bit-identical to the base.
VectorSet gen_noise_queries(const VectorSet& base,
                            const std::vector<NodeId>& indices,
                            const NoiseSpec& spec);

/// Draws `count` distinct row indices, uniformly, deterministic given seed.
std::vector<NodeId> sample_indices(std::size_t n, std::size_t count,
                                   std::uint64_t seed, std::uint64_t stream);

}  // namespace gann
