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

#include "gann/synthetic.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "gann/rng.hpp"

namespace gann {

VectorSet gen_powerlaw(const PowerLawSpec& spec) {
  if (spec.n == 0 || spec.d == 0) {
    throw std::invalid_argument("gen_powerlaw: n and d must be >= 1");
  }
  if (spec.exponent_a < 0.0 || spec.scale_k <= 0.0) {
    throw std::invalid_argument("gen_powerlaw: exponent_a >= 0, scale_k > 0");
  }
  VectorSet set(spec.n, spec.d);
  for (std::size_t i = 0; i < spec.n; ++i) {
    float* row = set.values.data() + i * spec.d;
    for (std::size_t j = 0; j < spec.d; ++j) {
      const std::uint64_t counter = static_cast<std::uint64_t>(i) * spec.d + j;
      const double x = rng::uniform01(spec.seed, rng::kPowerLaw, counter);
      // Exponent 0 is the uniform case: the raw draw is kept as-is.
      const double y = spec.exponent_a == 0.0
                           ? spec.scale_k * x
                           : spec.scale_k * std::pow(x, spec.exponent_a);
      row[j] = static_cast<float>(y);
    }
  }
  return set;
}

VectorSet gen_noise_queries(const VectorSet& base,
                            const std::vector<NodeId>& indices,
                            const NoiseSpec& spec) {
  if (spec.variance_sigma2 < 0.0) {
    throw std::invalid_argument("gen_noise_queries: variance must be >= 0");
  }
  for (NodeId idx : indices) {
    if (idx >= base.n) {
      throw std::invalid_argument("gen_noise_queries: index out of range");
    }
  }
  VectorSet queries(indices.size(), base.d);
  const double sigma = std::sqrt(spec.variance_sigma2);
  for (std::size_t q = 0; q < indices.size(); ++q) {
    const float* src = base.values.data() + static_cast<std::size_t>(indices[q]) * base.d;
    float* dst = queries.values.data() + q * base.d;
    if (sigma == 0.0) {
      for (std::size_t j = 0; j < base.d; ++j) dst[j] = src[j];
      continue;
    }
    const std::uint64_t stream = rng::substream(rng::kNoise, q);
    for (std::size_t j = 0; j < base.d; ++j) {
      dst[j] = static_cast<float>(src[j] + sigma * rng::gaussian(spec.seed, stream, j));
    }
  }
  return queries;
}

std::vector<NodeId> sample_indices(std::size_t n, std::size_t count,
                                   std::uint64_t seed, std::uint64_t stream) {
  if (count > n) {
    throw std::invalid_argument("sample_indices: count exceeds population");
  }
  std::vector<NodeId> out;
  out.reserve(count);
  std::unordered_set<NodeId> seen;
  seen.reserve(count * 2);
  std::uint64_t counter = 0;
  while (out.size() < count) {
    const NodeId id =
        static_cast<NodeId>(rng::uniform_below(seed, stream, counter++, n));
    if (seen.insert(id).second) out.push_back(id);
  }
  return out;
}

}  // namespace gann
