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

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace gann {

/// Row index into a VectorSet. Valid only relative to the set it was drawn from.
using NodeId = std::uint32_t;

constexpr NodeId kInvalidNode = static_cast<NodeId>(-1);

/// (node, distance-to-reference) pair. The `dist` field holds squared
/// Euclidean distance inside search and pruning code and true Euclidean
/// distance in reported results and ground-truth rows; each API documents
/// which convention it uses.
struct Candidate {
  NodeId id = kInvalidNode;
  float dist = 0.0f;
};

/// Ordering used everywhere candidates are ranked: ascending distance,
/// ties broken by smaller node id so runs replay exactly.
inline bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.dist != b.dist) return a.dist < b.dist;
  return a.id < b.id;
}

/// Counts full d-dimensional distance evaluations. One counter is owned by
/// one query or build scope at a time; totals are exact, never sampled.
struct DistCounter {
  std::uint64_t count = 0;

  void add(std::uint64_t k = 1) { count += k; }
  void reset() { count = 0; }
};

namespace detail {

inline float l2sqr(const float* a, const float* b, std::size_t d) {
  std::size_t i = 0;
  float sum = 0.0f;
#if defined(__AVX2__)
  if (d >= 8) {
    __m256 acc = _mm256_setzero_ps();
    for (; i + 8 <= d; i += 8) {
      __m256 va = _mm256_loadu_ps(a + i);
      __m256 vb = _mm256_loadu_ps(b + i);
      __m256 diff = _mm256_sub_ps(va, vb);
#if defined(__FMA__)
      acc = _mm256_fmadd_ps(diff, diff, acc);
#else
      acc = _mm256_add_ps(acc, _mm256_mul_ps(diff, diff));
#endif
    }
    __m128 lo = _mm256_castps256_ps128(acc);
    __m128 hi = _mm256_extractf128_ps(acc, 1);
    __m128 s = _mm_add_ps(lo, hi);
    s = _mm_hadd_ps(s, s);
    s = _mm_hadd_ps(s, s);
    sum = _mm_cvtss_f32(s);
  }
#else
  float acc0 = 0.0f, acc1 = 0.0f, acc2 = 0.0f, acc3 = 0.0f;
  for (; i + 4 <= d; i += 4) {
    float d0 = a[i] - b[i];
    float d1 = a[i + 1] - b[i + 1];
    float d2 = a[i + 2] - b[i + 2];
    float d3 = a[i + 3] - b[i + 3];
    acc0 += d0 * d0;
    acc1 += d1 * d1;
    acc2 += d2 * d2;
    acc3 += d3 * d3;
  }
  sum = (acc0 + acc1) + (acc2 + acc3);
#endif
  for (; i < d; ++i) {
    float diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

}  // namespace detail

/// Squared Euclidean distance. Counts one evaluation. Ordering-equivalent to
/// euclidean(); used for all comparisons in hot loops.
inline float squared_euclidean(std::span<const float> a, std::span<const float> b,
                               DistCounter& counter) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("squared_euclidean: dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  counter.add();
  return detail::l2sqr(a.data(), b.data(), a.size());
}

/// True Euclidean distance. Counts one evaluation (the underlying pass over
/// the coordinates; the square root is free post-processing).
inline float euclidean(std::span<const float> a, std::span<const float> b,
                       DistCounter& counter) {
  return std::sqrt(squared_euclidean(a, b, counter));
}

/// Converts an already-counted squared distance to a true distance.
inline float to_true_dist(float squared) { return std::sqrt(squared); }

}  // namespace gann
