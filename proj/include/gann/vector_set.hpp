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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gann/core.hpp"

namespace gann {

/// Dense row-major n x d single-precision dataset. Row index is node identity.
struct VectorSet {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<float> values;  // n * d, row-major

  VectorSet() = default;
  VectorSet(std::size_t n_, std::size_t d_)
      : n(n_), d(d_), values(n_ * d_, 0.0f) {}

  std::span<const float> row(std::size_t i) const {
    return {values.data() + i * d, d};
  }
  std::span<float> mutable_row(std::size_t i) {
    return {values.data() + i * d, d};
  }
};

enum class VecFormat { kFvecs, kBvecs, kIvecs };

/// Loads a .fvecs/.bvecs/.ivecs file: little-endian records of a 4-byte
/// dimension count followed by d values (f32 / u8 widened to float / i32).
/// Throws FormatError naming the byte offset on truncation, inconsistent
/// dimensions, or d <= 0.
VectorSet load_vecs(const std::string& path, VecFormat format);

/// Writes rows in the matching format. Ivecs rows are truncated toward zero.
void save_vecs(const VectorSet& set, const std::string& path, VecFormat format);

/// Writes integer id rows (e.g. ground-truth ids) as .ivecs.
void save_ivecs(const std::vector<std::vector<std::int32_t>>& rows,
                const std::string& path);

/// Reads an .ivecs file as integer rows.
std::vector<std::vector<std::int32_t>> load_ivecs(const std::string& path);

}  // namespace gann
