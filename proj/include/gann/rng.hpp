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

namespace gann {

// Counter-based generator built on the splitmix64 finalizer: every output is
// a pure function of (seed, stream, counter), so parallel producers draw from
// disjoint streams in any order and still replay bit-identically.

namespace rng {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t rand_u64(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) {
  return mix64(mix64(mix64(seed) ^ stream) ^ (counter * 0xda942042e4dd58b5ULL));
}

/// Uniform double in [0, 1).
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t counter) {
  return static_cast<double>(rand_u64(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// Uniform double strictly inside (0, 1); safe as input to log().
inline double uniform01_open(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t counter) {
  return (static_cast<double>(rand_u64(seed, stream, counter) >> 11) + 0.5) *
         0x1.0p-53;
}

/// Uniform integer in [0, bound). bound must be > 0.
inline std::uint64_t uniform_below(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t counter, std::uint64_t bound) {
  // Multiply-shift range reduction; bias is negligible for desk-scale bounds.
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rand_u64(seed, stream, counter)) * bound) >> 64);
}

/// Standard normal via Box-Muller, deterministic across platforms.
/// Consumes counters 2*counter and 2*counter+1 of the stream.
inline double gaussian(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t counter) {
  double u1 = uniform01_open(seed, stream, 2 * counter);
  double u2 = uniform01(seed, stream, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Stream namespaces. Keeping them distinct means no two subsystems can ever
// consume the same (seed, stream, counter) triple.
enum Stream : std::uint64_t {
  kPowerLaw = 1,
  kNoise = 2,
  kLayerAssign = 3,
  kFixedEntry = 4,
  kKsQuery = 5,
  kKsBuild = 6,
  kSeedSample = 7,
  kKmeansInit = 8,
  kNnDescentInit = 9,
  kShuffle = 10,
  kPartitionInit = 11,
  kQueryPick = 12,
};

/// Derives a sub-stream id, e.g. one stream per query or per tree.
inline std::uint64_t substream(std::uint64_t stream, std::uint64_t index) {
  return mix64((stream << 32) ^ index);
}

}  // namespace rng

}  // namespace gann
