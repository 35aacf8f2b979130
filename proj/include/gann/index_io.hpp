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

#include "gann/graph.hpp"
#include "gann/seeds.hpp"

namespace gann {

/// Build provenance carried in the index file so sweeps can label their rows.
struct IndexMeta {
  std::string method;  // ii | nnd | dc-merged | dc-separate
  std::string nd;
  std::string ss;
  float alpha = 1.2f;
  float theta_deg = 60.0f;
  std::uint32_t M = 16;
  std::uint32_t beam_L_build = 800;
  std::uint64_t build_seed = 0;

  bool operator==(const IndexMeta&) const = default;
};

/// The on-disk unit: the index itself plus the kind-tagged seed-structure
/// and metadata sections.
struct IndexFile {
  AnyIndex index;
  SeedIndex seeds;
  IndexMeta meta;
};

/// GANN container, all little-endian: magic "GANN", u32 version=1, u8 kind
/// (0=flat, 1=layered, 2=partitioned), u64 n, u32 d, u32 cap_R, the
/// kind-specific payload, then the seed section and the metadata section.
/// save followed by load reproduces the structures exactly.
void save_index(const IndexFile& file, const std::string& path);

/// Rejects bad magic, unsupported versions, out-of-range kind bytes and
/// truncated files with distinct errors. Partition search seeds are not
/// stored; call refresh_partition_seeds once the dataset is available.
IndexFile load_index(const std::string& path);

}  // namespace gann
