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

#include "gann/ground_truth.hpp"
#include "gann/index_io.hpp"
#include "gann/search.hpp"
#include "gann/vector_set.hpp"

namespace gann {

struct SweepSpec {
  std::string index_path;
  std::string data_path;
  std::string query_path;
  std::string gt_ids_path;
  std::string out_csv;
  std::size_t k = 10;
  std::vector<std::uint32_t> beam_widths;  // each >= k
  std::vector<std::uint32_t> nprobes{1};
  std::uint32_t seed_count_s = 0;  // 0 = beam width
  std::size_t repeats = 6;         // trimmed mean: drop the 2 best and worst
  std::uint32_t threads = 1;       // >1 enables DC intra-query fan-out
};

struct SweepRow {
  std::string method;
  std::string nd;
  std::string ss;
  std::uint32_t beam_l = 0;
  std::uint32_t nprobe = 1;
  double mean_recall = 0.0;
  double mean_distance_calcs = 0.0;
  double mean_latency_s = 0.0;
  double p99_latency_s = 0.0;
};

/// One row per (beam width, nprobe) pair. Each combination runs the whole
/// workload `repeats` times after one untimed warm-up pass; the best and
/// worst runs (up to two each) are excluded and the rest averaged. Recall
/// and distance calculations are deterministic across repeats.
std::vector<SweepRow> run_sweep_on(const IndexFile& file, const VectorSet& set,
                                   const VectorSet& queries,
                                   const std::vector<std::vector<NodeId>>& gt_ids,
                                   const SweepSpec& spec);

/// Loads the files named in the spec, runs the sweep, writes the CSV.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Header `method,nd,ss,beam_l,nprobe,mean_recall,mean_distance_calcs,
/// mean_latency_s,p99_latency_s`, preceded by one `#` metadata comment line.
void write_sweep_csv(const std::vector<SweepRow>& rows, const SweepSpec& spec,
                     const std::string& path);

}  // namespace gann
