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

#include "gann/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "gann/error.hpp"

namespace gann {

namespace {

using Clock = std::chrono::steady_clock;

struct RunStats {
  double total_latency = 0.0;
  std::vector<double> per_query_latency;
  double mean_recall = 0.0;
  double mean_calcs = 0.0;
};

RunStats run_workload(const IndexFile& file, const VectorSet& set,
                      const VectorSet& queries,
                      const std::vector<std::vector<NodeId>>& gt_ids,
                      const SearchParams& params) {
  RunStats stats;
  stats.per_query_latency.reserve(queries.n);
  double recall_sum = 0.0;
  double calcs_sum = 0.0;
  for (std::size_t q = 0; q < queries.n; ++q) {
    const auto t0 = Clock::now();
    const QueryResult result =
        search_index(file.index, file.seeds, set, queries.row(q), params, q);
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    stats.per_query_latency.push_back(dt);
    stats.total_latency += dt;
    recall_sum += recall(result, gt_ids[q], params.k);
    calcs_sum += static_cast<double>(result.distance_calcs);
  }
  stats.mean_recall = recall_sum / static_cast<double>(queries.n);
  stats.mean_calcs = calcs_sum / static_cast<double>(queries.n);
  return stats;
}

std::string method_label(const IndexFile& file) {
  if (!file.meta.method.empty()) return file.meta.method;
  if (std::holds_alternative<FlatGraph>(file.index)) return "flat";
  if (std::holds_alternative<LayeredGraph>(file.index)) return "layered";
  return "partitioned";
}

}  // namespace

std::vector<SweepRow> run_sweep_on(const IndexFile& file, const VectorSet& set,
                                   const VectorSet& queries,
                                   const std::vector<std::vector<NodeId>>& gt_ids,
                                   const SweepSpec& spec) {
  if (queries.n == 0) throw std::invalid_argument("run_sweep: no queries");
  if (gt_ids.size() < queries.n) {
    throw std::invalid_argument("run_sweep: ground truth missing rows");
  }
  for (const auto& row : gt_ids) {
    if (row.size() < spec.k) {
      throw std::invalid_argument("run_sweep: ground truth shallower than k");
    }
  }
  for (std::uint32_t l : spec.beam_widths) {
    if (l < spec.k) {
      throw std::invalid_argument("run_sweep: beam width below k");
    }
  }
  if (spec.repeats == 0) throw std::invalid_argument("run_sweep: repeats >= 1");

  std::vector<SweepRow> rows;
  for (std::uint32_t beam_l : spec.beam_widths) {
    for (std::uint32_t nprobe : spec.nprobes) {
      SearchParams params;
      params.k = static_cast<std::uint32_t>(spec.k);
      params.beam_l = beam_l;
      params.seed_count_s = spec.seed_count_s;
      params.nprobe = nprobe;
      params.parallel_probe = spec.threads > 1;
      params.threads = spec.threads;

      run_workload(file, set, queries, gt_ids, params);  // untimed warm-up

      std::vector<RunStats> runs;
      runs.reserve(spec.repeats);
      for (std::size_t r = 0; r < spec.repeats; ++r) {
        runs.push_back(run_workload(file, set, queries, gt_ids, params));
      }
      // Recall and distance counts cannot vary across repeats.
      for (const RunStats& r : runs) {
        if (r.mean_recall != runs[0].mean_recall ||
            r.mean_calcs != runs[0].mean_calcs) {
          throw std::logic_error("run_sweep: nondeterministic recall/calc columns");
        }
      }

      // Trim up to the 2 best and 2 worst runs by total latency.
      std::vector<std::size_t> order(runs.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return runs[a].total_latency < runs[b].total_latency;
      });
      const std::size_t trim = std::min<std::size_t>(2, (runs.size() - 1) / 2);
      std::vector<std::size_t> kept(order.begin() + static_cast<std::ptrdiff_t>(trim),
                                    order.end() - static_cast<std::ptrdiff_t>(trim));

      double latency_sum = 0.0;
      std::vector<double> pooled;
      for (std::size_t idx : kept) {
        latency_sum += runs[idx].total_latency;
        pooled.insert(pooled.end(), runs[idx].per_query_latency.begin(),
                      runs[idx].per_query_latency.end());
      }
      std::sort(pooled.begin(), pooled.end());
      const std::size_t p99_idx = static_cast<std::size_t>(
          std::ceil(0.99 * static_cast<double>(pooled.size()))) - 1;

      SweepRow row;
      row.method = method_label(file);
      row.nd = file.meta.nd.empty() ? "?" : file.meta.nd;
      row.ss = file.meta.ss.empty() ? ss_name(file.seeds.kind) : file.meta.ss;
      row.beam_l = beam_l;
      row.nprobe = nprobe;
      row.mean_recall = runs[0].mean_recall;
      row.mean_distance_calcs = runs[0].mean_calcs;
      row.mean_latency_s = latency_sum /
                           (static_cast<double>(kept.size()) *
                            static_cast<double>(queries.n));
      row.p99_latency_s = pooled[std::min(p99_idx, pooled.size() - 1)];
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  IndexFile file = load_index(spec.index_path);
  VectorSet set = load_vecs(spec.data_path, VecFormat::kFvecs);
  VectorSet queries = load_vecs(spec.query_path, VecFormat::kFvecs);
  auto gt_ids = load_ground_truth_ids(spec.gt_ids_path);
  if (queries.d != set.d) {
    throw FormatError("run_sweep: query dimension does not match the dataset");
  }
  if (auto* part = std::get_if<PartitionedIndex>(&file.index)) {
    DistCounter setup;
    refresh_partition_seeds(*part, set, setup);
  }
  auto rows = run_sweep_on(file, set, queries, gt_ids, spec);
  if (!spec.out_csv.empty()) write_sweep_csv(rows, spec, spec.out_csv);
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const SweepSpec& spec,
                     const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const std::size_t trim = std::min<std::size_t>(2, (spec.repeats - 1) / 2);
  out << "# k=" << spec.k << " repeats=" << spec.repeats << " trimmed=" << trim
      << "+" << trim << " warmup=1 (untimed pass per combination; caches not flushed)\n";
  out << "method,nd,ss,beam_l,nprobe,mean_recall,mean_distance_calcs,"
         "mean_latency_s,p99_latency_s\n";
  char buf[160];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%s,%u,%u,%.6f,%.2f,%.9f,%.9f",
                  r.method.c_str(), r.nd.c_str(), r.ss.c_str(), r.beam_l,
                  r.nprobe, r.mean_recall, r.mean_distance_calcs,
                  r.mean_latency_s, r.p99_latency_s);
    out << buf << '\n';
  }
  if (!out) throw IoError("short write to " + path);
}

}  // namespace gann
