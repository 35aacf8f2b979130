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

#include "gann/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "gann/error.hpp"

namespace gann {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> sorted_true_distances(std::span<const float> query,
                                          const VectorSet& set,
                                          DistCounter& counter) {
  std::vector<double> dists(set.n);
  for (std::size_t i = 0; i < set.n; ++i) {
    dists[i] = std::sqrt(
        static_cast<double>(squared_euclidean(query, set.row(i), counter)));
  }
  std::sort(dists.begin(), dists.end());
  return dists;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  if (v.size() % 2 == 1) return v[m];
  return 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

double lid(std::span<const float> query, const VectorSet& set, std::size_t k,
           DistCounter& counter) {
  if (k < 2) throw std::invalid_argument("lid: k must be >= 2");
  auto dists = sorted_true_distances(query, set, counter);
  // Drop exact self-matches; log(0) would diverge.
  std::size_t first_nonzero = 0;
  while (first_nonzero < dists.size() && dists[first_nonzero] == 0.0) {
    ++first_nonzero;
  }
  const std::size_t usable = dists.size() - first_nonzero;
  if (usable < 2) return kInf;
  if (usable < k) {
    throw std::invalid_argument("lid: k=" + std::to_string(k) +
                                " exceeds usable neighbor count " +
                                std::to_string(usable));
  }
  const double dist_k = dists[first_nonzero + k - 1];
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sum += std::log(dists[first_nonzero + i] / dist_k);
  }
  if (sum == 0.0) return kInf;  // all k distances equal
  return -1.0 / (sum / static_cast<double>(k));
}

double lrc(std::span<const float> query, const VectorSet& set, std::size_t k,
           DistCounter& counter) {
  if (k == 0 || k > set.n) {
    throw std::invalid_argument("lrc: need 1 <= k <= n");
  }
  auto dists = sorted_true_distances(query, set, counter);
  const double dist_k = dists[k - 1];
  if (dist_k == 0.0) {
    throw std::invalid_argument("lrc: dist_k is zero (query duplicates >= k points)");
  }
  double mean = 0.0;
  for (double d : dists) mean += d;
  mean /= static_cast<double>(dists.size());
  return mean / dist_k;
}

ComplexityReport complexity_report(const VectorSet& set, const VectorSet& queries,
                                   std::size_t k, DistCounter& counter) {
  if (queries.d != set.d) {
    throw std::invalid_argument("complexity_report: dimension mismatch");
  }
  ComplexityReport report;
  report.lid.reserve(queries.n);
  report.lrc.reserve(queries.n);
  for (std::size_t q = 0; q < queries.n; ++q) {
    report.lid.push_back(lid(queries.row(q), set, k, counter));
    report.lrc.push_back(lrc(queries.row(q), set, k, counter));
  }
  double lid_sum = 0.0, lrc_sum = 0.0;
  for (double v : report.lid) lid_sum += v;
  for (double v : report.lrc) lrc_sum += v;
  const double n = static_cast<double>(queries.n);
  report.lid_mean = lid_sum / n;
  report.lrc_mean = lrc_sum / n;
  report.lid_median = median(report.lid);
  report.lrc_median = median(report.lrc);
  return report;
}

void write_complexity_csv(const ComplexityReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "query_id,lid,lrc\n";
  char buf[64];
  for (std::size_t q = 0; q < report.lid.size(); ++q) {
    out << q << ',';
    if (std::isinf(report.lid[q])) {
      out << "inf";
    } else {
      std::snprintf(buf, sizeof(buf), "%.6f", report.lid[q]);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.6f", report.lrc[q]);
    out << ',' << buf << '\n';
  }
  if (!out) throw IoError("short write to " + path);
}

}  // namespace gann
