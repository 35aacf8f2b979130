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
#include <span>
#include <vector>

#include "gann/core.hpp"
#include "gann/graph.hpp"
#include "gann/seeds.hpp"
#include "gann/vector_set.hpp"

namespace gann {

struct SearchParams {
  std::uint32_t k = 10;
  std::uint32_t beam_l = 100;       // >= k
  std::uint32_t seed_count_s = 0;   // KD/KM/KS seed count; 0 means beam_l
  std::uint32_t nprobe = 1;         // DC separate mode
  bool parallel_probe = false;      // DC fan-out; off for deterministic runs
  std::uint32_t threads = 1;

  void validate() const;
};

struct QueryResult {
  std::vector<Candidate> answers;  // true distances, ascending, ties by id
  std::uint64_t distance_calcs = 0;
  std::uint64_t visited = 0;  // expanded nodes
};

/// Caches each node's squared distance to the current query so one query
/// scope never evaluates the same node twice, across seed selection and beam
/// phases alike. Reusable between queries via epoch stamping.
class QueryEval {
 public:
  QueryEval(const VectorSet& set, std::span<const float> query, DistCounter& counter);

  /// Squared distance from the query to node id, evaluated at most once.
  float dist2(NodeId id);

  /// Marks a pre-annotated node (distance already paid for by the caller).
  void preload(NodeId id, float dist2);

  bool evaluated(NodeId id) const { return stamp_[id] == epoch_; }
  DistCounter& counter() { return counter_; }
  const VectorSet& set() const { return set_; }
  std::span<const float> query() const { return query_; }

 private:
  const VectorSet& set_;
  std::span<const float> query_;
  DistCounter& counter_;
  std::vector<std::uint32_t> stamp_;
  std::vector<float> cache_;
  std::uint32_t epoch_ = 1;
};

/// Best-first beam traversal: keep the l closest known candidates, expand the
/// closest unexpanded one, stop when every retained candidate is expanded;
/// return the k closest. Seeds must be pre-annotated with squared distances;
/// every newly encountered node costs exactly one distance evaluation.
QueryResult beam_search(const FlatGraph& g, const VectorSet& set,
                        std::span<const float> q, std::span<const Candidate> seeds,
                        std::size_t k, std::size_t l, DistCounter& counter);

/// Full pipeline over any index kind: seed selection, then beam search; a
/// layered index descends the hierarchy first; a separate-mode partitioned
/// index ranks partitions by centroid distance, probes the nprobe nearest and
/// merges. distance_calcs aggregates seeding, ranking and beam costs.
QueryResult search_index(const AnyIndex& index, const SeedIndex& seeds,
                         const VectorSet& set, std::span<const float> q,
                         const SearchParams& params, std::size_t query_index);

/// Fraction of the true k nearest neighbors present in the result.
double recall(const QueryResult& result, std::span<const NodeId> truth_ids,
              std::size_t k);

}  // namespace gann
