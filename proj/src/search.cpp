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

#include "gann/search.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>
#include <unordered_set>

#include "gann/detail/frontier.hpp"

namespace gann {

void SearchParams::validate() const {
  if (k == 0 || beam_l < k) {
    throw std::invalid_argument("SearchParams: need beam_l >= k >= 1");
  }
  if (nprobe == 0) throw std::invalid_argument("SearchParams: nprobe >= 1");
}

QueryEval::QueryEval(const VectorSet& set, std::span<const float> query,
                     DistCounter& counter)
    : set_(set), query_(query), counter_(counter),
      stamp_(set.n, 0), cache_(set.n, 0.0f) {
  if (query.size() != set.d) {
    throw std::invalid_argument("QueryEval: query dimension mismatch");
  }
}

float QueryEval::dist2(NodeId id) {
  if (stamp_[id] == epoch_) return cache_[id];
  const float dist = squared_euclidean(query_, set_.row(id), counter_);
  stamp_[id] = epoch_;
  cache_[id] = dist;
  return dist;
}

void QueryEval::preload(NodeId id, float dist2) {
  stamp_[id] = epoch_;
  cache_[id] = dist2;
}

namespace {

// Core loop shared by the public operation and the pipeline. Neighbor ids are
// mapped through `to_global` so partition-local graphs can reuse the global
// evaluation cache.
template <typename ToGlobal>
QueryResult beam_core(const FlatGraph& g, QueryEval& eval,
                      std::span<const Candidate> seeds, std::size_t k,
                      std::size_t l, ToGlobal&& to_global) {
  if (seeds.empty()) throw std::invalid_argument("beam_search: empty seed list");
  if (l < k) throw std::invalid_argument("beam_search: need l >= k");

  detail::Frontier frontier(l);
  std::unordered_set<NodeId> seen_seeds;
  for (const Candidate& s : seeds) {
    if (!seen_seeds.insert(s.id).second) continue;  // duplicate seeds collapse
    frontier.insert(s);
  }

  QueryResult result;
  while (true) {
    const std::size_t at = frontier.pop_nearest_unexpanded();
    if (at == detail::Frontier::npos) break;
    const NodeId local = frontier.at(at).id;
    ++result.visited;
    for (NodeId nb : g.neighbors(local)) {
      const NodeId global = to_global(nb);
      if (eval.evaluated(global)) continue;
      frontier.insert({nb, eval.dist2(global)});
    }
  }

  const std::size_t take = std::min(k, frontier.size());
  result.answers.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    result.answers.push_back(frontier.at(i));  // squared; callers convert
  }
  return result;
}

void to_true_distances(QueryResult& result) {
  for (Candidate& c : result.answers) c.dist = to_true_dist(c.dist);
}

}  // namespace

QueryResult beam_search(const FlatGraph& g, const VectorSet& set,
                        std::span<const float> q, std::span<const Candidate> seeds,
                        std::size_t k, std::size_t l, DistCounter& counter) {
  QueryEval eval(set, q, counter);
  for (const Candidate& s : seeds) {
    if (s.id >= g.n) throw std::invalid_argument("beam_search: seed id out of range");
    eval.preload(s.id, s.dist);
  }
  const std::uint64_t before = counter.count;
  QueryResult result = beam_core(g, eval, seeds, k, l, [](NodeId id) { return id; });
  result.distance_calcs = counter.count - before;
  to_true_distances(result);
  return result;
}

namespace {

std::vector<Candidate> pipeline_seeds(const SeedIndex& seeds,
                                      std::span<const float> q, QueryEval& eval,
                                      const SearchParams& params,
                                      std::size_t query_index) {
  const std::size_t s = params.seed_count_s == 0 ? params.beam_l : params.seed_count_s;
  switch (seeds.kind) {
    case SsKind::kKD:
    case SsKind::kKM: {
      // Pool members are evaluated through the shared cache so the beam
      // never pays for any of them again.
      std::vector<NodeId> pool =
          seeds.kind == SsKind::kKD
              ? kd_pool(seeds, q)
              : km_leaf_members(seeds, q, eval.counter());
      std::vector<Candidate> ranked;
      ranked.reserve(pool.size());
      for (NodeId id : pool) ranked.push_back({id, eval.dist2(id)});
      std::sort(ranked.begin(), ranked.end(), candidate_less);
      if (ranked.size() > s) ranked.resize(s);
      return ranked;
    }
    case SsKind::kMD:
    case SsKind::kSF: {
      const NodeId id = std::get<NodeId>(seeds.payload);
      return {{id, eval.dist2(id)}};
    }
    case SsKind::kKS: {
      const auto& ks = std::get<KsSeed>(seeds.payload);
      const std::size_t draw = std::min<std::size_t>(s, ks.n);
      std::vector<Candidate> picked;
      picked.reserve(draw);
      for (NodeId id : ks_seeds(ks.n, draw, query_index, ks.seed)) {
        picked.push_back({id, eval.dist2(id)});
      }
      return picked;
    }
    case SsKind::kSN:
    case SsKind::kNone:
      break;
  }
  throw std::invalid_argument("search_index: seed index kind unusable for a flat graph");
}

QueryResult search_flat(const FlatGraph& g, const SeedIndex& seeds,
                        const VectorSet& set, std::span<const float> q,
                        const SearchParams& params, std::size_t query_index,
                        DistCounter& counter) {
  QueryEval eval(set, q, counter);
  const std::uint64_t before = counter.count;
  auto warm = pipeline_seeds(seeds, q, eval, params, query_index);
  QueryResult result =
      beam_core(g, eval, warm, params.k, params.beam_l, [](NodeId id) { return id; });
  result.distance_calcs = counter.count - before;
  to_true_distances(result);
  return result;
}

QueryResult search_layered(const LayeredGraph& lg, const VectorSet& set,
                           std::span<const float> q, const SearchParams& params,
                           DistCounter& counter) {
  QueryEval eval(set, q, counter);
  const std::uint64_t before = counter.count;

  // Greedy hierarchy descent sharing the evaluation cache with the beam.
  NodeId cur = lg.entry;
  float cur_dist = eval.dist2(cur);
  std::uint64_t hops = 0;
  for (std::size_t layer = lg.top_layer(); layer >= 1; --layer) {
    const FlatGraph& g = lg.layers[layer];
    bool moved = true;
    while (moved) {
      moved = false;
      ++hops;
      NodeId best = cur;
      float best_dist = cur_dist;
      for (NodeId v : g.neighbors(cur)) {
        const float dist = eval.dist2(v);
        if (dist < best_dist || (dist == best_dist && v < best)) {
          best = v;
          best_dist = dist;
        }
      }
      if (best_dist < cur_dist) {
        cur = best;
        cur_dist = best_dist;
        moved = true;
      }
    }
  }

  const Candidate seed{cur, cur_dist};
  QueryResult result = beam_core(lg.layers[0], eval, std::span(&seed, 1), params.k,
                                 params.beam_l, [](NodeId id) { return id; });
  result.visited += hops;
  result.distance_calcs = counter.count - before;
  to_true_distances(result);
  return result;
}

QueryResult search_partitioned(const PartitionedIndex& index, const VectorSet& set,
                               std::span<const float> q, const SearchParams& params,
                               DistCounter& counter) {
  QueryEval eval(set, q, counter);
  const std::uint64_t before = counter.count;

  // Rank partitions by centroid distance; probe the nprobe nearest.
  std::vector<std::pair<float, std::uint32_t>> ranked;
  ranked.reserve(index.partitions.size());
  for (std::size_t p = 0; p < index.partitions.size(); ++p) {
    const float dist = squared_euclidean(
        q, std::span<const float>(index.partitions[p].centroid), counter);
    ranked.emplace_back(dist, static_cast<std::uint32_t>(p));
  }
  std::sort(ranked.begin(), ranked.end());
  const std::size_t probes = std::min<std::size_t>(params.nprobe, ranked.size());

  struct ProbeOut {
    std::vector<Candidate> answers;  // global ids, squared distances
    std::uint64_t visited = 0;
    std::uint64_t calcs = 0;
  };

  auto run_probe = [&](const Partition& part, DistCounter& probe_counter,
                       QueryEval& probe_eval) {
    ProbeOut out;
    const std::uint64_t probe_before = probe_counter.count;
    const NodeId seed_local = part.seed_local;
    const NodeId seed_global = part.members[seed_local];
    const Candidate seed{seed_local, probe_eval.dist2(seed_global)};
    QueryResult r =
        beam_core(part.graph, probe_eval, std::span(&seed, 1), params.k,
                  params.beam_l, [&](NodeId local) { return part.members[local]; });
    out.visited = r.visited;
    out.calcs = probe_counter.count - probe_before;
    out.answers.reserve(r.answers.size());
    for (const Candidate& c : r.answers) {
      out.answers.push_back({part.members[c.id], c.dist});  // still squared
    }
    return out;
  };

  std::vector<ProbeOut> outs(probes);
  if (params.parallel_probe && probes > 1) {
    // Each probe owns a private counter and cache; totals merge at the end.
    std::vector<std::future<ProbeOut>> futures;
    std::vector<DistCounter> counters(probes);
    futures.reserve(probes);
    for (std::size_t i = 0; i < probes; ++i) {
      futures.push_back(std::async(std::launch::async, [&, i] {
        QueryEval probe_eval(set, q, counters[i]);
        return run_probe(index.partitions[ranked[i].second], counters[i], probe_eval);
      }));
    }
    for (std::size_t i = 0; i < probes; ++i) outs[i] = futures[i].get();
    for (std::size_t i = 0; i < probes; ++i) counter.add(counters[i].count);
  } else {
    for (std::size_t i = 0; i < probes; ++i) {
      outs[i] = run_probe(index.partitions[ranked[i].second], counter, eval);
    }
  }

  std::vector<Candidate> merged;
  QueryResult result;
  for (const ProbeOut& out : outs) {
    merged.insert(merged.end(), out.answers.begin(), out.answers.end());
    result.visited += out.visited;
  }
  std::sort(merged.begin(), merged.end(), candidate_less);
  const std::size_t take = std::min<std::size_t>(params.k, merged.size());
  result.answers.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    result.answers.push_back({merged[i].id, to_true_dist(merged[i].dist)});
  }
  result.distance_calcs = counter.count - before;
  return result;
}

}  // namespace

QueryResult search_index(const AnyIndex& index, const SeedIndex& seeds,
                         const VectorSet& set, std::span<const float> q,
                         const SearchParams& params, std::size_t query_index) {
  params.validate();
  if (q.size() != set.d) {
    throw std::invalid_argument("search_index: query dimension mismatch");
  }
  DistCounter counter;
  if (const auto* flat = std::get_if<FlatGraph>(&index)) {
    if (flat->n != set.n) throw std::invalid_argument("search_index: index/set mismatch");
    return search_flat(*flat, seeds, set, q, params, query_index, counter);
  }
  if (const auto* layered = std::get_if<LayeredGraph>(&index)) {
    if (layered->n() != set.n) {
      throw std::invalid_argument("search_index: index/set mismatch");
    }
    return search_layered(*layered, set, q, params, counter);
  }
  const auto& part = std::get<PartitionedIndex>(index);
  if (part.n != set.n) throw std::invalid_argument("search_index: index/set mismatch");
  return search_partitioned(part, set, q, params, counter);
}

double recall(const QueryResult& result, std::span<const NodeId> truth_ids,
              std::size_t k) {
  if (truth_ids.size() < k) {
    throw std::invalid_argument("recall: ground truth has fewer than k entries");
  }
  std::unordered_set<NodeId> truth(truth_ids.begin(), truth_ids.begin() + static_cast<std::ptrdiff_t>(k));
  std::size_t hits = 0;
  for (const Candidate& c : result.answers) {
    if (truth.count(c.id)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

}  // namespace gann
