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

#include "gann/build.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "gann/detail/frontier.hpp"
#include "gann/rng.hpp"

namespace gann {

void BuildParams::validate() const {
  if (cap_R == 0) throw std::invalid_argument("BuildParams: cap_R must be >= 1");
  if (beam_L_build < cap_R) {
    throw std::invalid_argument("BuildParams: beam width must be >= cap_R");
  }
  if (alpha < 1.0f) throw std::invalid_argument("BuildParams: alpha must be >= 1");
  if (!(theta_deg > 0.0f && theta_deg < 180.0f)) {
    throw std::invalid_argument("BuildParams: theta must be in (0, 180) degrees");
  }
  if (ss == SsKind::kSN && M <= 2) {
    throw std::invalid_argument("BuildParams: SN requires M > 2");
  }
  if (leaf_size < 2) throw std::invalid_argument("BuildParams: leaf_size must be >= 2");
}

std::uint32_t BuildParams::workers() const {
  return deterministic ? 1 : std::max<std::uint32_t>(1, threads);
}

BuildReport& BuildReport::operator+=(const BuildReport& o) {
  search_calcs += o.search_calcs;
  prune_calcs += o.prune_calcs;
  repair_calcs += o.repair_calcs;
  wall_time_s += o.wall_time_s;
  finalize();
  return *this;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// Concurrent capped adjacency for insertion builds. Each node owns two
// fixed-size buffers; writers (holding that node's lock) fill the inactive
// buffer and swap it in with one release-store, so lock-free readers always
// see some complete list. Readers racing a writer may observe a stale list;
// that only affects candidate quality during construction.
class BuildAdjacency {
 public:
  BuildAdjacency(std::size_t n, std::uint32_t cap)
      : n_(n), cap_(cap),
        slots_(std::make_unique<std::atomic<NodeId>[]>(n * 2 * cap)),
        state_(std::make_unique<std::atomic<std::uint32_t>[]>(n)),
        locks_(std::make_unique<std::mutex[]>(n)) {
    for (std::size_t i = 0; i < n; ++i) state_[i].store(0, std::memory_order_relaxed);
  }

  std::uint32_t cap() const { return cap_; }
  std::mutex& lock(NodeId u) { return locks_[u]; }

  // Lock-free snapshot into `out` (capacity >= cap). Returns the degree.
  std::size_t snapshot(NodeId u, NodeId* out) const {
    const std::uint32_t s = state_[u].load(std::memory_order_acquire);
    const std::uint32_t deg = s >> 1;
    const std::atomic<NodeId>* base = buffer(u, s & 1);
    for (std::uint32_t i = 0; i < deg; ++i) {
      out[i] = base[i].load(std::memory_order_relaxed);
    }
    return deg;
  }

  // Exact read; caller must hold the node's lock.
  std::vector<NodeId> read_locked(NodeId u) const {
    const std::uint32_t s = state_[u].load(std::memory_order_relaxed);
    const std::uint32_t deg = s >> 1;
    const std::atomic<NodeId>* base = buffer(u, s & 1);
    std::vector<NodeId> list(deg);
    for (std::uint32_t i = 0; i < deg; ++i) {
      list[i] = base[i].load(std::memory_order_relaxed);
    }
    return list;
  }

  // Whole-list replacement; caller must hold the node's lock.
  void store_locked(NodeId u, std::span<const NodeId> list) {
    const std::uint32_t s = state_[u].load(std::memory_order_relaxed);
    const std::uint32_t next_buf = (s & 1) ^ 1u;
    std::atomic<NodeId>* base = buffer(u, next_buf);
    for (std::size_t i = 0; i < list.size(); ++i) {
      base[i].store(list[i], std::memory_order_relaxed);
    }
    state_[u].store((static_cast<std::uint32_t>(list.size()) << 1) | next_buf,
                    std::memory_order_release);
  }

  FlatGraph to_graph(std::size_t d) const {
    FlatGraph g(n_, cap_);
    g.d = d;
    std::vector<NodeId> buf(cap_);
    for (std::size_t u = 0; u < n_; ++u) {
      const std::size_t deg = snapshot(static_cast<NodeId>(u), buf.data());
      g.adjacency[u].assign(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(deg));
    }
    return g;
  }

 private:
  std::atomic<NodeId>* buffer(NodeId u, std::uint32_t which) {
    return slots_.get() + (static_cast<std::size_t>(u) * 2 + which) * cap_;
  }
  const std::atomic<NodeId>* buffer(NodeId u, std::uint32_t which) const {
    return slots_.get() + (static_cast<std::size_t>(u) * 2 + which) * cap_;
  }

  std::size_t n_;
  std::uint32_t cap_;
  std::unique_ptr<std::atomic<NodeId>[]> slots_;
  std::unique_ptr<std::atomic<std::uint32_t>[]> state_;
  std::unique_ptr<std::mutex[]> locks_;
};

// Per-worker distance cache: one evaluation per node per insertion.
class EvalScratch {
 public:
  explicit EvalScratch(const VectorSet& set)
      : set_(set), stamp_(set.n, 0), cache_(set.n, 0.0f) {}

  void begin(std::span<const float> query) {
    query_ = query;
    ++epoch_;
  }

  bool evaluated(NodeId id) const { return stamp_[id] == epoch_; }

  float dist2(NodeId id, DistCounter& counter) {
    if (stamp_[id] == epoch_) return cache_[id];
    const float dist = squared_euclidean(query_, set_.row(id), counter);
    stamp_[id] = epoch_;
    cache_[id] = dist;
    return dist;
  }

  void preload(NodeId id, float dist) {
    stamp_[id] = epoch_;
    cache_[id] = dist;
  }

 private:
  const VectorSet& set_;
  std::span<const float> query_;
  std::vector<std::uint32_t> stamp_;
  std::vector<float> cache_;
  std::uint32_t epoch_ = 0;
};

// Beam search over the partial adjacency. Returns the candidate pool for
// pruning: the final beam contents plus every expanded node, annotated.
std::vector<Candidate> build_beam(const BuildAdjacency& adj, EvalScratch& eval,
                                  std::span<const Candidate> seeds, std::size_t l,
                                  DistCounter& counter) {
  detail::Frontier frontier(l);
  for (const Candidate& s : seeds) frontier.insert(s);
  std::vector<Candidate> visited;
  std::vector<NodeId> nb(adj.cap());
  while (true) {
    const std::size_t at = frontier.pop_nearest_unexpanded();
    if (at == detail::Frontier::npos) break;
    const Candidate cur = frontier.at(at);
    visited.push_back(cur);
    const std::size_t deg = adj.snapshot(cur.id, nb.data());
    for (std::size_t i = 0; i < deg; ++i) {
      const NodeId v = nb[i];
      if (eval.evaluated(v)) continue;
      frontier.insert({v, eval.dist2(v, counter)});
    }
  }
  for (std::size_t i = 0; i < frontier.size(); ++i) visited.push_back(frontier.at(i));
  return visited;  // CandidateList::from_pool dedups expanded duplicates
}

// Seed-selection state shared by all insertions of one build.
struct BuildSeeder {
  const VectorSet& set;
  const BuildParams& p;
  const std::vector<NodeId>& order;        // insertion order
  const std::vector<std::uint32_t>& rank;  // node -> position in `order`
  SeedIndex structure;                     // KD/KM/MD/SF payload when used

  // Seeds for inserting the node at position `pos` (pos >= 1). All seed
  // distance evaluations flow through `eval`/`counter`.
  std::vector<Candidate> seeds_for(NodeId node, std::size_t pos, EvalScratch& eval,
                                   DistCounter& counter) const {
    const NodeId fallback = order[0];
    switch (p.ss) {
      case SsKind::kKS: {
        const std::size_t want = p.build_seed_count == 0
                                     ? p.beam_L_build
                                     : p.build_seed_count;
        const std::size_t s = std::min<std::size_t>(want, pos);
        std::vector<Candidate> out;
        out.reserve(s);
        std::unordered_set<NodeId> seen;
        const std::uint64_t stream = rng::substream(rng::kKsBuild, node);
        std::uint64_t counter_idx = 0;
        while (out.size() < s) {
          const auto j = static_cast<std::size_t>(
              rng::uniform_below(p.seed, stream, counter_idx++, pos));
          const NodeId id = order[j];
          if (!seen.insert(id).second) continue;
          out.push_back({id, eval.dist2(id, counter)});
        }
        return out;
      }
      case SsKind::kSF:
      case SsKind::kMD: {
        NodeId id = std::get<NodeId>(structure.payload);
        if (rank[id] >= pos) id = fallback;  // not inserted yet
        return {{id, eval.dist2(id, counter)}};
      }
      case SsKind::kKD:
      case SsKind::kKM: {
        const std::size_t want = p.build_seed_count == 0
                                     ? p.beam_L_build
                                     : p.build_seed_count;
        std::vector<NodeId> pool =
            p.ss == SsKind::kKD
                ? kd_pool(structure, set.row(node))
                : km_leaf_members(structure, set.row(node), counter);
        std::vector<Candidate> ranked;
        ranked.reserve(pool.size());
        for (NodeId id : pool) ranked.push_back({id, eval.dist2(id, counter)});
        std::sort(ranked.begin(), ranked.end(), candidate_less);
        std::vector<Candidate> out;
        for (const Candidate& c : ranked) {
          if (out.size() == want) break;
          if (rank[c.id] < pos) out.push_back(c);  // only inserted nodes seed
        }
        if (out.empty()) out.push_back({fallback, eval.dist2(fallback, counter)});
        return out;
      }
      case SsKind::kSN:
      case SsKind::kNone:
        break;
    }
    throw std::logic_error("BuildSeeder: unhandled strategy");
  }
};

// Adds the reverse edge u -> v, re-pruning u's full annotated list with the
// ND strategy when it overflows. Caller does not hold u's lock.
void add_reverse_edge(BuildAdjacency& adj, const VectorSet& set, NodeId u,
                      Candidate v, const NdSpec& nd, std::uint32_t cap_R,
                      DistCounter& prune_counter) {
  std::lock_guard<std::mutex> guard(adj.lock(u));
  std::vector<NodeId> list = adj.read_locked(u);
  for (NodeId w : list) {
    if (w == v.id) return;
  }
  if (list.size() < cap_R) {
    list.push_back(v.id);
    adj.store_locked(u, list);
    return;
  }
  std::vector<Candidate> pool;
  pool.reserve(list.size() + 1);
  for (NodeId w : list) {
    pool.push_back({w, squared_euclidean(set.row(u), set.row(w), prune_counter)});
  }
  pool.push_back(v);  // dist(u, new node) is already known to the caller
  CandidateList cand = CandidateList::from_pool(u, std::move(pool));
  std::vector<NodeId> kept = prune(set, cand, cap_R, nd, prune_counter);
  adj.store_locked(u, kept);
}

// Kept ids appear in the candidate list's scan order; re-annotate them.
std::vector<Candidate> annotate_kept(const CandidateList& cand,
                                     std::span<const NodeId> kept) {
  std::vector<Candidate> out;
  out.reserve(kept.size());
  std::size_t ki = 0;
  for (const Candidate& e : cand.entries) {
    if (ki == kept.size()) break;
    if (e.id == kept[ki]) {
      out.push_back(e);
      ++ki;
    }
  }
  return out;
}

std::vector<NodeId> insertion_order(std::size_t n, const BuildParams& p) {
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0u);
  if (p.shuffle_insertion) {
    for (std::size_t i = n; i > 1; --i) {
      const auto j = static_cast<std::size_t>(
          rng::uniform_below(p.seed, rng::kShuffle, i, i));
      std::swap(order[i - 1], order[j]);
    }
  }
  return order;
}

// ---------------------------------------------------------------------------
// Flat incremental-insertion build (all strategies except SN).

IiBuild build_ii_flat(const VectorSet& set, const BuildParams& p) {
  const auto t0 = Clock::now();
  const std::size_t n = set.n;
  const NdSpec nd = p.nd_spec();
  BuildReport report;

  const std::vector<NodeId> order = insertion_order(n, p);
  std::vector<std::uint32_t> rank(n);
  for (std::size_t pos = 0; pos < n; ++pos) rank[order[pos]] = static_cast<std::uint32_t>(pos);

  BuildSeeder seeder{set, p, order, rank, {}};
  if (p.ss == SsKind::kMD) {
    DistCounter c;
    seeder.structure = medoid_seed(set, c);
    report.search_calcs += c.count;
  } else if (p.ss == SsKind::kSF) {
    seeder.structure = sf_seed(set, p.seed);
  } else if (p.ss == SsKind::kKD) {
    seeder.structure = kd_build(set, p.seed_params.kd_num_trees,
                                p.seed_params.sample_fraction, p.seed);
  } else if (p.ss == SsKind::kKM) {
    DistCounter c;
    seeder.structure = km_build(set, p.seed_params.km_branching,
                                p.seed_params.km_leaf_cap,
                                p.seed_params.sample_fraction, p.seed, c);
    report.search_calcs += c.count;
  }

  BuildAdjacency adj(n, p.cap_R);
  const std::uint32_t workers = p.workers();
  std::atomic<std::size_t> next_pos{0};
  std::vector<BuildReport> worker_reports(workers);

  auto worker_fn = [&](std::uint32_t w) {
    EvalScratch eval(set);
    DistCounter search_c, prune_c;
    while (true) {
      const std::size_t pos = next_pos.fetch_add(1, std::memory_order_relaxed);
      if (pos >= n) break;
      const NodeId v = order[pos];
      if (pos == 0) continue;  // first node: empty adjacency, initial entry

      eval.begin(set.row(v));
      auto seeds = seeder.seeds_for(v, pos, eval, search_c);
      auto pool = build_beam(adj, eval, seeds, p.beam_L_build, search_c);
      CandidateList cand = CandidateList::from_pool(v, std::move(pool));
      std::vector<NodeId> kept = prune(set, cand, p.cap_R, nd, prune_c);
      {
        std::lock_guard<std::mutex> guard(adj.lock(v));
        adj.store_locked(v, kept);
      }
      for (const Candidate& u : annotate_kept(cand, kept)) {
        add_reverse_edge(adj, set, u.id, {v, u.dist}, nd, p.cap_R, prune_c);
      }
    }
    worker_reports[w].search_calcs = search_c.count;
    worker_reports[w].prune_calcs = prune_c.count;
  };

  if (workers == 1) {
    worker_fn(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint32_t w = 0; w < workers; ++w) pool.emplace_back(worker_fn, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& r : worker_reports) {
    report.search_calcs += r.search_calcs;
    report.prune_calcs += r.prune_calcs;
  }

  FlatGraph g = adj.to_graph(set.d);
  g.validate("build_ii");
  report.wall_time_s = seconds_since(t0);
  report.finalize();

  SeedIndex seeds = std::move(seeder.structure);
  if (p.ss == SsKind::kKS) {
    seeds.kind = SsKind::kKS;
    seeds.payload = KsSeed{n, p.seed};
  }
  return {AnyIndex{std::move(g)}, std::move(seeds), report};
}

// ---------------------------------------------------------------------------
// Layered (stacked-NSW) incremental-insertion build.

IiBuild build_ii_layered(const VectorSet& set, const BuildParams& p) {
  const auto t0 = Clock::now();
  const std::size_t n = set.n;
  const NdSpec nd = p.nd_spec();
  BuildReport report;

  const std::vector<NodeId> order = insertion_order(n, p);

  // Layer levels are a pure function of (seed, node id), so the hierarchy
  // shape is known before any insertion.
  std::vector<std::uint32_t> levels(n);
  std::uint32_t max_level = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const double xi = rng::uniform01_open(p.seed, rng::kLayerAssign, v);
    levels[v] = assign_layer(xi, p.M);
    max_level = std::max(max_level, levels[v]);
  }

  std::vector<std::unique_ptr<BuildAdjacency>> layers;
  for (std::uint32_t l = 0; l <= max_level; ++l) {
    layers.push_back(std::make_unique<BuildAdjacency>(n, p.cap_R));
  }

  std::mutex entry_mutex;
  NodeId entry = order[0];
  std::uint32_t top = levels[order[0]];

  const std::uint32_t workers = p.workers();
  std::atomic<std::size_t> next_pos{0};
  std::vector<BuildReport> worker_reports(workers);

  auto worker_fn = [&](std::uint32_t w) {
    EvalScratch eval(set);
    DistCounter search_c, prune_c;
    std::vector<NodeId> nb(p.cap_R);
    while (true) {
      const std::size_t pos = next_pos.fetch_add(1, std::memory_order_relaxed);
      if (pos >= n) break;
      const NodeId v = order[pos];
      if (pos == 0) continue;  // first node defines the initial entry
      const std::uint32_t level = levels[v];

      NodeId cur_entry;
      std::uint32_t cur_top;
      {
        std::lock_guard<std::mutex> guard(entry_mutex);
        cur_entry = entry;
        cur_top = top;
      }

      eval.begin(set.row(v));
      NodeId cur = cur_entry;
      float cur_dist = eval.dist2(cur, search_c);

      // Greedy descent through layers above the node's level.
      for (std::uint32_t layer = cur_top; layer > std::min(level, cur_top);
           --layer) {
        bool moved = true;
        while (moved) {
          moved = false;
          const std::size_t deg = layers[layer]->snapshot(cur, nb.data());
          NodeId best = cur;
          float best_dist = cur_dist;
          for (std::size_t i = 0; i < deg; ++i) {
            const float dist = eval.dist2(nb[i], search_c);
            if (dist < best_dist || (dist == best_dist && nb[i] < best)) {
              best = nb[i];
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

      // Beam-wire every layer the node belongs to, top-down.
      Candidate layer_seed{cur, cur_dist};
      for (std::int64_t layer = std::min(level, cur_top); layer >= 0; --layer) {
        BuildAdjacency& adj = *layers[static_cast<std::size_t>(layer)];
        auto pool = build_beam(adj, eval, std::span(&layer_seed, 1),
                               p.beam_L_build, search_c);
        CandidateList cand = CandidateList::from_pool(v, std::move(pool));
        if (!cand.entries.empty()) layer_seed = cand.entries[0];
        std::vector<NodeId> kept = prune(set, cand, p.cap_R, nd, prune_c);
        {
          std::lock_guard<std::mutex> guard(adj.lock(v));
          adj.store_locked(v, kept);
        }
        for (const Candidate& u : annotate_kept(cand, kept)) {
          add_reverse_edge(adj, set, u.id, {v, u.dist}, nd, p.cap_R, prune_c);
        }
      }

      if (level > cur_top) {
        std::lock_guard<std::mutex> guard(entry_mutex);
        if (level > top) {
          top = level;
          entry = v;
        }
      }
    }
    worker_reports[w].search_calcs = search_c.count;
    worker_reports[w].prune_calcs = prune_c.count;
  };

  if (workers == 1) {
    worker_fn(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint32_t w = 0; w < workers; ++w) pool.emplace_back(worker_fn, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& r : worker_reports) {
    report.search_calcs += r.search_calcs;
    report.prune_calcs += r.prune_calcs;
  }

  LayeredGraph lg;
  lg.membership.assign(levels.begin(), levels.end());
  // Only layers up to the realized top are kept ({top} is entry's layer).
  lg.layers.reserve(top + 1);
  for (std::uint32_t l = 0; l <= top; ++l) {
    lg.layers.push_back(layers[l]->to_graph(set.d));
  }
  lg.entry = entry;
  lg.validate();
  report.wall_time_s = seconds_since(t0);
  report.finalize();
  SeedIndex seeds;
  seeds.kind = SsKind::kSN;
  return {AnyIndex{std::move(lg)}, std::move(seeds), report};
}

}  // namespace

IiBuild build_ii(const VectorSet& set, const BuildParams& p) {
  p.validate();
  if (set.n == 0) throw std::invalid_argument("build_ii: empty set");
  if (p.ss == SsKind::kSN) return build_ii_layered(set, p);
  if (p.ss == SsKind::kNone) {
    throw std::invalid_argument("build_ii: a seed strategy is required");
  }
  return build_ii_flat(set, p);
}

// ---------------------------------------------------------------------------
// NN-Descent

std::pair<FlatGraph, BuildReport> nndescent(const VectorSet& set, std::size_t k,
                                            std::size_t max_iters, double delta,
                                            std::uint64_t seed,
                                            std::vector<std::uint64_t>* accepted_per_iter) {
  if (k == 0 || k >= set.n) {
    throw std::invalid_argument("nndescent: need 1 <= k < n");
  }
  if (max_iters == 0) throw std::invalid_argument("nndescent: max_iters >= 1");
  if (delta < 0.0 || delta >= 1.0) {
    throw std::invalid_argument("nndescent: delta in [0, 1)");
  }
  const auto t0 = Clock::now();
  const std::size_t n = set.n;
  BuildReport report;
  DistCounter counter;

  // Random k-regular out-neighborhoods, annotated.
  std::vector<std::vector<Candidate>> lists(n);
  for (std::size_t u = 0; u < n; ++u) {
    std::unordered_set<NodeId> seen;
    seen.insert(static_cast<NodeId>(u));
    const std::uint64_t stream = rng::substream(rng::kNnDescentInit, u);
    std::uint64_t draw = 0;
    while (lists[u].size() < k) {
      const auto id = static_cast<NodeId>(
          rng::uniform_below(seed, stream, draw++, n));
      if (!seen.insert(id).second) continue;
      lists[u].push_back(
          {id, squared_euclidean(set.row(u), set.row(id), counter)});
    }
    std::sort(lists[u].begin(), lists[u].end(), candidate_less);
  }

  // Insert `cand` if it beats the current worst; lists stay sorted, size k.
  auto try_insert = [&](NodeId owner, Candidate cand) -> bool {
    auto& list = lists[owner];
    if (cand.id == owner) return false;
    if (!candidate_less(cand, list.back())) return false;
    for (const Candidate& c : list) {
      if (c.id == cand.id) return false;
    }
    auto it = std::lower_bound(list.begin(), list.end(), cand, candidate_less);
    list.insert(it, cand);
    list.pop_back();
    return true;
  };

  const auto threshold = static_cast<std::uint64_t>(
      delta * static_cast<double>(n) * static_cast<double>(k));
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    std::uint64_t accepted = 0;
    std::unordered_set<std::uint64_t> proposed;
    // Symmetric-neighbor join: each node's pair pool is its out-neighbors
    // plus its reverse neighbors, snapshotted at iteration entry.
    std::vector<std::vector<NodeId>> pools(n);
    for (std::size_t u = 0; u < n; ++u) {
      for (const Candidate& c : lists[u]) {
        pools[u].push_back(c.id);
        pools[c.id].push_back(static_cast<NodeId>(u));
      }
    }
    for (std::size_t u = 0; u < n; ++u) {
      auto& pool = pools[u];
      std::sort(pool.begin(), pool.end());
      pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
      for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
          const NodeId x = pool[i], y = pool[j];  // ascending, distinct
          const std::uint64_t key = (static_cast<std::uint64_t>(x) << 32) | y;
          if (!proposed.insert(key).second) continue;
          const float dist = squared_euclidean(set.row(x), set.row(y), counter);
          if (try_insert(x, {y, dist})) ++accepted;
          if (try_insert(y, {x, dist})) ++accepted;
        }
      }
    }
    if (accepted_per_iter != nullptr) accepted_per_iter->push_back(accepted);
    if (accepted < std::max<std::uint64_t>(threshold, 1)) break;
  }

  FlatGraph g(n, static_cast<std::uint32_t>(k));
  g.d = set.d;
  for (std::size_t u = 0; u < n; ++u) {
    auto& adj = g.adjacency[u];
    adj.reserve(k);
    for (const Candidate& c : lists[u]) adj.push_back(c.id);
  }
  g.validate("nndescent");
  report.search_calcs = counter.count;
  report.wall_time_s = seconds_since(t0);
  report.finalize();
  return {std::move(g), report};
}

// ---------------------------------------------------------------------------
// ND refinement of an existing graph

RefineResult refine_with_nd(const FlatGraph& g, const VectorSet& set,
                            const NdSpec& nd, const BuildParams& p) {
  nd.validate();
  if (g.n != set.n) throw std::invalid_argument("refine_with_nd: set/graph mismatch");
  const auto t0 = Clock::now();
  RefineResult result;
  result.graph = FlatGraph(g.n, p.cap_R);
  result.graph.d = set.d;
  DistCounter counter;

  const std::size_t edges_before = g.edge_count();
  for (std::size_t u = 0; u < g.n; ++u) {
    std::vector<Candidate> pool;
    pool.reserve(g.degree(static_cast<NodeId>(u)));
    for (NodeId v : g.neighbors(static_cast<NodeId>(u))) {
      pool.push_back({v, squared_euclidean(set.row(u), set.row(v), counter)});
    }
    CandidateList cand =
        CandidateList::from_pool(static_cast<NodeId>(u), std::move(pool));
    result.graph.adjacency[u] = prune(set, cand, p.cap_R, nd, counter);
  }
  const std::size_t edges_after = result.graph.edge_count();
  result.pruning_ratio =
      edges_before == 0
          ? 0.0
          : 1.0 - static_cast<double>(edges_after) / static_cast<double>(edges_before);
  result.graph.validate("refine_with_nd");
  result.report.prune_calcs = counter.count;
  result.report.wall_time_s = seconds_since(t0);
  result.report.finalize();
  return result;
}

// ---------------------------------------------------------------------------
// Balanced partitioning and divide-and-conquer builds

namespace {

void split_recursive(const VectorSet& set, std::vector<NodeId> ids,
                     std::size_t leaf_size, std::uint64_t seed,
                     std::uint64_t stream, DistCounter& counter,
                     std::vector<PartitionSpec>& out) {
  if (ids.size() <= leaf_size) {
    std::sort(ids.begin(), ids.end());
    PartitionSpec spec;
    std::vector<double> acc(set.d, 0.0);
    for (NodeId id : ids) {
      auto row = set.row(id);
      for (std::size_t j = 0; j < set.d; ++j) acc[j] += row[j];
    }
    spec.centroid.resize(set.d);
    for (std::size_t j = 0; j < set.d; ++j) {
      spec.centroid[j] =
          static_cast<float>(acc[j] / static_cast<double>(ids.size()));
    }
    spec.members = std::move(ids);
    out.push_back(std::move(spec));
    return;
  }

  const std::size_t m = ids.size();
  // Two distinct random members initialize the 2-means.
  std::size_t i0 = static_cast<std::size_t>(
      rng::uniform_below(seed, stream, 0, m));
  std::size_t i1 = i0;
  for (std::uint64_t c = 1; i1 == i0; ++c) {
    i1 = static_cast<std::size_t>(rng::uniform_below(seed, stream, c, m));
  }
  std::vector<float> c0(set.row(ids[i0]).begin(), set.row(ids[i0]).end());
  std::vector<float> c1(set.row(ids[i1]).begin(), set.row(ids[i1]).end());

  const std::size_t half = m / 2;
  constexpr int kIters = 5;
  for (int iter = 0; iter < kIters; ++iter) {
    // Balanced assignment: order by margin, first half to c0, rest to c1.
    std::sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
      const float ma = squared_euclidean(set.row(a), std::span<const float>(c0), counter) -
                       squared_euclidean(set.row(a), std::span<const float>(c1), counter);
      const float mb = squared_euclidean(set.row(b), std::span<const float>(c0), counter) -
                       squared_euclidean(set.row(b), std::span<const float>(c1), counter);
      if (ma != mb) return ma < mb;
      return a < b;
    });
    std::vector<double> acc0(set.d, 0.0), acc1(set.d, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      auto row = set.row(ids[i]);
      auto& acc = i < half ? acc0 : acc1;
      for (std::size_t j = 0; j < set.d; ++j) acc[j] += row[j];
    }
    for (std::size_t j = 0; j < set.d; ++j) {
      c0[j] = static_cast<float>(acc0[j] / static_cast<double>(half));
      c1[j] = static_cast<float>(acc1[j] / static_cast<double>(m - half));
    }
  }

  std::vector<NodeId> left(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(half));
  std::vector<NodeId> right(ids.begin() + static_cast<std::ptrdiff_t>(half), ids.end());
  split_recursive(set, std::move(left), leaf_size, seed,
                  rng::substream(stream, 1), counter, out);
  split_recursive(set, std::move(right), leaf_size, seed,
                  rng::substream(stream, 2), counter, out);
}

}  // namespace

std::vector<PartitionSpec> balanced_partition(const VectorSet& set,
                                              std::size_t leaf_size,
                                              std::uint64_t seed,
                                              DistCounter& counter) {
  if (leaf_size < 2) throw std::invalid_argument("balanced_partition: leaf_size >= 2");
  std::vector<NodeId> all(set.n);
  std::iota(all.begin(), all.end(), 0u);
  std::vector<PartitionSpec> out;
  split_recursive(set, std::move(all), leaf_size, seed, rng::kPartitionInit,
                  counter, out);
  return out;
}

std::pair<AnyIndex, BuildReport> build_dc(const VectorSet& set,
                                          const BuildParams& p, DcMode mode) {
  p.validate();
  const auto t0 = Clock::now();
  BuildReport report;
  DistCounter partition_counter;
  auto parts = balanced_partition(set, p.leaf_size, p.seed, partition_counter);
  report.search_calcs += partition_counter.count;

  std::vector<Partition> built(parts.size());
  for (std::size_t pi = 0; pi < parts.size(); ++pi) {
    const auto& spec = parts[pi];
    VectorSet sub(spec.members.size(), set.d);
    for (std::size_t i = 0; i < spec.members.size(); ++i) {
      auto row = set.row(spec.members[i]);
      std::copy(row.begin(), row.end(), sub.mutable_row(i).begin());
    }
    IiBuild sub_build = build_ii(sub, p);
    AnyIndex& sub_index = sub_build.index;
    report.search_calcs += sub_build.report.search_calcs;
    report.prune_calcs += sub_build.report.prune_calcs;
    report.repair_calcs += sub_build.report.repair_calcs;

    Partition part;
    if (auto* flat = std::get_if<FlatGraph>(&sub_index)) {
      part.graph = std::move(*flat);
    } else {
      // An SN sub-build yields a hierarchy; the partition keeps its base.
      part.graph = std::move(std::get<LayeredGraph>(sub_index).layers[0]);
    }
    part.members = spec.members;
    part.centroid = spec.centroid;
    built[pi] = std::move(part);
  }

  if (mode == DcMode::kSeparate) {
    PartitionedIndex index;
    index.n = set.n;
    index.d = set.d;
    index.cap_R = p.cap_R;
    index.mode = DcMode::kSeparate;
    index.partitions = std::move(built);
    DistCounter seed_counter;
    refresh_partition_seeds(index, set, seed_counter);
    report.search_calcs += seed_counter.count;
    index.validate();
    report.wall_time_s = seconds_since(t0);
    report.finalize();
    return {AnyIndex{std::move(index)}, report};
  }

  // Merged mode: union the per-partition edges over global ids, then repair
  // connectivity from the approximate medoid.
  FlatGraph merged(set.n, p.cap_R);
  merged.d = set.d;
  for (const Partition& part : built) {
    for (std::size_t local = 0; local < part.members.size(); ++local) {
      const NodeId global = part.members[local];
      auto& adj = merged.adjacency[global];
      for (NodeId nb_local : part.graph.neighbors(static_cast<NodeId>(local))) {
        adj.push_back(part.members[nb_local]);
      }
    }
  }
  DistCounter repair_counter;
  SeedIndex medoid = medoid_seed(set, repair_counter);
  merged = ensure_connected(std::move(merged), std::get<NodeId>(medoid.payload),
                            set, p.nd_spec(), repair_counter);
  report.repair_calcs += repair_counter.count;
  merged.validate("build_dc merged");
  report.wall_time_s = seconds_since(t0);
  report.finalize();
  return {AnyIndex{std::move(merged)}, report};
}

}  // namespace gann
