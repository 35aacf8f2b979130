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

#include <algorithm>
#include <stdexcept>

#include "gann/graph.hpp"

namespace gann {

namespace {

// Iterative DFS marking everything reachable from `start` over directed edges.
void mark_reachable(const FlatGraph& g, NodeId start, std::vector<bool>& reachable,
                    std::vector<NodeId>& order) {
  std::vector<NodeId> stack;
  if (!reachable[start]) {
    reachable[start] = true;
    order.push_back(start);
    stack.push_back(start);
  }
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : g.neighbors(u)) {
      if (!reachable[v]) {
        reachable[v] = true;
        order.push_back(v);
        stack.push_back(v);
      }
    }
  }
}

// One repair pass: attach every currently-unreachable node to its nearest
// reachable node, re-pruning full lists with the ND strategy. In spare_first
// mode the nearest reachable node with room is preferred, so progress is
// monotone whenever any spare capacity exists; that mode breaks the rare
// replace/orphan cycles degenerate caps can produce.
std::size_t repair_pass(FlatGraph& g, NodeId entry, const VectorSet& set,
                        const NdSpec& nd, bool spare_first, DistCounter& counter) {
  std::vector<bool> reachable(g.n, false);
  std::vector<NodeId> reachable_list;
  reachable_list.reserve(g.n);
  mark_reachable(g, entry, reachable, reachable_list);

  std::size_t repairs = 0;
  for (std::size_t u = 0; u < g.n; ++u) {
    if (reachable[u]) continue;
    const NodeId uu = static_cast<NodeId>(u);
    ++repairs;

    // Nearest currently-reachable node, brute force over the reachable set.
    NodeId best = kInvalidNode;
    float best_dist = 0.0f;
    NodeId best_spare = kInvalidNode;
    float best_spare_dist = 0.0f;
    for (NodeId v : reachable_list) {
      const float dist = squared_euclidean(set.row(v), set.row(uu), counter);
      if (best == kInvalidNode || dist < best_dist ||
          (dist == best_dist && v < best)) {
        best = v;
        best_dist = dist;
      }
      if (g.degree(v) < g.cap_R &&
          (best_spare == kInvalidNode || dist < best_spare_dist ||
           (dist == best_spare_dist && v < best_spare))) {
        best_spare = v;
        best_spare_dist = dist;
      }
    }
    if (spare_first && best_spare != kInvalidNode) {
      best = best_spare;
      best_dist = best_spare_dist;
    }

    if (!g.add_neighbor(best, uu)) {
      // v is at cap: re-prune its annotated list with u inserted. The repair
      // edge is force-kept, otherwise u could stay unreachable.
      std::vector<Candidate> pool;
      pool.reserve(g.degree(best) + 1);
      for (NodeId w : g.neighbors(best)) {
        pool.push_back({w, squared_euclidean(set.row(best), set.row(w), counter)});
      }
      pool.push_back({uu, best_dist});
      CandidateList cand = CandidateList::from_pool(best, std::move(pool));
      std::vector<NodeId> kept = prune(set, cand, g.cap_R, nd, counter);
      if (std::find(kept.begin(), kept.end(), uu) == kept.end()) {
        if (kept.size() >= g.cap_R) kept.pop_back();
        kept.push_back(uu);
      }
      g.set_neighbors(best, std::move(kept));
    }
    if (g.degree(uu) < g.cap_R) g.add_neighbor(uu, best);

    // u (and anything it already pointed to) is now reachable.
    mark_reachable(g, uu, reachable, reachable_list);
  }
  return repairs;
}

bool fully_reachable(const FlatGraph& g, NodeId entry) {
  std::vector<bool> reachable(g.n, false);
  std::vector<NodeId> order;
  order.reserve(g.n);
  mark_reachable(g, entry, reachable, order);
  return order.size() == g.n;
}

// Last-resort pass for degenerate caps: string the unreachable nodes into a
// chain among themselves (rewiring out-edges of unreachable nodes can never
// cut off anything reachable) and graft the chain head onto the reachable
// side with a single edge.
std::size_t chain_pass(FlatGraph& g, NodeId entry, const VectorSet& set,
                       DistCounter& counter) {
  std::vector<bool> reachable(g.n, false);
  std::vector<NodeId> reachable_list;
  reachable_list.reserve(g.n);
  mark_reachable(g, entry, reachable, reachable_list);
  std::vector<NodeId> lost;
  for (std::size_t u = 0; u < g.n; ++u) {
    if (!reachable[u]) lost.push_back(static_cast<NodeId>(u));
  }
  if (lost.empty()) return 0;

  for (std::size_t i = 0; i + 1 < lost.size(); ++i) {
    if (!g.add_neighbor(lost[i], lost[i + 1])) {
      std::vector<NodeId> list(g.neighbors(lost[i]).begin(),
                               g.neighbors(lost[i]).end());
      if (std::find(list.begin(), list.end(), lost[i + 1]) == list.end()) {
        list.back() = lost[i + 1];
        g.set_neighbors(lost[i], std::move(list));
      }
    }
  }

  // Graft point: nearest reachable node with spare degree if any, otherwise
  // the nearest reachable node with its last slot reused.
  const NodeId head = lost[0];
  NodeId best = kInvalidNode, best_spare = kInvalidNode;
  float best_dist = 0.0f, best_spare_dist = 0.0f;
  for (NodeId v : reachable_list) {
    const float dist = squared_euclidean(set.row(v), set.row(head), counter);
    if (best == kInvalidNode || dist < best_dist || (dist == best_dist && v < best)) {
      best = v;
      best_dist = dist;
    }
    if (g.degree(v) < g.cap_R &&
        (best_spare == kInvalidNode || dist < best_spare_dist ||
         (dist == best_spare_dist && v < best_spare))) {
      best_spare = v;
      best_spare_dist = dist;
    }
  }
  const NodeId graft = best_spare != kInvalidNode ? best_spare : best;
  if (!g.add_neighbor(graft, head)) {
    std::vector<NodeId> list(g.neighbors(graft).begin(), g.neighbors(graft).end());
    if (std::find(list.begin(), list.end(), head) == list.end()) {
      list.back() = head;
      g.set_neighbors(graft, std::move(list));
    }
  }
  return lost.size();
}

// Absolute fallback: thread one path through every node in id order,
// reusing existing edges and replacing last slots where full. Reaches
// everything for any cap >= 1, at the cost of graph quality.
void path_pass(FlatGraph& g, NodeId entry) {
  NodeId prev = entry;
  for (std::size_t u = 0; u < g.n; ++u) {
    const NodeId uu = static_cast<NodeId>(u);
    if (uu == entry) continue;
    if (!g.add_neighbor(prev, uu)) {
      std::vector<NodeId> list(g.neighbors(prev).begin(), g.neighbors(prev).end());
      if (std::find(list.begin(), list.end(), uu) == list.end()) {
        list.back() = uu;
        g.set_neighbors(prev, std::move(list));
      }
    }
    prev = uu;
  }
}

}  // namespace

FlatGraph ensure_connected(FlatGraph g, NodeId entry, const VectorSet& set,
                           const NdSpec& nd, DistCounter& counter) {
  if (entry >= g.n) throw std::invalid_argument("ensure_connected: bad entry");
  if (set.n != g.n) throw std::invalid_argument("ensure_connected: set/graph mismatch");

  // Re-pruning a full node can drop an edge another node relied on, so
  // repair runs to a fixpoint. Converges in one pass in practice; stubborn
  // shapes (tiny caps) fall back to chain grafting, then to a full path.
  for (int round = 0; round < 16; ++round) {
    const bool spare_first = round >= 4;
    const std::size_t repairs =
        round < 8 ? repair_pass(g, entry, set, nd, spare_first, counter)
                  : chain_pass(g, entry, set, counter);
    if (repairs == 0) return g;
    if (fully_reachable(g, entry)) return g;
  }
  path_pass(g, entry);
  if (!fully_reachable(g, entry)) {
    throw std::logic_error("ensure_connected: repair did not converge");
  }
  return g;
}

}  // namespace gann
