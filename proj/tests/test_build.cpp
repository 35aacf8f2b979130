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

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "gann/build.hpp"
#include "gann/index_io.hpp"
#include "testutil.hpp"

using namespace gann;
namespace tu = gann::testutil;

namespace {

BuildParams small_params(std::uint32_t R = 8, std::uint32_t L = 32) {
  BuildParams p;
  p.cap_R = R;
  p.beam_L_build = L;
  p.seed = 7;
  return p;
}

std::size_t reachable_from(const FlatGraph& g, NodeId start) {
  std::vector<bool> seen(g.n, false);
  std::vector<NodeId> stack{start};
  seen[start] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count;
}

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("BuildParams: defaults follow the baseline protocol") {
  BuildParams p;
  CHECK(p.cap_R == 60);
  CHECK(p.beam_L_build == 800);
  CHECK(p.alpha == 1.2f);
  CHECK(p.theta_deg == 60.0f);
  p.validate();
  p.alpha = 0.5f;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = BuildParams{};
  p.beam_L_build = 10;  // below cap_R
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("build_ii: one node, two nodes") {
  VectorSet single = tu::random_set(1, 4, 1);
  IiBuild one = build_ii(single, small_params());
  const auto& g1 = std::get<FlatGraph>(one.index);
  CHECK(g1.n == 1);
  CHECK(g1.edge_count() == 0);

  VectorSet pair = tu::random_set(2, 4, 2);
  IiBuild two = build_ii(pair, small_params());
  const auto& g2 = std::get<FlatGraph>(two.index);
  CHECK(g2.neighbors(0).size() == 1);
  CHECK(g2.neighbors(0)[0] == 1);
  CHECK(g2.neighbors(1).size() == 1);
  CHECK(g2.neighbors(1)[0] == 0);
}

TEST_CASE("build_ii: every strategy yields a valid graph of the right kind") {
  VectorSet set = tu::random_set(300, 6, 3);
  for (SsKind ss : {SsKind::kKS, SsKind::kSF, SsKind::kMD, SsKind::kKD,
                    SsKind::kKM, SsKind::kSN}) {
    BuildParams p = small_params();
    p.ss = ss;
    p.M = 8;
    IiBuild built = build_ii(set, p);
    if (ss == SsKind::kSN) {
      REQUIRE(std::holds_alternative<LayeredGraph>(built.index));
      const auto& lg = std::get<LayeredGraph>(built.index);
      lg.validate();
      CHECK(lg.layers[0].n == set.n);
      CHECK(built.seeds.kind == SsKind::kSN);
    } else {
      REQUIRE(std::holds_alternative<FlatGraph>(built.index));
      std::get<FlatGraph>(built.index).validate();
      CHECK(built.seeds.kind == ss);
    }
    CHECK(built.report.distance_calcs ==
          built.report.search_calcs + built.report.prune_calcs +
              built.report.repair_calcs);
    CHECK(built.report.distance_calcs > 0);
  }
}

TEST_CASE("build_ii: deterministic mode is replay-exact, byte for byte") {
  VectorSet set = tu::random_set(400, 8, 4);
  BuildParams p = small_params();
  p.ss = SsKind::kKS;
  IiBuild a = build_ii(set, p);
  IiBuild b = build_ii(set, p);
  CHECK(a.report.distance_calcs == b.report.distance_calcs);

  const std::string pa = tu::tmp_path("det_a.gann");
  const std::string pb = tu::tmp_path("det_b.gann");
  save_index({a.index, a.seeds, {}}, pa);
  save_index({b.index, b.seeds, {}}, pb);
  CHECK(file_bytes(pa) == file_bytes(pb));
  std::remove(pa.c_str());
  std::remove(pb.c_str());
}

TEST_CASE("build_ii: parallel workers still produce a valid graph") {
  VectorSet set = tu::random_set(600, 6, 5);
  BuildParams p = small_params();
  p.deterministic = false;
  p.threads = 4;
  IiBuild built = build_ii(set, p);
  const auto& g = std::get<FlatGraph>(built.index);
  g.validate();
  CHECK(g.edge_count() > 0);
}

TEST_CASE("build_ii + ensure_connected: full reachability at desk scale") {
  VectorSet set = tu::random_set(1500, 8, 6);
  BuildParams p = small_params(16, 64);
  IiBuild built = build_ii(set, p);
  FlatGraph g = std::get<FlatGraph>(built.index);
  DistCounter c;
  g = ensure_connected(std::move(g), 0, set, p.nd_spec(), c);
  CHECK(reachable_from(g, 0) == set.n);
}

TEST_CASE("build_ii: shuffled insertion still yields a valid graph") {
  VectorSet set = tu::random_set(250, 5, 61);
  BuildParams p = small_params();
  p.shuffle_insertion = true;
  IiBuild built = build_ii(set, p);
  std::get<FlatGraph>(built.index).validate();
}

TEST_CASE("nndescent: initial graph is k-regular") {
  VectorSet set = tu::random_set(50, 4, 7);
  auto [g, report] = nndescent(set, 5, 1, 0.999, 11);  // high delta stops after one pass
  for (std::size_t u = 0; u < g.n; ++u) {
    CHECK(g.degree(static_cast<NodeId>(u)) == 5);
  }
  g.validate();
}

TEST_CASE("nndescent: converges to the exact 5-NN graph on a tiny set") {
  VectorSet set = tu::random_set(20, 4, 8);
  auto [g, report] = nndescent(set, 5, 20, 0.0, 12);
  auto exact = tu::oracle_knn_graph(set, 5);
  double hits = 0.0;
  for (std::size_t u = 0; u < set.n; ++u) {
    std::set<NodeId> got(g.neighbors(static_cast<NodeId>(u)).begin(),
                         g.neighbors(static_cast<NodeId>(u)).end());
    for (NodeId v : exact[u]) hits += got.count(v);
  }
  CHECK(hits / static_cast<double>(set.n * 5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(nndescent(set, 20, 5, 0.0, 1), std::invalid_argument);
}

TEST_CASE("nndescent: accepted updates trend downward") {
  std::size_t monotone = 0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    VectorSet set = tu::random_set(150, 6, 500 + trial);
    std::vector<std::uint64_t> accepted;
    nndescent(set, 5, 8, 0.0, 600 + trial, &accepted);
    bool ok = true;
    for (std::size_t i = 1; i < accepted.size(); ++i) {
      if (accepted[i] > accepted[i - 1]) ok = false;
    }
    if (ok) ++monotone;
  }
  CHECK(monotone >= trials * 9 / 10);
}

TEST_CASE("refine_with_nd: NoND with slack cap leaves edges alone") {
  VectorSet set = tu::random_set(60, 4, 9);
  FlatGraph g = new_graph(60, 10);
  g.d = 4;
  auto exact = tu::oracle_knn_graph(set, 6);
  for (std::size_t u = 0; u < set.n; ++u) {
    g.set_neighbors(static_cast<NodeId>(u), exact[u]);
  }
  BuildParams p = small_params(10, 32);
  RefineResult r = refine_with_nd(g, set, NdSpec{NdKind::kNoND}, p);
  CHECK(r.pruning_ratio == 0.0);
  for (std::size_t u = 0; u < set.n; ++u) {
    std::set<NodeId> before(g.neighbors(static_cast<NodeId>(u)).begin(),
                            g.neighbors(static_cast<NodeId>(u)).end());
    std::set<NodeId> after(r.graph.neighbors(static_cast<NodeId>(u)).begin(),
                           r.graph.neighbors(static_cast<NodeId>(u)).end());
    CHECK(before == after);
  }
}

TEST_CASE("refine_with_nd: RRND(1) equals RND edge for edge") {
  VectorSet set = tu::random_set(200, 6, 10);
  FlatGraph g = new_graph(200, 12);
  g.d = 6;
  auto exact = tu::oracle_knn_graph(set, 12);
  for (std::size_t u = 0; u < set.n; ++u) {
    g.set_neighbors(static_cast<NodeId>(u), exact[u]);
  }
  BuildParams p = small_params(12, 32);
  RefineResult rnd = refine_with_nd(g, set, NdSpec{NdKind::kRND}, p);
  RefineResult rrnd1 = refine_with_nd(g, set, NdSpec{NdKind::kRRND, 1.0f}, p);
  CHECK(rnd.graph == rrnd1.graph);
  CHECK(rnd.pruning_ratio == rrnd1.pruning_ratio);
}

TEST_CASE("refine_with_nd: pruning-ratio ordering on an exact 20-NN graph") {
  VectorSet set = tu::random_set(1000, 16, 11);
  FlatGraph g = new_graph(1000, 20);
  g.d = 16;
  auto exact = tu::oracle_knn_graph(set, 20);
  for (std::size_t u = 0; u < set.n; ++u) {
    g.set_neighbors(static_cast<NodeId>(u), exact[u]);
  }
  BuildParams p = small_params(20, 32);
  const double rnd = refine_with_nd(g, set, NdSpec{NdKind::kRND}, p).pruning_ratio;
  const double mond =
      refine_with_nd(g, set, NdSpec{NdKind::kMOND, 1.2f, 60.0f}, p).pruning_ratio;
  const double rrnd =
      refine_with_nd(g, set, NdSpec{NdKind::kRRND, 1.2f}, p).pruning_ratio;
  CHECK(rnd >= mond);
  CHECK(mond >= rrnd);
  CHECK(rnd > 0.0);
}

TEST_CASE("balanced_partition: cover, disjointness, size caps") {
  VectorSet set = tu::random_set(500, 6, 12);
  DistCounter c;
  auto parts = balanced_partition(set, 80, 13, c);
  std::vector<bool> covered(set.n, false);
  for (const auto& part : parts) {
    CHECK(part.members.size() <= 80);
    CHECK(part.centroid.size() == set.d);
    for (NodeId id : part.members) {
      CHECK_FALSE(covered[id]);
      covered[id] = true;
    }
  }
  for (bool b : covered) CHECK(b);

  auto one = balanced_partition(set, set.n, 13, c);
  REQUIRE(one.size() == 1);
  CHECK(one[0].members.size() == set.n);
}

TEST_CASE("build_dc merged: single partition matches build_ii topology") {
  VectorSet set = tu::random_set(300, 8, 14);
  BuildParams p = small_params(12, 48);
  p.leaf_size = 10'000;  // >= n: one partition
  auto [index, report] = build_dc(set, p, DcMode::kMerged);
  const auto& merged = std::get<FlatGraph>(index);
  IiBuild direct = build_ii(set, p);
  const auto& flat = std::get<FlatGraph>(direct.index);
  CHECK(merged.adjacency == flat.adjacency);
}

TEST_CASE("build_dc merged: valid over all global ids") {
  VectorSet set = tu::random_set(600, 6, 15);
  BuildParams p = small_params(8, 32);
  p.leaf_size = 200;
  auto [index, report] = build_dc(set, p, DcMode::kMerged);
  const auto& g = std::get<FlatGraph>(index);
  CHECK(g.n == set.n);
  g.validate();
  CHECK(report.repair_calcs > 0);  // medoid + connectivity verification
}

TEST_CASE("build_dc separate: partitions carry graphs, centroids, seeds") {
  VectorSet set = tu::random_set(600, 6, 16);
  BuildParams p = small_params(8, 32);
  p.leaf_size = 200;
  auto [index, report] = build_dc(set, p, DcMode::kSeparate);
  const auto& idx = std::get<PartitionedIndex>(index);
  idx.validate();
  CHECK(idx.partitions.size() >= 3);
  for (const auto& part : idx.partitions) {
    CHECK(part.seed_local != kInvalidNode);
    CHECK(part.seed_local < part.members.size());
    CHECK(part.graph.edge_count() > 0);
  }
}
