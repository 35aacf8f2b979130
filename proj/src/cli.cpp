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

#include "gann/cli.hpp"

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gann/bench.hpp"
#include "gann/build.hpp"
#include "gann/complexity.hpp"
#include "gann/error.hpp"
#include "gann/ground_truth.hpp"
#include "gann/index_io.hpp"
#include "gann/rng.hpp"
#include "gann/synthetic.hpp"

namespace gann {

namespace {

struct GenArgs {
  std::uint64_t n = 0;
  std::uint32_t d = 0;
  double pow_a = 0.0;
  double scale_k = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct GtArgs {
  std::string data, queries, out_ids, out_dists;
  std::uint32_t k = 10;
};

struct NoiseArgs {
  std::string data, out;
  std::uint64_t count = 100;
  double variance = 0.01;
  std::uint64_t seed = 0;
};

struct BuildArgs {
  std::string data, out;
  std::string algo = "ii";
  std::string nd = "rnd";
  std::string ss = "ks";
  std::string dc_mode = "merged";
  std::uint32_t R = 60;
  std::uint32_t L = 800;
  std::uint32_t M = 16;
  double alpha = 1.2;
  double theta = 60.0;
  std::uint32_t leaf_size = 10'000;
  std::uint32_t threads = 1;
  bool deterministic = false;
  bool shuffle = false;
  std::uint32_t nnd_iters = 10;
  double nnd_delta = 0.001;
  std::uint64_t seed = 0;
};

struct ComplexityArgs {
  std::string data, queries, out;
  std::uint32_t k = 100;
};

struct SweepArgs {
  std::string index, data, queries, gt_ids, out;
  std::uint32_t k = 10;
  std::vector<std::uint32_t> l_list;
  std::vector<std::uint32_t> nprobe_list{1};
  std::uint32_t s = 0;
  std::uint32_t repeats = 6;
  std::uint32_t threads = 1;
};

int do_gen(const GenArgs& a) {
  PowerLawSpec spec;
  spec.n = a.n;
  spec.d = a.d;
  spec.exponent_a = a.pow_a;
  spec.scale_k = a.scale_k;
  spec.seed = a.seed;
  save_vecs(gen_powerlaw(spec), a.out, VecFormat::kFvecs);
  std::cout << "wrote " << a.out << " (" << a.n << " x " << a.d << ")\n";
  return 0;
}

int do_gt(const GtArgs& a) {
  VectorSet data = load_vecs(a.data, VecFormat::kFvecs);
  VectorSet queries = load_vecs(a.queries, VecFormat::kFvecs);
  DistCounter counter;
  GroundTruth gt = brute_force_knn_batch(data, queries, a.k, counter);
  save_ground_truth(gt, a.out_ids, a.out_dists);
  std::cout << "wrote " << a.out_ids << " and " << a.out_dists << " ("
            << queries.n << " queries, k=" << a.k << ", "
            << counter.count << " distance calcs)\n";
  return 0;
}

int do_noise(const NoiseArgs& a) {
  VectorSet data = load_vecs(a.data, VecFormat::kFvecs);
  auto indices = sample_indices(data.n, a.count, a.seed, rng::kQueryPick);
  NoiseSpec spec;
  spec.variance_sigma2 = a.variance;
  spec.seed = a.seed;
  save_vecs(gen_noise_queries(data, indices, spec), a.out, VecFormat::kFvecs);
  std::cout << "wrote " << a.out << " (" << a.count << " queries, "
            << 100.0 * a.variance << "% noise)\n";
  return 0;
}

int do_build(const BuildArgs& a) {
  VectorSet data = load_vecs(a.data, VecFormat::kFvecs);

  BuildParams p;
  p.cap_R = a.R;
  p.beam_L_build = a.L;
  p.M = a.M;
  p.alpha = static_cast<float>(a.alpha);
  p.theta_deg = static_cast<float>(a.theta);
  p.nd = nd_from_name(a.nd);
  p.ss = ss_from_name(a.ss);
  p.leaf_size = a.leaf_size;
  p.seed = a.seed;
  p.threads = a.threads;
  p.deterministic = a.deterministic || a.threads <= 1;
  p.shuffle_insertion = a.shuffle;
  p.validate();

  IndexFile file;
  BuildReport report;
  std::string method = a.algo;
  if (a.algo == "ii") {
    IiBuild built = build_ii(data, p);
    file.index = std::move(built.index);
    file.seeds = std::move(built.seeds);
    report = built.report;
  } else if (a.algo == "nnd") {
    if (p.ss == SsKind::kSN) {
      throw std::invalid_argument("nnd builds a flat graph; SN seeds need --algo ii");
    }
    auto [g, r] = nndescent(data, a.R, a.nnd_iters, a.nnd_delta, a.seed);
    report = r;
    file.index = std::move(g);
    DistCounter seed_counter;
    file.seeds = build_seed_index(data, p.ss, p.seed_params, p.seed, seed_counter);
    report.search_calcs += seed_counter.count;
    report.finalize();
  } else if (a.algo == "dc") {
    const DcMode mode = a.dc_mode == "separate" ? DcMode::kSeparate : DcMode::kMerged;
    auto [index, r] = build_dc(data, p, mode);
    report = r;
    file.index = std::move(index);
    method = a.dc_mode == "separate" ? "dc-separate" : "dc-merged";
    if (mode == DcMode::kMerged) {
      if (p.ss == SsKind::kSN) {
        throw std::invalid_argument("merged DC yields a flat graph; pick a non-SN --ss");
      }
      DistCounter seed_counter;
      file.seeds = build_seed_index(data, p.ss, p.seed_params, p.seed, seed_counter);
      report.search_calcs += seed_counter.count;
      report.finalize();
    }
  } else {
    throw std::invalid_argument("unknown --algo: " + a.algo);
  }

  file.meta.method = method;
  file.meta.nd = a.nd;
  file.meta.ss = a.algo == "dc" && a.dc_mode == "separate" ? "centroid" : a.ss;
  file.meta.alpha = static_cast<float>(a.alpha);
  file.meta.theta_deg = static_cast<float>(a.theta);
  file.meta.M = a.M;
  file.meta.beam_L_build = a.L;
  file.meta.build_seed = a.seed;
  save_index(file, a.out);

  nlohmann::json j{
      {"index", a.out},
      {"method", method},
      {"nd", a.nd},
      {"ss", file.meta.ss},
      {"distance_calcs", report.distance_calcs},
      {"wall_time_sec", report.wall_time_s},
      {"phases",
       {{"candidate_search", report.search_calcs},
        {"pruning", report.prune_calcs},
        {"repair", report.repair_calcs}}},
  };
  std::cout << j.dump(2) << "\n";
  return 0;
}

int do_complexity(const ComplexityArgs& a) {
  VectorSet data = load_vecs(a.data, VecFormat::kFvecs);
  VectorSet queries = load_vecs(a.queries, VecFormat::kFvecs);
  DistCounter counter;
  ComplexityReport report = complexity_report(data, queries, a.k, counter);
  write_complexity_csv(report, a.out);
  std::cout << "wrote " << a.out << " (lid mean=" << report.lid_mean
            << " median=" << report.lid_median << ", lrc mean=" << report.lrc_mean
            << " median=" << report.lrc_median << ")\n";
  return 0;
}

int do_sweep(const SweepArgs& a) {
  SweepSpec spec;
  spec.index_path = a.index;
  spec.data_path = a.data;
  spec.query_path = a.queries;
  spec.gt_ids_path = a.gt_ids;
  spec.out_csv = a.out;
  spec.k = a.k;
  spec.beam_widths = a.l_list;
  spec.nprobes = a.nprobe_list;
  spec.seed_count_s = a.s;
  spec.repeats = a.repeats;
  spec.threads = a.threads;
  auto rows = run_sweep(spec);
  std::cout << "wrote " << a.out << " (" << rows.size() << " rows)\n";
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"gann: graph-based approximate nearest-neighbor toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate power-law data (fvecs)");
  gen_cmd->add_option("--n", gen.n, "vector count")->required();
  gen_cmd->add_option("--d", gen.d, "dimensionality")->required();
  gen_cmd->add_option("--pow-a", gen.pow_a, "power-law exponent (0 = uniform)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--scale-k", gen.scale_k, "power-law scale")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "rng seed")->required();
  gen_cmd->add_option("--out", gen.out, "output fvecs path")->required();

  GtArgs gt;
  auto* gt_cmd = app.add_subcommand("gt", "exact k-NN ground truth (ivecs + fvecs)");
  gt_cmd->add_option("--data", gt.data)->required();
  gt_cmd->add_option("--queries", gt.queries)->required();
  gt_cmd->add_option("--k", gt.k)->required()->check(CLI::PositiveNumber);
  gt_cmd->add_option("--out-ids", gt.out_ids)->required();
  gt_cmd->add_option("--out-dists", gt.out_dists)->required();

  NoiseArgs noise;
  auto* noise_cmd = app.add_subcommand("noise", "Gaussian-perturbed query workload");
  noise_cmd->add_option("--data", noise.data)->required();
  noise_cmd->add_option("--count", noise.count)->required()->check(CLI::PositiveNumber);
  noise_cmd->add_option("--variance", noise.variance, "sigma^2; 0.01 = 1% noise")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  noise_cmd->add_option("--seed", noise.seed)->required();
  noise_cmd->add_option("--out", noise.out)->required();

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "build an index (GANN file)");
  build_cmd->add_option("--data", build.data)->required();
  build_cmd->add_option("--algo", build.algo, "ii | nnd | dc")
      ->check(CLI::IsMember({"ii", "nnd", "dc"}));
  build_cmd->add_option("--nd", build.nd, "nond | rnd | rrnd | mond")
      ->check(CLI::IsMember({"nond", "rnd", "rrnd", "mond"}));
  build_cmd->add_option("--ss", build.ss, "sn | kd | km | md | sf | ks")
      ->check(CLI::IsMember({"sn", "kd", "km", "md", "sf", "ks"}));
  build_cmd->add_option("--R", build.R, "max out-degree")->check(CLI::PositiveNumber);
  build_cmd->add_option("--L", build.L, "build beam width")->check(CLI::PositiveNumber);
  build_cmd->add_option("--M", build.M, "layer-assignment parameter");
  build_cmd->add_option("--alpha", build.alpha, "RRND relaxation")
      ->check(CLI::Range(1.0, 1e6));
  build_cmd->add_option("--theta", build.theta, "MOND angle threshold (degrees)")
      ->check(CLI::Range(1e-6, 179.999999));
  build_cmd->add_option("--leaf-size", build.leaf_size, "DC partition cap");
  build_cmd->add_option("--dc-mode", build.dc_mode, "merged | separate")
      ->check(CLI::IsMember({"merged", "separate"}));
  build_cmd->add_option("--threads", build.threads)->check(CLI::PositiveNumber);
  build_cmd->add_flag("--deterministic", build.deterministic, "force one worker");
  build_cmd->add_flag("--shuffle", build.shuffle, "shuffled insertion order");
  build_cmd->add_option("--iters", build.nnd_iters, "nnd iterations");
  build_cmd->add_option("--delta", build.nnd_delta, "nnd early-stop threshold");
  build_cmd->add_option("--seed", build.seed)->required();
  build_cmd->add_option("--out", build.out)->required();

  ComplexityArgs cx;
  auto* cx_cmd = app.add_subcommand("complexity", "per-query LID/LRC report (CSV)");
  cx_cmd->add_option("--data", cx.data)->required();
  cx_cmd->add_option("--queries", cx.queries)->required();
  cx_cmd->add_option("--k", cx.k, "neighbors per metric (default 100)");
  cx_cmd->add_option("--out", cx.out)->required();

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "recall/efficiency sweep (CSV)");
  sweep_cmd->add_option("--index", sweep.index)->required();
  sweep_cmd->add_option("--data", sweep.data)->required();
  sweep_cmd->add_option("--queries", sweep.queries)->required();
  sweep_cmd->add_option("--gt-ids", sweep.gt_ids)->required();
  sweep_cmd->add_option("--k", sweep.k)->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--l-list", sweep.l_list, "beam widths")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--nprobe-list", sweep.nprobe_list, "DC probe counts")
      ->delimiter(',');
  sweep_cmd->add_option("--s", sweep.s, "seed count (0 = beam width)");
  sweep_cmd->add_option("--repeats", sweep.repeats)->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--threads", sweep.threads, "DC fan-out threads")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sweep.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen_cmd->parsed()) return do_gen(gen);
    if (gt_cmd->parsed()) return do_gt(gt);
    if (noise_cmd->parsed()) return do_noise(noise);
    if (build_cmd->parsed()) return do_build(build);
    if (cx_cmd->parsed()) return do_complexity(cx);
    if (sweep_cmd->parsed()) return do_sweep(sweep);
  } catch (const std::invalid_argument& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace gann
