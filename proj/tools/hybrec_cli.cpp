// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Experiment front end: deblurring and tomography runs, streaming
// multi-dataset workflows, numerical verification of the subspace analysis,
// and the storage-cost table. All outputs (CSV, PGM, JSON) are
// byte-deterministic for a fixed config and seed.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hybrec/analysis.hpp"
#include "hybrec/config.hpp"
#include "hybrec/driver.hpp"
#include "hybrec/io.hpp"
#include "hybrec/problems.hpp"

namespace {

using nlohmann::ordered_json;
using namespace hybrec;

std::vector<double> split_angles(Index count, int splits, int part) {
  // Angles equispaced over [0, 180), contiguous chunk per dataset.
  std::vector<double> all;
  for (Index i = 0; i < count; ++i) all.push_back(180.0 * double(i) / double(count));
  const size_t begin = size_t(part) * all.size() / size_t(splits);
  const size_t end = size_t(part + 1) * all.size() / size_t(splits);
  return {all.begin() + long(begin), all.begin() + long(end)};
}

NoisyProblem build_problem(const ExperimentConfig& cfg) {
  const ProblemSpec& p = cfg.problem;
  switch (p.kind) {
    case ProblemSpec::Kind::Blur1d:
      return make_problem(gaussian_blur_1d(p.size, p.psf_sigma),
                          bumps_signal(p.size), p.noise_level, p.seed);
    case ProblemSpec::Kind::Blur2d:
      return make_problem(gaussian_blur_2d(p.size, p.size, p.psf_sigma),
                          shepp_logan(p.size), p.noise_level, p.seed);
    case ProblemSpec::Kind::Tomo: {
      return make_problem(
          parallel_tomo(p.size, split_angles(p.angles, 1, 0), p.size),
          shepp_logan(p.size), p.noise_level, p.seed);
    }
  }
  throw std::logic_error("unknown problem kind");
}

// Fills in the data-dependent regularization inputs the config cannot know.
SolverConfig wire_solver(const ExperimentConfig& cfg, const NoisyProblem& prob) {
  SolverConfig s = cfg.solver;
  s.x_true = prob.x_true;
  if (s.reg.noise_norm == 0.0) s.reg.noise_norm = prob.noise_norm;
  if (s.reg.kind == RegMethod::Kind::Upre && s.reg.noise_variance == 0.0)
    s.reg.noise_variance =
        prob.noise_norm * prob.noise_norm / double(prob.b.size());
  return s;
}

double min_relerr(const std::vector<IterationRecord>& recs) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : recs) best = std::min(best, r.rel_error);
  return best;
}

double total_ms(const std::vector<IterationRecord>& recs) {
  double t = 0;
  for (const auto& r : recs) t += r.wall_ms;
  return t;
}

void write_image(const std::string& path, const Vector& x,
                 const ProblemSpec& p) {
  const Index ny = p.kind == ProblemSpec::Kind::Blur1d ? 1 : p.size;
  write_text(path, pgm_image(x, p.size, ny));
}

int run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const NoisyProblem prob = build_problem(cfg);
  const SolverConfig solver = wire_solver(cfg, prob);
  const std::string base = cfg.out_dir + "/";

  std::vector<std::pair<std::string, std::vector<IterationRecord>>> series;
  Vector x;
  if (cfg.method == "hybr" || cfg.method == "compare") {
    SolveResult r = hybr(*prob.op, prob.b, solver);
    series.emplace_back("hybr", std::move(r.records));
    x = r.x;
  }
  if (cfg.method == "recycle" || cfg.method == "compare") {
    SolveResult r = hybr_recycle(*prob.op, prob.b, Matrix(prob.op->cols(), 0),
                                 Vector::Zero(prob.op->cols()), solver);
    series.emplace_back("recycle", std::move(r.records));
    x = r.x;
  }

  if (cfg.method == "compare")
    write_text(base + "curves.csv", records_csv(series));
  else
    write_text(base + "curves.csv", records_csv(series.front().second));
  write_image(base + "reconstruction.pgm", x, cfg.problem);

  ordered_json metrics;
  const double xn = prob.x_true.norm();
  metrics["final_relerr"] = (x - prob.x_true).norm() / xn;
  for (const auto& [name, recs] : series) {
    metrics[name + "_min_relerr"] = min_relerr(recs);
    metrics[name + "_final_relerr"] = recs.back().rel_error;
    metrics[name + "_cpu_ms"] = total_ms(recs);
    metrics[name + "_iterations"] = recs.size();
  }
  write_text(base + "metrics.json", metrics.dump(2) + "\n");
  return 0;
}

int run_stream(const ExperimentConfig& cfg, int only_approach) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const ProblemSpec& p = cfg.problem;
  const Vector x_true = shepp_logan(p.size);

  std::vector<Dataset> data;
  for (int i = 0; i < cfg.splits; ++i) {
    LinearOpPtr op =
        parallel_tomo(p.size, split_angles(p.angles, cfg.splits, i), p.size);
    NoisyProblem np = make_problem(op, x_true, p.noise_level,
                                   p.seed + std::uint64_t(i));
    data.emplace_back(np.op, np.b);
  }

  SolverConfig solver = cfg.solver;
  solver.x_true = x_true;

  static const char* kNames[] = {"recycle-sequential", "last-data",
                                 "all-data", "average"};
  const std::string base = cfg.out_dir + "/";
  ordered_json summary;
  summary["splits"] = cfg.splits;
  std::vector<double> errs(4, -1.0);
  for (int a = 1; a <= 4; ++a) {
    if (only_approach != 0 && a != only_approach) continue;
    StreamResult r = stream_solve(data, solver, a);
    const std::string name = kNames[a - 1];
    write_text(base + "curve_" + name + ".csv", records_csv(r.records));
    write_text(base + "final_" + name + ".pgm",
               pgm_image(r.x, p.size, p.size));
    const double err = (r.x - x_true).norm() / x_true.norm();
    errs[size_t(a - 1)] = err;
    ordered_json row;
    row["approach"] = a;
    row["relerr"] = err;
    row["cpu_ms"] = total_ms(r.records);
    summary[name] = row;
  }
  if (only_approach == 0 && cfg.splits == 1)
    summary["single_dataset_equivalent"] = true;
  write_text(base + "stream_summary.json", summary.dump(2) + "\n");
  return 0;
}

int run_verify(const ExperimentConfig& cfg, bool fault_inject) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const NoisyProblem prob = build_problem(cfg);

  const AnalysisPipeline pipe =
      run_pipeline(*prob.op, prob.b, cfg.verify_m, cfg.verify_k,
                   cfg.verify_ell, RegMethod::gcv(), true);
  const TransformPair pair = build_transforms(pipe.full, pipe.rec);
  const Matrix Bfull = pipe.full.B().materialize();
  const double bnorm = Bfull.norm();

  bool pass = true;
  ordered_json report;
  report["m"] = pipe.m;
  report["k"] = pipe.k;
  report["ell"] = pipe.ell;

  report["containment_error"] = pair.containment_error;
  const bool containment_ok = pair.containment_error <= 1e-6;
  report["containment_pass"] = containment_ok;
  pass = pass && containment_ok;

  const auto blocks = block_identity_norms(pair, pipe.full, pipe.rec);
  double worst_block = 0;
  for (double v : blocks) worst_block = std::max(worst_block, v);
  report["block_identity_norms"] = blocks;
  const bool blocks_ok = worst_block <= 1e-8 * bnorm;
  report["block_identity_norms_pass"] = blocks_ok;
  pass = pass && blocks_ok;

  ProjectedProblem pp = assemble_projected(pipe.rec);
  if (fault_inject) pp.Bhat(0, 0) *= 1.5;  // deliberate corruption
  const double sig1 =
      Eigen::JacobiSVD<Matrix>(pp.Bhat).singularValues()[0];
  bool bound_ok = true, equality_ok = true;
  std::vector<double> lambdas, r_norms, bounds;
  for (int i = 0; i < cfg.lambda_grid; ++i) {
    const double t = double(i) / double(cfg.lambda_grid - 1);
    const double lam = 1e-10 * sig1 * std::pow(1e10, t);
    const ResidualBoundResult rb = residual_bound(pipe, pair, lam, pp);
    lambdas.push_back(lam);
    r_norms.push_back(rb.r_norm);
    bounds.push_back(rb.bound);
    if (rb.r_norm > rb.bound + 1e-10) bound_ok = false;
    if (std::abs(rb.r_norm - rb.r_norm_direct) > 1e-8) equality_ok = false;
  }
  report["lambda"] = lambdas;
  report["r_norm"] = r_norms;
  report["bound"] = bounds;
  report["residual_bound_pass"] = bound_ok;
  report["residual_equality_pass"] = equality_ok;
  pass = pass && bound_ok && equality_ok;

  const double interlace = interlacing_check(Bfull, pp.Bhat);
  report["interlacing_violation"] = interlace;
  const bool interlace_ok = interlace <= 1e-10;
  report["interlacing_pass"] = interlace_ok;
  pass = pass && interlace_ok;

  const ExtensionEnergyGap cg = extension_energy_gap(pipe);
  const FrobGap fg =
      frob_gap(Bfull, pp.Bhat, cg.sigma_k,
               pipe.full.alphas()[size_t(pipe.m)],
               bbar_ell(pipe.full, pipe.m, pipe.ell));
  report["frob_gap_lhs"] = fg.lhs;
  report["frob_gap_rhs"] = fg.rhs;
  const bool frob_ok = fg.lhs <= fg.rhs + 1e-10;
  report["frob_gap_pass"] = frob_ok;
  pass = pass && frob_ok;

  report["d"] = cg.d;
  report["norm_bbarbar_sq"] = cg.norm_bb2;
  report["norm_btilde_sq"] = cg.norm_bt2;
  report["sigma_k"] = cg.sigma_k;
  const bool conj_ok = cg.d <= 0.1 * cg.norm_bt2 && cg.d < cg.sigma_k;
  report["extension_energy_pass"] = conj_ok;
  pass = pass && conj_ok;

  const AlphaTrend at = alpha_trend(pipe.full);
  report["alpha_slope"] = at.slope;

  const Sigma1Bound sb = sigma1_bound(pipe);
  report["sigma1_full"] = sb.sigma1_full;
  report["sigma1_estimate"] = sb.estimate;
  report["sigma1_within_estimate"] = sb.sigma1_full <= 1.1 * sb.estimate;

  const EtaDiagnostic ed = eta_diagnostic(pipe);
  report["bmt_eta_norm"] = ed.bmt_eta_norm;
  report["r_kk"] = ed.r_kk;

  report["pass"] = pass;
  write_text(cfg.out_dir + "/verify_report.json", report.dump(2) + "\n");
  std::cout << (pass ? "verify: all checks passed\n"
                     : "verify: checks FAILED\n");
  return pass ? 0 : 1;
}

int run_cost(Index rows, Index cols, Index m, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::string csv = "k,ell,c_hybr,c_recycle,bound\n";
  bool all_below = true;
  for (Index k = 1; k < m; ++k) {
    const StorageCosts c = storage_costs(k, m - k, rows, cols);
    csv += std::to_string(k) + "," + std::to_string(m - k) + "," +
           fmt17(c.c_hybr) + "," + fmt17(c.c_recycle) + "," + fmt17(c.bound) +
           "\n";
    all_below = all_below && c.c_recycle < c.bound;
  }
  write_text(out_dir + "/storage_costs.csv", csv);
  std::cout << (all_below ? "cost: recycle below bound for all splits\n"
                          : "cost: bound violated\n");
  return all_below ? 0 : 1;
}

ExperimentConfig load_or_default(const std::string& config_path,
                                 ProblemSpec::Kind default_kind) {
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = load_config(config_path);
  if (config_path.empty()) cfg.problem.kind = default_kind;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid projection solver with recycling and compression"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  long long seed = -1;
  int approach = 0;
  bool fault_inject = false;
  Index cost_rows = 64, cost_cols = 64, cost_m = 15;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment JSON file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "noise seed override");
  };

  CLI::App* deblur = app.add_subcommand("deblur", "deblurring experiment");
  add_common(deblur);
  CLI::App* tomo = app.add_subcommand("tomo", "tomography experiment");
  add_common(tomo);
  CLI::App* stream =
      app.add_subcommand("stream", "multi-dataset streaming workflows");
  add_common(stream);
  stream->add_option("--approach", approach,
                     "run one workflow (1..4), 0 runs all")
      ->check(CLI::Range(0, 4));
  CLI::App* verify =
      app.add_subcommand("verify", "numerical verification report");
  add_common(verify);
  verify->add_flag("--fault-inject", fault_inject,
                   "corrupt the projected matrix (negative test)");
  CLI::App* cost = app.add_subcommand("cost", "storage-cost table");
  cost->add_option("--out", out_dir, "output directory");
  cost->add_option("--rows", cost_rows, "problem row count M");
  cost->add_option("--cols", cost_cols, "problem column count N");
  cost->add_option("--m", cost_m, "total basis budget m");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cost->parsed())
      return run_cost(cost_rows, cost_cols, cost_m,
                      out_dir.empty() ? "." : out_dir);

    ExperimentConfig cfg = load_or_default(
        config_path, tomo->parsed() || stream->parsed()
                         ? ProblemSpec::Kind::Tomo
                         : ProblemSpec::Kind::Blur1d);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed >= 0) cfg.problem.seed = (unsigned long long)(seed);

    if (deblur->parsed() || tomo->parsed()) return run_experiment(cfg);
    if (stream->parsed()) return run_stream(cfg, approach);
    if (verify->parsed()) return run_verify(cfg, fault_inject);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
