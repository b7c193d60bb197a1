// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#include "hybrec/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hybrec {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw std::runtime_error("config: " + msg);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      fail("unknown key \"" + it.key() + "\" in " + where);
}

ProblemSpec parse_problem(const json& j) {
  reject_unknown(j, {"kind", "size", "psf_sigma", "angles", "noise_level",
                     "seed"},
                 "problem");
  ProblemSpec p;
  const std::string kind = j.value("kind", "blur1d");
  if (kind == "blur1d")
    p.kind = ProblemSpec::Kind::Blur1d;
  else if (kind == "blur2d")
    p.kind = ProblemSpec::Kind::Blur2d;
  else if (kind == "tomo")
    p.kind = ProblemSpec::Kind::Tomo;
  else
    fail("problem.kind must be blur1d, blur2d, or tomo");
  p.size = j.value("size", Index(64));
  p.psf_sigma = j.value("psf_sigma", 2.0);
  p.angles = j.value("angles", Index(30));
  p.noise_level = j.value("noise_level", 0.002);
  p.seed = j.value("seed", 1ULL);
  if (p.size < 2) fail("problem.size must be >= 2");
  if (p.psf_sigma <= 0) fail("problem.psf_sigma must be > 0");
  if (p.angles < 1) fail("problem.angles must be >= 1");
  if (p.noise_level < 0) fail("problem.noise_level must be >= 0");
  return p;
}

RegMethod parse_reg(const json& j) {
  const std::string name = j.value("reg", "wgcv-auto");
  RegMethod reg;
  if (name == "optimal")
    reg = RegMethod::optimal();
  else if (name == "gcv")
    reg = RegMethod::gcv();
  else if (name == "wgcv")
    reg = RegMethod::wgcv(j.value("omega", 1.0));
  else if (name == "wgcv-auto")
    reg = RegMethod::wgcv_auto();
  else if (name == "upre")
    reg = RegMethod::upre(j.value("noise_variance", 0.0));
  else if (name == "dp")
    reg = RegMethod::dp(j.value("noise_norm", 0.0), j.value("tau", 1.01));
  else
    fail("solver.reg must be optimal, gcv, wgcv, wgcv-auto, upre, or dp");
  reg.noise_norm = j.value("noise_norm", reg.noise_norm);
  reg.tau = j.value("tau", reg.tau);
  return reg;
}

CompressMethod parse_compress(const json& j) {
  const std::string name = j.value("compress", "tsvd");
  const Index q = j.value("q", Index(10));
  const double eps_tol = j.value("eps_tol", 1e-6);
  if (name == "tsvd") return CompressMethod::tsvd(q, eps_tol);
  if (name == "solution") return CompressMethod::solution(q, eps_tol);
  if (name == "sparse")
    return CompressMethod::sparse(q, eps_tol, j.value("mu", -1.0));
  if (name == "rbd") return CompressMethod::rbd(q, eps_tol);
  fail("solver.compress must be tsvd, solution, sparse, or rbd");
}

SolverConfig parse_solver(const json& j) {
  reject_unknown(j,
                 {"storage_limit", "reg", "omega", "noise_variance",
                  "noise_norm", "tau", "compress", "q", "eps_tol", "mu",
                  "reorth", "max_cycles", "inner_stop", "gcv_flat_tol",
                  "gcv_flat_window", "cycle_tol", "timing"},
                 "solver");
  SolverConfig s;
  s.storage_limit = j.value("storage_limit", Index(15));
  s.reg = parse_reg(j);
  s.compress = parse_compress(j);
  s.reorth = j.value("reorth", false);
  s.max_cycles = j.value("max_cycles", 5);
  const std::string stop = j.value("inner_stop", "max-fill");
  if (stop == "max-fill")
    s.inner_stop = SolverConfig::InnerStop::MaxFill;
  else if (stop == "gcv-flat")
    s.inner_stop = SolverConfig::InnerStop::GcvFlat;
  else
    fail("solver.inner_stop must be max-fill or gcv-flat");
  s.gcv_flat_tol = j.value("gcv_flat_tol", 1e-4);
  s.gcv_flat_window = j.value("gcv_flat_window", 3);
  s.cycle_tol = j.value("cycle_tol", 1e-6);
  s.timing = j.value("timing", false);
  if (s.storage_limit < 1) fail("solver.storage_limit must be >= 1");
  if (s.compress.q < 1) fail("solver.q must be >= 1");
  if (s.max_cycles < 1) fail("solver.max_cycles must be >= 1");
  return s;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");
  reject_unknown(j, {"problem", "solver", "method", "stream", "verify", "out"},
                 "top level");

  ExperimentConfig cfg;
  if (j.contains("problem")) cfg.problem = parse_problem(j["problem"]);
  if (j.contains("solver")) cfg.solver = parse_solver(j["solver"]);
  cfg.method = j.value("method", "hybr");
  if (cfg.method != "hybr" && cfg.method != "recycle" &&
      cfg.method != "compare")
    fail("method must be hybr, recycle, or compare");
  if (j.contains("stream")) {
    const json& s = j["stream"];
    reject_unknown(s, {"splits", "approach"}, "stream");
    cfg.splits = s.value("splits", 2);
    cfg.approach = s.value("approach", 1);
    if (cfg.splits < 1) fail("stream.splits must be >= 1");
    if (cfg.approach < 1 || cfg.approach > 4)
      fail("stream.approach must be 1..4");
  }
  if (j.contains("verify")) {
    const json& v = j["verify"];
    reject_unknown(v, {"m", "k", "ell", "lambda_grid"}, "verify");
    cfg.verify_m = v.value("m", Index(30));
    cfg.verify_k = v.value("k", Index(15));
    cfg.verify_ell = v.value("ell", Index(10));
    cfg.lambda_grid = v.value("lambda_grid", 20);
    if (cfg.verify_k < 2 || cfg.verify_k > cfg.verify_m || cfg.verify_ell < 1)
      fail("verify: need 2 <= k <= m and ell >= 1");
    if (cfg.lambda_grid < 2) fail("verify.lambda_grid must be >= 2");
  }
  cfg.out_dir = j.value("out", ".");
  if (cfg.solver.compress.q >= cfg.solver.storage_limit)
    fail("solver.q must be < solver.storage_limit");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace hybrec
