// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "hybrec/config.hpp"
#include "hybrec/io.hpp"

using namespace hybrec;

TEST_CASE("full config round trip") {
  const char* text = R"({
    "problem": {"kind": "blur2d", "size": 16, "psf_sigma": 1.5,
                "noise_level": 0.01, "seed": 42},
    "solver": {"storage_limit": 12, "reg": "dp", "noise_norm": 0.5,
               "tau": 1.05, "compress": "solution", "q": 6,
               "eps_tol": 1e-8, "reorth": true, "max_cycles": 3,
               "inner_stop": "gcv-flat", "gcv_flat_tol": 1e-3,
               "gcv_flat_window": 2},
    "method": "compare",
    "stream": {"splits": 3, "approach": 2},
    "verify": {"m": 20, "k": 10, "ell": 5, "lambda_grid": 10},
    "out": "results"
  })";
  const ExperimentConfig cfg = parse_config(text);
  CHECK(cfg.problem.kind == ProblemSpec::Kind::Blur2d);
  CHECK(cfg.problem.size == 16);
  CHECK(cfg.problem.seed == 42);
  CHECK(cfg.solver.storage_limit == 12);
  CHECK(cfg.solver.reg.kind == RegMethod::Kind::Dp);
  CHECK(cfg.solver.reg.noise_norm == 0.5);
  CHECK(cfg.solver.reg.tau == 1.05);
  CHECK(cfg.solver.compress.kind == CompressMethod::Kind::SolutionOriented);
  CHECK(cfg.solver.compress.q == 6);
  CHECK(cfg.solver.inner_stop == SolverConfig::InnerStop::GcvFlat);
  CHECK(cfg.method == "compare");
  CHECK(cfg.splits == 3);
  CHECK(cfg.verify_m == 20);
  CHECK(cfg.out_dir == "results");
}

TEST_CASE("defaults apply for an empty object") {
  const ExperimentConfig cfg = parse_config("{}");
  CHECK(cfg.problem.kind == ProblemSpec::Kind::Blur1d);
  CHECK(cfg.solver.storage_limit == 15);
  CHECK(cfg.solver.reg.kind == RegMethod::Kind::Wgcv);
  CHECK(cfg.solver.reg.omega_auto);
  CHECK(cfg.method == "hybr");
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS(parse_config(R"({"problme": {}})"), std::runtime_error);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"kindd": "blur1d"}})"),
                  std::runtime_error);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"q_max": 5}})"),
                  std::runtime_error);
}

TEST_CASE("invalid values are rejected with messages") {
  CHECK_THROWS_AS(parse_config("not json"), std::runtime_error);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"kind": "sonar"}})"),
                  std::runtime_error);
  CHECK_THROWS_AS(parse_config(R"({"method": "magic"})"),
                  std::runtime_error);
  CHECK_THROWS_AS(parse_config(R"({"solver": {"q": 20}})"),
                  std::runtime_error);  // q >= storage_limit
  CHECK_THROWS_AS(parse_config(R"({"stream": {"approach": 7}})"),
                  std::runtime_error);
}

TEST_CASE("17-digit float formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.6789, 0.0}) {
    CHECK(std::stod(fmt17(v)) == v);
  }
  CHECK(fmt17(0.0) == "0");
  CHECK(fmt17(-1.0) == "-1");
}

TEST_CASE("record CSV layout is fixed") {
  std::vector<IterationRecord> recs;
  recs.push_back({0, 1, 0.5, 0.25, 0.125, 3, 0.0});
  const std::string csv = records_csv(recs);
  CHECK(csv ==
        "cycle,iter,lambda,resnorm,relerr,basis_count,wall_ms\n"
        "0,1,0.5,0.25,0.125,3,0\n");

  const std::string multi = records_csv({{"hybr", recs}, {"recycle", recs}});
  CHECK(multi ==
        "cycle,iter,lambda,resnorm,relerr,basis_count,wall_ms,method\n"
        "0,1,0.5,0.25,0.125,3,0,hybr\n"
        "0,1,0.5,0.25,0.125,3,0,recycle\n");
}

TEST_CASE("pgm images are plain text and rescaled") {
  Vector img(4);
  img << 0.0, 1.0, 0.5, 0.25;
  const std::string pgm = pgm_image(img, 2, 2);
  CHECK(pgm == "P2\n2 2\n255\n0 255\n128 64\n");
  CHECK(pgm_image(Vector::Zero(4), 2, 2) == "P2\n2 2\n255\n0 0\n0 0\n");
  CHECK_THROWS_AS(pgm_image(img, 3, 2), std::invalid_argument);
}

TEST_CASE("text files are written verbatim") {
  const std::string path = "test_io_tmp.txt";
  write_text(path, "hello\n");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "hello");
  in.close();
  std::remove(path.c_str());
}
