// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYBREC_CONFIG_HPP
#define HYBREC_CONFIG_HPP

#include <string>

#include "hybrec/driver.hpp"

namespace hybrec {

/// Test-problem description for the experiment front end.
struct ProblemSpec {
  enum class Kind { Blur1d, Blur2d, Tomo };
  Kind kind = Kind::Blur1d;
  Index size = 64;         // signal length (1D) or image side (2D / tomo)
  double psf_sigma = 2.0;  // blur kernel width
  Index angles = 30;       // tomography projection count
  double noise_level = 0.002;
  unsigned long long seed = 1;
};

/// Parsed experiment file: problem, solver settings, and the parameters of
/// the streaming and verification subcommands.
struct ExperimentConfig {
  ProblemSpec problem;
  SolverConfig solver;
  std::string method = "hybr";  // hybr | recycle | compare

  int splits = 2;    // streaming dataset count
  int approach = 1;  // streaming workflow 1..4

  Index verify_m = 30;
  Index verify_k = 15;
  Index verify_ell = 10;
  int lambda_grid = 20;

  std::string out_dir = ".";
};

/// Parses and validates a JSON experiment file. Unknown keys and malformed
/// values raise std::runtime_error with a human-readable message.
ExperimentConfig parse_config(const std::string& json_text);

ExperimentConfig load_config(const std::string& path);

}  // namespace hybrec

#endif
