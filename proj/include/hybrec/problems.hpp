// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYBREC_PROBLEMS_HPP
#define HYBREC_PROBLEMS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "hybrec/linops.hpp"

namespace hybrec {

/// A generated test problem: exact data b_exact = A x_true plus rescaled
/// Gaussian noise so that ||b - b_exact|| / ||b_exact|| equals noise_level.
struct NoisyProblem {
  LinearOpPtr op;
  Vector x_true;
  Vector b_exact;
  Vector b;
  double noise_level = 0.0;
  double noise_norm = 0.0;
  std::uint64_t seed = 0;
};

/// Symmetric Toeplitz convolution with a unit-sum Gaussian kernel, zero
/// boundary conditions, truncated at |d| <= ceil(4*psf_sigma).
LinearOpPtr gaussian_blur_1d(Index n, double psf_sigma);

/// Separable 2-D Gaussian blur (row blur composed with column blur) applied
/// matrix-free on vectorized nx-by-ny images, zero boundary conditions.
/// Pixel (ix, iy) sits at index iy*nx + ix.
LinearOpPtr gaussian_blur_2d(Index nx, Index ny, double psf_sigma);

/// Parallel-beam tomography on an n-by-n grid over [-1,1]^2. Entry
/// (ray, pixel) is the exact intersection length of the ray with the pixel
/// (Siddon-style traversal). For each angle (degrees), n_rays lines are
/// placed at equispaced bin centers across the grid extent and rotated by
/// the angle; rows are ordered angle-major.
LinearOpPtr parallel_tomo(Index n, const std::vector<double>& angles_deg,
                          Index n_rays);

/// Standard 10-ellipse Shepp-Logan phantom (modified intensities, values in
/// [0,1]) sampled at pixel centers of an n-by-n grid, returned vectorized
/// with pixel (ix, iy) at index iy*n + ix.
Vector shepp_logan(Index n);

/// Adds seeded Gaussian noise rescaled so ||eps||/||b_exact|| = level.
/// Returns the noisy vector and ||eps||.
std::pair<Vector, double> add_noise(const Vector& b_exact, double level,
                                    std::uint64_t seed);

NoisyProblem make_problem(LinearOpPtr op, Vector x_true, double noise_level,
                          std::uint64_t seed);

/// 1-D piecewise-smooth test signal used by the deblurring examples.
Vector bumps_signal(Index n);

}  // namespace hybrec

#endif
