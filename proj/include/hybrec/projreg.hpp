// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYBREC_PROJREG_HPP
#define HYBREC_PROJREG_HPP

#include <functional>
#include <vector>

#include "hybrec/linops.hpp"

namespace hybrec {

/// Full SVD of a small projected matrix ((p+1) x p).
struct SmallSvd {
  Matrix left;      // (p+1) x (p+1)
  Vector singvals;  // descending
  Matrix right;     // p x p
};

SmallSvd small_svd(const Matrix& B);

/// Regularization-parameter selection rule for the projected problem.
struct RegMethod {
  enum class Kind { Optimal, Gcv, Wgcv, Upre, Dp };
  Kind kind = Kind::Gcv;

  double omega = 1.0;        // WGCV weight; tracked externally when auto
  bool omega_auto = false;
  double noise_variance = 0; // UPRE
  double noise_norm = 0;     // DP / WGCV-auto surrogate
  double tau = 1.01;         // DP safety factor

  // Optimal needs a lift into solution space and the true solution.
  std::function<Vector(const Vector&)> lift;
  Vector x_true;

  static RegMethod optimal() { return {Kind::Optimal}; }
  static RegMethod gcv() { return {Kind::Gcv}; }
  static RegMethod wgcv(double omega = 1.0) {
    RegMethod m{Kind::Wgcv};
    m.omega = omega;
    return m;
  }
  static RegMethod wgcv_auto() {
    RegMethod m{Kind::Wgcv};
    m.omega_auto = true;
    return m;
  }
  static RegMethod upre(double noise_variance) {
    RegMethod m{Kind::Upre};
    m.noise_variance = noise_variance;
    return m;
  }
  static RegMethod dp(double noise_norm, double tau = 1.01) {
    RegMethod m{Kind::Dp};
    m.noise_norm = noise_norm;
    m.tau = tau;
    return m;
  }
};

/// Tikhonov solution of the projected problem via SVD filtering:
/// y = sum_i sigma_i/(sigma_i^2 + lambda^2) (p_i^T chat) q_i. lambda = 0
/// falls back to the min-norm least-squares solution (zero singular values
/// dropped). Returns (y, ||Bhat y - chat||).
std::pair<Vector, double> tikhonov_projected(const Matrix& Bhat,
                                             const Vector& chat, double lambda);

struct LambdaChoice {
  double lambda = 0.0;
  Vector y;
  double resnorm = 0.0;
  double functional = 0.0;  // selected method's objective at lambda
  bool dp_infeasible = false;
};

/// Selects lambda by minimizing the method's functional over a 200-point
/// logarithmic grid [1e-10 sigma1, sigma1] with golden-section refinement
/// (DP instead root-finds the discrepancy equation by bisection).
LambdaChoice select_lambda(const Matrix& Bhat, const Vector& chat,
                           const RegMethod& method);

/// Running WGCV weight for the auto rule: at each outer iteration the omega
/// that makes WGCV stationary at the smallest singular value of the
/// projected matrix is recorded, and the mean over past iterations is used.
class WgcvOmegaTracker {
public:
  double update(const Matrix& Bhat, const Vector& chat, const RegMethod& ctx);
  double current() const;

private:
  std::vector<double> omegas_;
};

}  // namespace hybrec

#endif
