// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYBREC_GKB_HPP
#define HYBREC_GKB_HPP

#include <vector>

#include "hybrec/linops.hpp"

namespace hybrec {

/// Lower bidiagonal factor of the Golub-Kahan process: diagonal alpha_1..m
/// and subdiagonal beta_2..m+1, materializing to an (m+1) x m matrix.
struct Bidiagonal {
  std::vector<double> alphas;
  std::vector<double> betas;

  Index size() const { return Index(alphas.size()); }
  Matrix materialize() const;
};

/// State of the Golub-Kahan bidiagonalization A V_m = U_{m+1} B_m.
///
/// After init the state holds (u_1, v_1, alpha_1); each step appends
/// (u_{j+1}, beta_{j+1}) and (v_{j+1}, alpha_{j+1}). iterations() counts
/// completed columns of B, so after init + m steps the state exposes B_m,
/// V_m, U_{m+1} plus the lookahead pair (alpha_{m+1}, v_{m+1}) used by the
/// transpose relation A^T U_{m+1} = V_{m+1} L_{m+1}^T.
class GkbState {
public:
  static GkbState init(const LinearOp& A, const Vector& b);

  /// One bidiagonalization step; with reorth, new vectors get two passes of
  /// classical Gram-Schmidt against all stored columns before normalizing.
  /// Returns false on breakdown (exact invariant subspace); the state stays
  /// consistent and B for the current iteration count is still complete.
  bool step(const LinearOp& A, bool reorth);

  Index iterations() const { return Index(betas_.size()); }
  bool broke_down() const { return breakdown_; }

  double beta1() const { return beta1_; }
  Matrix V() const { return basisV_.leftCols(iterations()); }
  Matrix U() const { return basisU_; }
  Bidiagonal B() const;

  /// Lookahead quantities, valid while no breakdown has occurred.
  double alpha_next() const { return alphas_.back(); }
  Vector v_next() const { return basisV_.col(basisV_.cols() - 1); }
  /// All stored v columns including the lookahead (V_{m+1}).
  const Matrix& V_all() const { return basisV_; }
  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& betas() const { return betas_; }

private:
  GkbState() = default;

  Matrix basisU_, basisV_;
  std::vector<double> alphas_, betas_;
  double beta1_ = 0.0;
  double scale_ = 0.0;  // running max of |alpha|, |beta| for breakdown test
  bool breakdown_ = false;
};

/// Runs init + m steps (or until breakdown).
GkbState gkb_run(const LinearOp& A, const Vector& b, Index m, bool reorth);

/// LSQR-style iterates x_j = V_j y_j with y_j = argmin ||B_j y - beta1 e1||,
/// the projected problem solved by dense QR each iteration. Returns the
/// iterates up to m or breakdown.
std::vector<Vector> lsqr_solve(const LinearOp& A, const Vector& b, Index m,
                               bool reorth = false);

/// Two-pass classical Gram-Schmidt of w against the first ncols columns of Q.
void reorthogonalize(const Matrix& Q, Index ncols, Vector& w);

}  // namespace hybrec

#endif
