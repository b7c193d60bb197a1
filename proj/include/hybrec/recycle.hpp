// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYBREC_RECYCLE_HPP
#define HYBREC_RECYCLE_HPP

#include <stdexcept>

#include "hybrec/gkb.hpp"
#include "hybrec/linops.hpp"

namespace hybrec {

/// Thrown by recycle_init when the residual already lies in range(Y): the
/// recycled space needs no Krylov extension and the caller can stop.
struct NoExtensionNeeded : std::runtime_error {
  NoExtensionNeeded() : std::runtime_error("residual already in range(Y)") {}
};

/// Projected problem of the recycling process:
///   Bhat = [R  C; 0  Btilde]   ((k+l+1) x (k+l))
///   chat = [zeta + R e_k; beta1t e_1]
struct ProjectedProblem {
  Matrix Bhat;
  Vector chat;
};

/// State of the recycling Golub-Kahan process. Holds the recycled factors
/// (W, Y, R), the residual data (zeta, beta1t), the extension factors
/// (Utilde, Vtilde, Btilde) built orthogonally to range(Y), and the cross
/// block C = Y^T A Vtilde accumulated one column per step.
///
/// Bookkeeping mirrors GkbState: ell() counts completed columns of Btilde
/// and a lookahead pair (alpha_{ell+1}, vtilde_{ell+1}) is kept.
class RecycleState {
public:
  Index k() const { return W_.cols(); }
  Index ell() const { return Index(betas_.size()); }
  bool broke_down() const { return breakdown_; }

  const Matrix& W() const { return W_; }
  const Matrix& Y() const { return Y_; }
  const Matrix& R() const { return R_; }
  const Vector& zeta() const { return zeta_; }
  double beta1t() const { return beta1t_; }
  Matrix Vt() const { return basisV_.leftCols(ell()); }
  Matrix Ut() const { return basisU_; }
  Bidiagonal Bt() const;
  Matrix C() const { return C_.leftCols(ell()); }
  double alpha_next() const { return alphas_.back(); }
  Vector v_next() const { return basisV_.col(basisV_.cols() - 1); }

  /// One recycling GKB step: the u-recurrence carries the (I - Y Y^T)
  /// projector; with reorth the v-recurrence additionally projects against
  /// W and both new vectors get two-pass Gram-Schmidt against the stored
  /// bases. Returns false on breakdown.
  bool step(const LinearOp& A, bool reorth);

  friend RecycleState recycle_init(const LinearOp& A, const Vector& b,
                                   const Matrix& W);

private:
  Matrix W_, Y_, R_, C_;
  Vector zeta_;
  double beta1t_ = 0.0;
  Matrix basisU_, basisV_;
  std::vector<double> alphas_, betas_;
  double scale_ = 0.0;
  bool breakdown_ = false;
};

/// Appends the deflated, normalized direction of x1 to W_prev. If x1 is
/// already in range(W_prev) (relative residual <= 1e-12) returns W_prev
/// unchanged. W_prev may have zero columns.
Matrix build_Wk(const Matrix& W_prev, const Vector& x1);

/// Skinny QR of A W (modified Gram-Schmidt + one reorthogonalization pass),
/// residual split and first extension vector. The last column of W must be
/// the normalized deflated prior solution direction. Throws
/// std::runtime_error on rank deficiency and NoExtensionNeeded when the
/// residual already lies in range(Y).
RecycleState recycle_init(const LinearOp& A, const Vector& b, const Matrix& W);

ProjectedProblem assemble_projected(const RecycleState& state);

/// Lifts projected coordinates to x = W y[0..k) + Vtilde y[k..k+l).
Vector lift_solution(const RecycleState& state, const Vector& y);

}  // namespace hybrec

#endif
