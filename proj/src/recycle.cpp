// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#include "hybrec/recycle.hpp"

#include <stdexcept>

namespace hybrec {

namespace {
constexpr double kBreakdownFactor = 1e-14;

// Skinny QR by modified Gram-Schmidt with one reorthogonalization pass.
// Keeps Y as explicit columns, which the recurrences need.
void mgs_qr(Matrix& Y, Matrix& R) {
  const Index k = Y.cols();
  R = Matrix::Zero(k, k);
  for (Index j = 0; j < k; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < j; ++i) {
        const double c = Y.col(i).dot(Y.col(j));
        Y.col(j) -= c * Y.col(i);
        R(i, j) += c;
      }
    }
    R(j, j) = Y.col(j).norm();
    if (R(j, j) > 0.0) Y.col(j) /= R(j, j);
  }
}
}  // namespace

Matrix build_Wk(const Matrix& W_prev, const Vector& x1) {
  const double xnorm = x1.norm();
  if (xnorm == 0.0) throw std::invalid_argument("build_Wk: x1 is zero");
  Vector d = x1;
  if (W_prev.cols() > 0) {
    for (int pass = 0; pass < 2; ++pass)
      d -= W_prev * (W_prev.transpose() * d);
  }
  const double dnorm = d.norm();
  if (dnorm <= 1e-12 * xnorm) return W_prev;  // x1 already in range(W_prev)
  Matrix W(x1.size(), W_prev.cols() + 1);
  if (W_prev.cols() > 0) W.leftCols(W_prev.cols()) = W_prev;
  W.col(W_prev.cols()) = d / dnorm;
  return W;
}

RecycleState recycle_init(const LinearOp& A, const Vector& b, const Matrix& W) {
  if (W.cols() < 1) throw std::invalid_argument("recycle_init: W is empty");
  RecycleState s;
  s.W_ = W;
  const Index k = W.cols();
  Matrix AW(A.rows(), k);
  for (Index j = 0; j < k; ++j) AW.col(j) = A.apply(W.col(j));
  const double awnorm = AW.norm();
  s.Y_ = AW;
  mgs_qr(s.Y_, s.R_);
  for (Index j = 0; j < k; ++j)
    if (std::abs(s.R_(j, j)) <= 1e-12 * awnorm)
      throw std::runtime_error("recycle_init: A W is rank deficient");

  const Vector xcheck = W.col(k - 1);
  const Vector rcheck = b - A.apply(xcheck);
  s.zeta_ = s.Y_.transpose() * rcheck;
  Vector btilde = rcheck - s.Y_ * s.zeta_;
  s.beta1t_ = btilde.norm();
  if (s.beta1t_ <= 1e-14 * b.norm()) throw NoExtensionNeeded();

  s.basisU_.resize(A.rows(), 1);
  s.basisU_.col(0) = btilde / s.beta1t_;
  Vector w = A.apply_transpose(s.basisU_.col(0));
  const double alpha1 = w.norm();
  if (alpha1 == 0.0)
    throw std::runtime_error("recycle_init: A^T u1 vanishes at start");
  s.basisV_.resize(A.cols(), 1);
  s.basisV_.col(0) = w / alpha1;
  s.alphas_.push_back(alpha1);
  s.scale_ = alpha1;
  s.C_.resize(k, 0);
  return s;
}

bool RecycleState::step(const LinearOp& A, bool reorth) {
  if (breakdown_) return false;
  const Index j = Index(alphas_.size());  // 1-based index of current vtilde
  const double tol = kBreakdownFactor * scale_;

  const Vector Av = A.apply(basisV_.col(j - 1));
  C_.conservativeResize(Eigen::NoChange, j);
  C_.col(j - 1) = Y_.transpose() * Av;

  Vector u = Av - Y_ * C_.col(j - 1) - alphas_.back() * basisU_.col(j - 1);
  if (reorth) {
    u -= Y_ * (Y_.transpose() * u);
    reorthogonalize(basisU_, j, u);
  }
  const double beta = u.norm();
  if (beta <= tol) {
    betas_.push_back(beta);
    breakdown_ = true;
    return false;
  }
  scale_ = std::max(scale_, beta);

  Vector v = A.apply_transpose(u / beta) - beta * basisV_.col(j - 1);
  if (reorth) {
    v -= W_ * (W_.transpose() * v);
    reorthogonalize(basisV_, j, v);
  }
  const double alpha = v.norm();
  if (alpha <= tol) {
    basisU_.conservativeResize(Eigen::NoChange, j + 1);
    basisU_.col(j) = u / beta;
    betas_.push_back(beta);
    breakdown_ = true;
    return false;
  }
  scale_ = std::max(scale_, alpha);

  basisU_.conservativeResize(Eigen::NoChange, j + 1);
  basisU_.col(j) = u / beta;
  basisV_.conservativeResize(Eigen::NoChange, j + 1);
  basisV_.col(j) = v / alpha;
  betas_.push_back(beta);
  alphas_.push_back(alpha);
  return true;
}

Bidiagonal RecycleState::Bt() const {
  const auto l = size_t(ell());
  return Bidiagonal{{alphas_.begin(), alphas_.begin() + long(l)},
                    {betas_.begin(), betas_.begin() + long(l)}};
}

ProjectedProblem assemble_projected(const RecycleState& s) {
  const Index k = s.k(), l = s.ell();
  if (l < 1) throw std::invalid_argument("assemble_projected: ell must be >= 1");
  ProjectedProblem p;
  p.Bhat = Matrix::Zero(k + l + 1, k + l);
  p.Bhat.topLeftCorner(k, k) = s.R();
  p.Bhat.topRightCorner(k, l) = s.C();
  p.Bhat.bottomRightCorner(l + 1, l) = s.Bt().materialize();
  p.chat = Vector::Zero(k + l + 1);
  p.chat.head(k) = s.zeta() + s.R().col(k - 1);
  p.chat[k] = s.beta1t();
  return p;
}

Vector lift_solution(const RecycleState& s, const Vector& y) {
  const Index k = s.k(), l = s.ell();
  if (y.size() != k + l)
    throw std::invalid_argument("lift_solution: dimension mismatch");
  return s.W() * y.head(k) + s.Vt() * y.tail(l);
}

}  // namespace hybrec
