// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#include "hybrec/gkb.hpp"

#include <Eigen/QR>
#include <stdexcept>

namespace hybrec {

namespace {
constexpr double kBreakdownFactor = 1e-14;
}

Matrix Bidiagonal::materialize() const {
  const Index m = size();
  Matrix B = Matrix::Zero(m + 1, m);
  for (Index j = 0; j < m; ++j) {
    B(j, j) = alphas[size_t(j)];
    B(j + 1, j) = betas[size_t(j)];
  }
  return B;
}

void reorthogonalize(const Matrix& Q, Index ncols, Vector& w) {
  if (ncols == 0) return;
  auto Qv = Q.leftCols(ncols);
  for (int pass = 0; pass < 2; ++pass) w -= Qv * (Qv.transpose() * w);
}

GkbState GkbState::init(const LinearOp& A, const Vector& b) {
  GkbState s;
  s.beta1_ = b.norm();
  if (s.beta1_ == 0.0) throw std::invalid_argument("gkb_init: b is zero");
  s.basisU_.resize(A.rows(), 1);
  s.basisU_.col(0) = b / s.beta1_;
  Vector w = A.apply_transpose(s.basisU_.col(0));
  const double alpha1 = w.norm();
  if (alpha1 == 0.0)
    throw std::invalid_argument("gkb_init: A^T u1 is zero (breakdown at start)");
  s.basisV_.resize(A.cols(), 1);
  s.basisV_.col(0) = w / alpha1;
  s.alphas_.push_back(alpha1);
  s.scale_ = alpha1;
  return s;
}

bool GkbState::step(const LinearOp& A, bool reorth) {
  if (breakdown_) return false;
  const Index j = Index(alphas_.size());  // next column index (1-based j)
  const double tol = kBreakdownFactor * scale_;

  Vector u = A.apply(basisV_.col(j - 1)) - alphas_.back() * basisU_.col(j - 1);
  if (reorth) reorthogonalize(basisU_, j, u);
  const double beta = u.norm();
  if (beta <= tol) {
    betas_.push_back(beta);  // completes B_j with a vanishing subdiagonal
    breakdown_ = true;
    return false;
  }
  scale_ = std::max(scale_, beta);

  Vector v = A.apply_transpose(u / beta) - beta * basisV_.col(j - 1);
  if (reorth) reorthogonalize(basisV_, j, v);
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

Bidiagonal GkbState::B() const {
  const auto m = size_t(iterations());
  return Bidiagonal{{alphas_.begin(), alphas_.begin() + long(m)},
                    {betas_.begin(), betas_.begin() + long(m)}};
}

GkbState gkb_run(const LinearOp& A, const Vector& b, Index m, bool reorth) {
  GkbState s = GkbState::init(A, b);
  for (Index j = 0; j < m && s.step(A, reorth); ++j) {
  }
  return s;
}

std::vector<Vector> lsqr_solve(const LinearOp& A, const Vector& b, Index m,
                               bool reorth) {
  if (m < 1) throw std::invalid_argument("lsqr_solve: m must be >= 1");
  GkbState s = GkbState::init(A, b);
  std::vector<Vector> iterates;
  for (Index j = 1; j <= m; ++j) {
    const bool ok = s.step(A, reorth);
    if (s.iterations() < j) break;  // breakdown before completing column j
    Matrix Bj = s.B().materialize();
    Vector rhs = Vector::Zero(j + 1);
    rhs[0] = s.beta1();
    Vector y = Bj.colPivHouseholderQr().solve(rhs);
    iterates.push_back(s.V() * y);
    if (!ok) break;
  }
  return iterates;
}

}  // namespace hybrec
