// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#include "hybrec/compress.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "hybrec/gkb.hpp"

namespace hybrec {

namespace {

void check_inputs(const Matrix& Vc, Index q, double eps_tol) {
  if (Vc.cols() < 1) throw std::invalid_argument("compress: empty basis");
  if (q < 1 || q >= Vc.cols())
    throw std::invalid_argument("compress: need 1 <= q < basis size");
  if (eps_tol <= 0.0) throw std::invalid_argument("compress: eps_tol <= 0");
}

// I cap J selection shared by the solution-oriented and sparse strategies.
std::vector<Index> select_indices(const Vector& y, Index q, double eps_tol) {
  const Index m = y.size();
  std::vector<Index> order(static_cast<size_t>(m));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(y[a]) > std::abs(y[b]);
  });
  std::vector<char> in_top(size_t(m), 0);
  for (Index r = 0; r < std::min(q, m); ++r) in_top[size_t(order[size_t(r)])] = 1;

  std::vector<Index> keep;
  for (Index i = 0; i < m; ++i)
    if (in_top[size_t(i)] && std::abs(y[i]) > eps_tol) keep.push_back(i);
  if (keep.empty()) keep.push_back(order[0]);
  return keep;
}

CompressResult gather(const Matrix& Vc, const std::vector<Index>& idx) {
  CompressResult out;
  out.kept = Index(idx.size());
  out.W.resize(Vc.rows(), out.kept);
  for (Index j = 0; j < out.kept; ++j) out.W.col(j) = Vc.col(idx[size_t(j)]);
  return out;
}

}  // namespace

CompressResult compress_tsvd(const Matrix& Vc, const Matrix& Bhat, Index q,
                             double eps_tol) {
  check_inputs(Vc, q, eps_tol);
  Eigen::JacobiSVD<Matrix> svd(Bhat, Eigen::ComputeFullV);
  const Vector& sig = svd.singularValues();
  Index keep = q;
  if (sig[q - 1] < eps_tol) {
    keep = 0;
    for (Index i = 0; i < sig.size() && sig[i] >= eps_tol; ++i) ++keep;
    keep = std::max<Index>(keep, 1);
  }
  CompressResult out;
  out.kept = keep;
  out.W = Vc * svd.matrixV().leftCols(keep);
  return out;
}

CompressResult compress_solution(const Matrix& Vc, const Vector& y, Index q,
                                 double eps_tol) {
  check_inputs(Vc, q, eps_tol);
  if (y.size() != Vc.cols())
    throw std::invalid_argument("compress_solution: y/basis size mismatch");
  return gather(Vc, select_indices(y, q, eps_tol));
}

CompressResult compress_sparse(const Matrix& Vc, const Matrix& Bhat,
                               const Vector& chat, Index q, double eps_tol,
                               double mu) {
  check_inputs(Vc, q, eps_tol);
  if (mu < 0.0)
    mu = 0.01 * (Bhat.transpose() * chat).lpNorm<Eigen::Infinity>();
  const Vector y = fista_l1(Bhat, chat, mu);
  return gather(Vc, select_indices(y, q, eps_tol));
}

Vector fista_l1(const Matrix& B, const Vector& c, double mu, int max_iters,
                double tol) {
  if (mu < 0.0) throw std::invalid_argument("fista_l1: mu < 0");
  Eigen::JacobiSVD<Matrix> svd(B);
  const double sig1 = svd.singularValues().size() ? svd.singularValues()[0] : 0;
  if (sig1 == 0.0) return Vector::Zero(B.cols());
  const double L = 2.0 * sig1 * sig1;

  auto objective = [&](const Vector& y) {
    return (B * y - c).squaredNorm() + mu * y.lpNorm<1>();
  };
  auto prox_step = [&](const Vector& z) {
    Vector g = z - (2.0 / L) * (B.transpose() * (B * z - c));
    const double thr = mu / L;
    for (Index i = 0; i < g.size(); ++i) {
      if (g[i] > thr)
        g[i] -= thr;
      else if (g[i] < -thr)
        g[i] += thr;
      else
        g[i] = 0.0;
    }
    return g;
  };

  Vector y = Vector::Zero(B.cols()), y_prev = y, z = y;
  double t = 1.0;
  double f_prev = objective(y);
  for (int it = 0; it < max_iters; ++it) {
    Vector y_next = prox_step(z);
    double f_next = objective(y_next);
    if (f_next > f_prev) {
      // Momentum overshot; restart from the last iterate.
      t = 1.0;
      y_next = prox_step(y);
      f_next = objective(y_next);
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = y_next + ((t - 1.0) / t_next) * (y_next - y);
    y_prev = y;
    y = y_next;
    t = t_next;
    if (std::abs(f_prev - f_next) < tol * std::max(1.0, std::abs(f_prev)))
      break;
    f_prev = f_next;
  }
  return y;
}

CompressResult compress_rbd(const Matrix& Vc, const Matrix& Bhat, Index q,
                            double eps_tol) {
  check_inputs(Vc, q, eps_tol);
  const Matrix G = Bhat.transpose();
  if (G.norm() == 0.0) throw std::invalid_argument("compress_rbd: G is zero");

  Matrix S(G.rows(), q);
  Matrix resid = G;
  Index kept = 0;
  for (Index i = 0; i < q; ++i) {
    Index best = 0;
    double best_norm = -1.0;
    for (Index j = 0; j < resid.cols(); ++j) {
      const double nrm = resid.col(j).norm();
      if (nrm > best_norm + 1e-15 * std::max(1.0, best_norm)) {
        best_norm = nrm;
        best = j;
      }
    }
    if (best_norm <= 0.0) break;
    Vector s = resid.col(best);
    reorthogonalize(S, kept, s);
    const double snorm = s.norm();
    if (snorm == 0.0) break;
    S.col(kept) = s / snorm;
    ++kept;
    resid = G - S.leftCols(kept) * (S.leftCols(kept).transpose() * G);
    double err = 0.0;
    for (Index j = 0; j < resid.cols(); ++j)
      err = std::max(err, resid.col(j).norm());
    if (err <= eps_tol) break;
  }
  CompressResult out;
  out.kept = kept;
  out.W = Vc * S.leftCols(kept);
  return out;
}

CompressResult compress(const Matrix& Vc, const Matrix& Bhat,
                        const Vector& chat, const Vector& y,
                        const CompressMethod& method) {
  switch (method.kind) {
    case CompressMethod::Kind::Tsvd:
      return compress_tsvd(Vc, Bhat, method.q, method.eps_tol);
    case CompressMethod::Kind::SolutionOriented:
      return compress_solution(Vc, y, method.q, method.eps_tol);
    case CompressMethod::Kind::Sparse:
      return compress_sparse(Vc, Bhat, chat, method.q, method.eps_tol,
                             method.mu);
    case CompressMethod::Kind::Rbd:
      return compress_rbd(Vc, Bhat, method.q, method.eps_tol);
  }
  throw std::logic_error("compress: unknown method");
}

}  // namespace hybrec
