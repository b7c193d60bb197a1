// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#include "hybrec/linops.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace hybrec {

Vector LinearOp::apply(const Vector& x) const {
  if (x.size() != cols())
    throw std::invalid_argument("apply: expected vector of length " +
                                std::to_string(cols()) + ", got " +
                                std::to_string(x.size()));
  return apply_impl(x);
}

Vector LinearOp::apply_transpose(const Vector& y) const {
  if (y.size() != rows())
    throw std::invalid_argument("apply_transpose: expected vector of length " +
                                std::to_string(rows()) + ", got " +
                                std::to_string(y.size()));
  return apply_transpose_impl(y);
}

DenseOp::DenseOp(Matrix A) : A_(std::move(A)) {
  if (A_.rows() <= 0 || A_.cols() <= 0)
    throw std::invalid_argument("DenseOp: dimensions must be positive");
  if (!A_.allFinite())
    throw std::invalid_argument("DenseOp: entries must be finite");
}

StackedOp::StackedOp(std::vector<LinearOpPtr> blocks)
    : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw std::invalid_argument("stack: empty operator list");
  ncols_ = blocks_.front()->cols();
  for (const auto& b : blocks_) {
    if (b->cols() != ncols_)
      throw std::invalid_argument("stack: mismatched column dimensions");
    nrows_ += b->rows();
  }
}

Vector StackedOp::apply_impl(const Vector& x) const {
  Vector out(nrows_);
  Index at = 0;
  for (const auto& b : blocks_) {
    out.segment(at, b->rows()) = b->apply(x);
    at += b->rows();
  }
  return out;
}

Vector StackedOp::apply_transpose_impl(const Vector& y) const {
  Vector out = Vector::Zero(ncols_);
  Index at = 0;
  for (const auto& b : blocks_) {
    out += b->apply_transpose(y.segment(at, b->rows()));
    at += b->rows();
  }
  return out;
}

LinearOpPtr stack(std::vector<LinearOpPtr> ops) {
  return std::make_shared<StackedOp>(std::move(ops));
}

Matrix materialize(const LinearOp& op) {
  const Index m = op.rows(), n = op.cols();
  if (m * n > Index(10'000'000))
    throw std::invalid_argument("materialize: size guard exceeded");
  Matrix A(m, n);
  Vector e = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    A.col(j) = op.apply(e);
    e[j] = 0.0;
  }
  return A;
}

double estimate_norm(const LinearOp& op, int iters, unsigned seed) {
  std::mt19937_64 gen(seed);
  Vector x(op.cols());
  for (Index i = 0; i < x.size(); ++i)
    x[i] = 2.0 * (double(gen() >> 11) * 0x1p-53) - 1.0;
  double nrm = 0.0;
  for (int it = 0; it < iters; ++it) {
    double nx = x.norm();
    if (nx == 0.0) return 0.0;
    x /= nx;
    Vector ax = op.apply(x);
    nrm = ax.norm();
    x = op.apply_transpose(ax);
  }
  return nrm;
}

}  // namespace hybrec
