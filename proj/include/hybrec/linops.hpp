// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYBREC_LINOPS_HPP
#define HYBREC_LINOPS_HPP

#include <Eigen/Dense>
#include <memory>
#include <vector>

namespace hybrec {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Matrix-free linear operator A with forward and transpose application.
///
/// Operators are immutable after construction and safe to share across
/// threads; all solver state lives outside the operator.
class LinearOp {
public:
  virtual ~LinearOp() = default;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;

  /// Returns A x. Throws std::invalid_argument on dimension mismatch.
  Vector apply(const Vector& x) const;
  /// Returns A^T y. Throws std::invalid_argument on dimension mismatch.
  Vector apply_transpose(const Vector& y) const;

protected:
  virtual Vector apply_impl(const Vector& x) const = 0;
  virtual Vector apply_transpose_impl(const Vector& y) const = 0;
};

using LinearOpPtr = std::shared_ptr<const LinearOp>;

class IdentityOp final : public LinearOp {
public:
  explicit IdentityOp(Index n) : n_(n) {}
  Index rows() const override { return n_; }
  Index cols() const override { return n_; }

protected:
  Vector apply_impl(const Vector& x) const override { return x; }
  Vector apply_transpose_impl(const Vector& y) const override { return y; }

private:
  Index n_;
};

class DenseOp final : public LinearOp {
public:
  explicit DenseOp(Matrix A);
  Index rows() const override { return A_.rows(); }
  Index cols() const override { return A_.cols(); }
  const Matrix& matrix() const { return A_; }

protected:
  Vector apply_impl(const Vector& x) const override { return A_ * x; }
  Vector apply_transpose_impl(const Vector& y) const override {
    return A_.transpose() * y;
  }

private:
  Matrix A_;
};

/// Vertical stack [A_1; ...; A_r] of operators sharing a column dimension.
/// apply concatenates the block outputs; apply_transpose sums the block
/// contributions A_i^T y_i.
class StackedOp final : public LinearOp {
public:
  explicit StackedOp(std::vector<LinearOpPtr> blocks);
  Index rows() const override { return nrows_; }
  Index cols() const override { return ncols_; }

protected:
  Vector apply_impl(const Vector& x) const override;
  Vector apply_transpose_impl(const Vector& y) const override;

private:
  std::vector<LinearOpPtr> blocks_;
  Index nrows_ = 0;
  Index ncols_ = 0;
};

LinearOpPtr stack(std::vector<LinearOpPtr> ops);

/// Materializes the operator column by column (A e_j). Guarded: throws if
/// rows*cols exceeds 1e7 entries. Test/oracle use only.
Matrix materialize(const LinearOp& op);

/// Crude 2-norm estimate via power iteration on A^T A (seeded, deterministic).
double estimate_norm(const LinearOp& op, int iters = 20, unsigned seed = 12345);

}  // namespace hybrec

#endif
