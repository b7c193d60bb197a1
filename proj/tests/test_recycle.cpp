// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "hybrec/projreg.hpp"
#include "hybrec/recycle.hpp"
#include "oracles.hpp"

using namespace hybrec;

namespace {
Matrix random_orthonormal(Index n, Index k, unsigned seed) {
  const Matrix M = oracles::random_matrix(n, k, seed);
  Eigen::HouseholderQR<Matrix> qr(M);
  return Matrix(qr.householderQ()).leftCols(k);
}
}  // namespace

TEST_CASE("build_Wk appends the deflated direction") {
  const Matrix W = random_orthonormal(20, 3, 1);
  const Vector x = oracles::random_vector(20, 2);
  const Matrix W2 = build_Wk(W, x);
  REQUIRE(W2.cols() == 4);
  CHECK(oracles::gram_error(W2) <= 1e-12);
  CHECK((W2.leftCols(3) - W).norm() == 0.0);
  // x lies in the extended range
  const Vector r = x - W2 * (W2.transpose() * x);
  CHECK(r.norm() <= 1e-10 * x.norm());
}

TEST_CASE("build_Wk keeps W when x is already inside") {
  const Matrix W = random_orthonormal(15, 4, 3);
  const Vector x = W * oracles::random_vector(4, 4);
  CHECK(build_Wk(W, x).cols() == 4);
  CHECK_THROWS_AS(build_Wk(W, Vector::Zero(15)), std::invalid_argument);
}

TEST_CASE("build_Wk accepts an empty prior basis") {
  const Vector x = oracles::random_vector(9, 5);
  const Matrix W = build_Wk(Matrix(9, 0), x);
  REQUIRE(W.cols() == 1);
  CHECK((W.col(0) - x / x.norm()).norm() <= 1e-14);
}

TEST_CASE("recycling factorization relation") {
  const Matrix A = oracles::random_matrix(50, 30, 6);
  const Vector b = oracles::random_vector(50, 7);
  DenseOp op(A);
  for (Index k : {Index(3), Index(8)}) {
    for (Index l : {Index(5), Index(10)}) {
      const Matrix W = random_orthonormal(30, k, unsigned(10 * k + l));
      RecycleState s = recycle_init(op, b, W);
      for (Index i = 0; i < l; ++i) REQUIRE(s.step(op, true));

      Matrix Z(30, k + l);
      Z << s.W(), s.Vt();
      Matrix Q(50, k + l + 1);
      Q << s.Y(), s.Ut();
      Matrix F = Matrix::Zero(k + l + 1, k + l);
      F.topLeftCorner(k, k) = s.R();
      F.topRightCorner(k, l) = s.C();
      F.bottomRightCorner(l + 1, l) = s.Bt().materialize();
      CHECK((A * Z - Q * F).norm() <= 1e-8 * F.norm());
      CHECK(oracles::gram_error(Q) <= 1e-10);
    }
  }
}

TEST_CASE("projected problem reproduces the constrained minimizer") {
  const Matrix A = oracles::random_matrix(40, 25, 8);
  const Vector b = oracles::random_vector(40, 9);
  DenseOp op(A);
  const Matrix W = random_orthonormal(25, 4, 10);
  RecycleState s = recycle_init(op, b, W);
  for (Index i = 0; i < 6; ++i) REQUIRE(s.step(op, true));
  const ProjectedProblem pp = assemble_projected(s);

  for (double lambda : {0.1, 1.0}) {
    const auto [y, resnorm] = tikhonov_projected(pp.Bhat, pp.chat, lambda);
    const Vector x = lift_solution(s, y);
    Matrix Z(25, s.k() + s.ell());
    Z << s.W(), s.Vt();
    const Vector x_ref = oracles::constrained_tikhonov(A, b, Z, lambda);
    CHECK((x - x_ref).norm() <= 1e-8 * x_ref.norm());
    // projected residual equals the full residual: b is inside range([Y U])
    CHECK((A * x - b).norm() == doctest::Approx(resnorm).epsilon(1e-8));
  }
}

TEST_CASE("residual already spanned raises NoExtensionNeeded") {
  IdentityOp id(10);
  Vector b = oracles::random_vector(10, 11);
  Matrix W(10, 1);
  W.col(0) = b / b.norm();
  CHECK_THROWS_AS(recycle_init(id, b, W), NoExtensionNeeded);
}

TEST_CASE("rank-deficient A W is rejected") {
  Matrix A = Matrix::Zero(8, 6);
  A(0, 0) = 1.0;  // all but one direction annihilated
  DenseOp op(A);
  const Matrix W = random_orthonormal(6, 3, 12);
  CHECK_THROWS_AS(recycle_init(op, oracles::random_vector(8, 13), W),
                  std::runtime_error);
}

TEST_CASE("chat carries the prior solution and residual split") {
  const Matrix A = oracles::random_matrix(30, 20, 14);
  const Vector b = oracles::random_vector(30, 15);
  DenseOp op(A);
  const Matrix W = random_orthonormal(20, 3, 16);
  RecycleState s = recycle_init(op, b, W);
  for (Index i = 0; i < 4; ++i) REQUIRE(s.step(op, true));
  const ProjectedProblem pp = assemble_projected(s);
  // with y = e_k (the prior solution), the projected residual must match
  // the true residual of xcheck = W e_k
  Vector y = Vector::Zero(s.k() + s.ell());
  y[s.k() - 1] = 1.0;
  const Vector xcheck = s.W().col(s.k() - 1);
  CHECK((pp.chat - pp.Bhat * y).norm() ==
        doctest::Approx((b - A * xcheck).norm()).epsilon(1e-10));
}
