// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "hybrec/gkb.hpp"
#include "hybrec/linops.hpp"
#include "oracles.hpp"

using namespace hybrec;

TEST_CASE("bidiagonal recurrences hold") {
  const Matrix A = oracles::random_matrix(30, 20, 1);
  const Vector b = oracles::random_vector(30, 2);
  DenseOp op(A);
  GkbState s = gkb_run(op, b, 12, true);
  REQUIRE(s.iterations() == 12);

  const Matrix B = s.B().materialize();
  CHECK((A * s.V() - s.U() * B).norm() <= 1e-12 * B.norm());

  // transpose relation with the lookahead column
  Matrix L(B.rows(), B.cols() + 1);
  L << B, Vector::Unit(B.rows(), B.rows() - 1) * s.alpha_next();
  CHECK((A.transpose() * s.U() - s.V_all() * L.transpose()).norm() <=
        1e-12 * B.norm());
}

TEST_CASE("bases stay orthonormal with reorthogonalization") {
  const Matrix A = oracles::random_matrix(40, 25, 3);
  const Vector b = oracles::random_vector(40, 4);
  GkbState s = gkb_run(DenseOp(A), b, 20, true);
  CHECK(oracles::gram_error(s.U()) <= 1e-12);
  CHECK(oracles::gram_error(s.V()) <= 1e-12);
}

TEST_CASE("V spans the transpose Krylov space") {
  const Matrix A = oracles::random_matrix(25, 18, 5);
  const Vector b = oracles::random_vector(25, 6);
  GkbState s = gkb_run(DenseOp(A), b, 6, true);
  const Matrix K = oracles::krylov_basis(A, b, 6);
  CHECK(oracles::max_principal_angle(s.V(), K) <= 1e-8);
}

TEST_CASE("identity operator breaks down after one step") {
  IdentityOp id(8);
  const Vector b = oracles::random_vector(8, 7);
  GkbState s = GkbState::init(id, b);
  CHECK_FALSE(s.step(id, false));
  CHECK(s.broke_down());
  CHECK(s.iterations() == 1);  // B_1 is still complete
  const Matrix B = s.B().materialize();
  CHECK(B(0, 0) == doctest::Approx(1.0));
  CHECK(B(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("lsqr iterates approach the least-squares solution") {
  const Matrix A = oracles::random_matrix(20, 12, 8);
  const Vector b = oracles::random_vector(20, 9);
  const auto iterates = lsqr_solve(DenseOp(A), b, 12, true);
  REQUIRE(!iterates.empty());
  const Vector exact = A.colPivHouseholderQr().solve(b);
  CHECK((iterates.back() - exact).norm() <= 1e-8 * exact.norm());
  // monotone residual decrease
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& x : iterates) {
    const double r = (A * x - b).norm();
    CHECK(r <= prev + 1e-12);
    prev = r;
  }
}

TEST_CASE("init rejects a zero right-hand side") {
  DenseOp op(oracles::random_matrix(5, 4, 10));
  CHECK_THROWS_AS(GkbState::init(op, Vector::Zero(5)),
                  std::invalid_argument);
}
