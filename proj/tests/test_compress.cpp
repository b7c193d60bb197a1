// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "hybrec/compress.hpp"
#include "oracles.hpp"

using namespace hybrec;

namespace {
Matrix orthonormal_basis(Index n, Index k, unsigned seed) {
  Eigen::HouseholderQR<Matrix> qr(oracles::random_matrix(n, k, seed));
  return Matrix(qr.householderQ()).leftCols(k);
}

// (m+1) x m matrix with prescribed singular values
Matrix with_singular_values(const std::vector<double>& sig, unsigned seed) {
  const Index m = Index(sig.size());
  const Matrix P = orthonormal_basis(m + 1, m, seed);
  const Matrix Q = orthonormal_basis(m, m, seed + 1);
  Vector d(m);
  for (Index i = 0; i < m; ++i) d[i] = sig[size_t(i)];
  return P * d.asDiagonal() * Q.transpose();
}
}  // namespace

TEST_CASE("tsvd truncation follows the threshold rule") {
  const Matrix Vc = orthonormal_basis(20, 3, 1);
  const Matrix Bhat = with_singular_values({3.0, 2.0, 1.0}, 2);
  CHECK(compress_tsvd(Vc, Bhat, 2, 1.5).kept == 2);  // sigma_q below tol
  CHECK(compress_tsvd(Vc, Bhat, 2, 1e-99).kept == 2);
  CHECK(compress_tsvd(Vc, Bhat, 2, 99.0).kept == 1);  // fallback to one
}

TEST_CASE("tsvd output is orthonormal inside span(Vc)") {
  const Matrix Vc = orthonormal_basis(25, 6, 3);
  const Matrix Bhat = oracles::random_matrix(7, 6, 4);
  const CompressResult r = compress_tsvd(Vc, Bhat, 4, 1e-12);
  CHECK(r.kept == 4);
  CHECK(oracles::gram_error(r.W) <= 1e-10);
  CHECK(oracles::max_principal_angle(r.W, Vc) <= 1e-8);
}

TEST_CASE("solution-oriented selection keeps large coefficients") {
  const Matrix Vc = orthonormal_basis(12, 3, 5);
  Vector y(3);
  y << 0.5, 0.0, 0.3;
  const CompressResult r = compress_solution(Vc, y, 2, 0.1);
  REQUIRE(r.kept == 2);
  CHECK((r.W.col(0) - Vc.col(0)).norm() == 0.0);
  CHECK((r.W.col(1) - Vc.col(2)).norm() == 0.0);

  CHECK(compress_solution(Vc, y, 1, 0.1).kept == 1);
  // all coefficients under the threshold: single-column fallback
  Vector tiny = Vector::Constant(3, 1e-9);
  tiny[1] = 2e-9;
  const CompressResult f = compress_solution(Vc, tiny, 2, 1e-3);
  REQUIRE(f.kept == 1);
  CHECK((f.W.col(0) - Vc.col(1)).norm() == 0.0);
}

TEST_CASE("ties resolve to the lower index") {
  const Matrix Vc = orthonormal_basis(10, 4, 6);
  Vector y(4);
  y << 0.3, -0.3, 0.3, 0.1;
  const CompressResult r = compress_solution(Vc, y, 2, 0.05);
  REQUIRE(r.kept == 2);
  CHECK((r.W.col(0) - Vc.col(0)).norm() == 0.0);
  CHECK((r.W.col(1) - Vc.col(1)).norm() == 0.0);
}

TEST_CASE("fista matches hand-computed minimizers") {
  Matrix B(2, 1);
  B << 1.0, 0.0;
  Vector c(2);
  c << 1.0, 0.0;
  // stationarity of (y-1)^2 + 0.4|y| at y = 0.8
  CHECK(fista_l1(B, c, 0.4)[0] == doctest::Approx(0.8).epsilon(1e-8));
  // full shrinkage for mu >= 2 ||B'c||_inf
  CHECK(fista_l1(B, c, 2.0)[0] == 0.0);
}

TEST_CASE("fista with mu = 0 solves least squares") {
  const Matrix B = oracles::random_matrix(10, 5, 7);
  const Vector c = oracles::random_vector(10, 8);
  const Vector y = fista_l1(B, c, 0.0, 5000, 1e-16);
  const Vector ref = B.colPivHouseholderQr().solve(c);
  CHECK((y - ref).norm() <= 1e-6 * ref.norm());
}

TEST_CASE("sparse compression selects via the l1 solution") {
  const Matrix Vc = orthonormal_basis(15, 4, 9);
  const Matrix Bhat = with_singular_values({2.0, 1.5, 1.0, 0.5}, 10);
  const Vector chat = oracles::random_vector(5, 11);
  const CompressResult r = compress_sparse(Vc, Bhat, chat, 2, 1e-10, -1.0);
  CHECK(r.kept >= 1);
  CHECK(r.kept <= 2);
  CHECK(oracles::gram_error(r.W) <= 1e-10);
  // huge penalty shrinks everything: fallback single column
  const CompressResult f = compress_sparse(Vc, Bhat, chat, 2, 1e-10, 1e6);
  CHECK(f.kept == 1);
}

TEST_CASE("greedy residual selection on the transposed matrix") {
  const Matrix Vc = orthonormal_basis(9, 3, 12);
  // G = Bhat' = I3 padded with a zero column: greedy keeps 2 of rank 3
  Matrix Bhat = Matrix::Zero(4, 3);
  Bhat.topLeftCorner(3, 3).setIdentity();
  const CompressResult r = compress_rbd(Vc, Bhat, 2, 1e-12);
  CHECK(r.kept == 2);
  CHECK(oracles::gram_error(r.W) <= 1e-10);

  // rank-one G stops after one direction
  Matrix B1 = Matrix::Zero(4, 3);
  B1.row(0) << 1.0, 2.0, 3.0;
  CHECK(compress_rbd(Vc, B1, 2, 1e-9).kept == 1);

  CHECK_THROWS_AS(compress_rbd(Vc, Matrix::Zero(4, 3), 2, 1e-9),
                  std::invalid_argument);
}

TEST_CASE("every strategy respects the budget and the span") {
  const Matrix Vc = orthonormal_basis(30, 8, 13);
  const Matrix Bhat = with_singular_values(
      {5.0, 3.0, 2.0, 1.0, 0.5, 0.2, 0.1, 0.05}, 14);
  const Vector chat = oracles::random_vector(9, 15);
  const Vector y = Bhat.colPivHouseholderQr().solve(chat);
  for (auto method :
       {CompressMethod::tsvd(4, 1e-12), CompressMethod::solution(4, 1e-12),
        CompressMethod::sparse(4, 1e-12), CompressMethod::rbd(4, 1e-12)}) {
    const CompressResult r = compress(Vc, Bhat, chat, y, method);
    CHECK(r.kept >= 1);
    CHECK(r.kept <= 4);
    CHECK(oracles::gram_error(r.W) <= 1e-10);
    CHECK(oracles::max_principal_angle(r.W, Vc) <= 1e-8);
  }
}
