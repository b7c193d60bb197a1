// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "hybrec/projreg.hpp"
#include "oracles.hpp"

using namespace hybrec;

TEST_CASE("tikhonov filter matches the dense normal equations") {
  const Matrix B = oracles::random_matrix(9, 8, 1);
  const Vector c = oracles::random_vector(9, 2);
  for (double lambda : {0.01, 0.5, 3.0}) {
    const auto [y, resnorm] = tikhonov_projected(B, c, lambda);
    const Vector y_ref = oracles::dense_tikhonov(B, c, lambda);
    CHECK((y - y_ref).norm() <= 1e-10 * y_ref.norm());
    CHECK(resnorm == doctest::Approx((B * y_ref - c).norm()));
  }
}

TEST_CASE("lambda zero gives the least-squares solution") {
  const Matrix B = oracles::random_matrix(10, 6, 3);
  const Vector c = oracles::random_vector(10, 4);
  const auto [y, resnorm] = tikhonov_projected(B, c, 0.0);
  const Vector y_ref = B.colPivHouseholderQr().solve(c);
  CHECK((y - y_ref).norm() <= 1e-10 * y_ref.norm());
}

TEST_CASE("discrepancy principle root matches the hand solution") {
  // ||r(lambda)||^2 = (lambda^2/(1+lambda^2))^2 + 0.01; target 0.2
  Matrix B(2, 1);
  B << 1.0, 0.0;
  Vector c(2);
  c << 1.0, 0.1;
  RegMethod dp = RegMethod::dp(0.2 / 1.01, 1.01);
  const LambdaChoice lc = select_lambda(B, c, dp);
  CHECK(lc.lambda == doctest::Approx(0.45770).epsilon(1e-4));
  CHECK(lc.resnorm == doctest::Approx(0.2).epsilon(1e-10));
  CHECK_FALSE(lc.dp_infeasible);
}

TEST_CASE("infeasible discrepancy targets are flagged") {
  Matrix B(2, 1);
  B << 1.0, 0.0;
  Vector c(2);
  c << 1.0, 0.5;
  // even lambda = 0 leaves residual 0.5 > target 0.1
  const LambdaChoice lc = select_lambda(B, c, RegMethod::dp(0.1 / 1.01));
  CHECK(lc.dp_infeasible);
  CHECK(lc.lambda == 0.0);
}

TEST_CASE("optimal rule recovers the error minimizer") {
  const Matrix A = oracles::random_matrix(30, 10, 5);
  const Vector x_true = oracles::random_vector(10, 6);
  Vector b = A * x_true;
  b += 0.01 * b.norm() * oracles::random_vector(30, 7).normalized();

  // projected problem = the full problem in coordinates (identity subspace)
  RegMethod opt = RegMethod::optimal();
  opt.lift = [](const Vector& y) { return y; };
  opt.x_true = x_true;
  const LambdaChoice lc = select_lambda(A, b, opt);
  // no grid lambda can do better
  for (double t : {0.25, 0.5, 0.75}) {
    const double lam = std::pow(10.0, -6.0 + 6.0 * t);
    const auto [y, rn] = tikhonov_projected(A, b, lam);
    CHECK((lc.y - x_true).norm() <= (y - x_true).norm() + 1e-12);
  }
}

TEST_CASE("gcv picks an interior lambda on a noisy ill-posed problem") {
  // diagonal with decaying spectrum
  const Index n = 12;
  Matrix B = Matrix::Zero(n + 1, n);
  for (Index i = 0; i < n; ++i) B(i, i) = std::pow(10.0, -double(i) / 2.0);
  Vector y_true = Vector::Ones(n);
  Vector c = Vector::Zero(n + 1);
  c.head(n) = B.topRows(n) * y_true;
  c += 1e-3 * oracles::random_vector(n + 1, 8);

  const LambdaChoice lc = select_lambda(B, c, RegMethod::gcv());
  CHECK(lc.lambda > 0.0);
  CHECK(lc.lambda < B(0, 0));
  // gcv with omega = 1 coincides with wgcv
  const LambdaChoice lw = select_lambda(B, c, RegMethod::wgcv(1.0));
  CHECK(lc.lambda == doctest::Approx(lw.lambda));
}

TEST_CASE("upre accounts for the noise variance") {
  const Matrix B = oracles::random_matrix(20, 10, 9);
  Vector c = B * Vector::Ones(10);
  c += 0.05 * oracles::random_vector(20, 10);
  const double var = 0.05 * 0.05;
  const LambdaChoice lc = select_lambda(B, c, RegMethod::upre(var));
  CHECK(lc.lambda >= 0.0);
  CHECK(std::isfinite(lc.functional));
}

TEST_CASE("wgcv weight tracker stays in [0,1] and averages") {
  WgcvOmegaTracker tracker;
  CHECK(tracker.current() == 1.0);
  const Matrix B = oracles::random_matrix(12, 8, 11);
  const Vector c = oracles::random_vector(12, 12);
  RegMethod ctx;
  ctx.noise_norm = 0.1 * c.norm();
  const double w1 = tracker.update(B, c, ctx);
  CHECK(w1 >= 0.0);
  CHECK(w1 <= 1.0);
  const double w2 = tracker.update(B, c, ctx);
  CHECK(w2 == doctest::Approx(tracker.current()));
}
