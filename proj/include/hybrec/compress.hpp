// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYBREC_COMPRESS_HPP
#define HYBREC_COMPRESS_HPP

#include "hybrec/linops.hpp"

namespace hybrec {

/// Rule for shrinking the solution basis at the end of an outer cycle.
struct CompressMethod {
  enum class Kind { Tsvd, SolutionOriented, Sparse, Rbd };
  Kind kind = Kind::Tsvd;

  Index q = 10;           // most basis vectors to keep
  double eps_tol = 1e-6;  // truncation / selection threshold
  double mu = -1.0;       // sparse penalty; negative means automatic

  static CompressMethod tsvd(Index q, double eps_tol = 1e-6) {
    CompressMethod m{Kind::Tsvd};
    m.q = q;
    m.eps_tol = eps_tol;
    return m;
  }
  static CompressMethod solution(Index q, double eps_tol = 1e-6) {
    CompressMethod m{Kind::SolutionOriented};
    m.q = q;
    m.eps_tol = eps_tol;
    return m;
  }
  static CompressMethod sparse(Index q, double eps_tol = 1e-6,
                               double mu = -1.0) {
    CompressMethod m{Kind::Sparse};
    m.q = q;
    m.eps_tol = eps_tol;
    m.mu = mu;
    return m;
  }
  static CompressMethod rbd(Index q, double eps_tol = 1e-6) {
    CompressMethod m{Kind::Rbd};
    m.q = q;
    m.eps_tol = eps_tol;
    return m;
  }
};

/// Compressed basis (orthonormal columns spanning a subspace of range(Vc))
/// and the count kept.
struct CompressResult {
  Matrix W;
  Index kept = 0;
};

/// Keeps leading right singular directions of Bhat: W = Vc Phi. Keeps q of
/// them when sigma_q >= eps_tol, otherwise the largest i with
/// sigma_i >= eps_tol (at least one).
CompressResult compress_tsvd(const Matrix& Vc, const Matrix& Bhat, Index q,
                             double eps_tol);

/// Keeps columns of Vc indexed by I cap J in ascending order, where
/// I = {i : |y_i| > eps_tol} and J holds the q largest |y_i| (ties resolve
/// to the lower index). Empty intersection keeps the single column of
/// largest |y_i|.
CompressResult compress_solution(const Matrix& Vc, const Vector& y, Index q,
                                 double eps_tol);

/// Solves min ||Bhat y - chat||^2 + mu ||y||_1 by FISTA, then selects
/// columns like compress_solution on the sparse y. mu < 0 picks
/// 0.01 * ||Bhat^T chat||_inf.
CompressResult compress_sparse(const Matrix& Vc, const Matrix& Bhat,
                               const Vector& chat, Index q, double eps_tol,
                               double mu);

/// Greedy reduced basis decomposition of G = Bhat^T: repeatedly
/// orthonormalizes into S the column of G with the largest residual
/// ||G(:,j) - S S^T G(:,j)||, stopping when the max residual drops to
/// eps_tol or q columns are kept; W = Vc S. Throws on G = 0.
CompressResult compress_rbd(const Matrix& Vc, const Matrix& Bhat, Index q,
                            double eps_tol);

CompressResult compress(const Matrix& Vc, const Matrix& Bhat,
                        const Vector& chat, const Vector& y,
                        const CompressMethod& method);

/// FISTA with a restart safeguard for min ||B y - c||^2 + mu ||y||_1,
/// step 1/L with L = 2 sigma_1(B)^2; stops when the relative objective
/// change drops below tol.
Vector fista_l1(const Matrix& B, const Vector& c, double mu,
                int max_iters = 500, double tol = 1e-10);

}  // namespace hybrec

#endif
