// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYBREC_ANALYSIS_HPP
#define HYBREC_ANALYSIS_HPP

#include <array>
#include <vector>

#include "hybrec/gkb.hpp"
#include "hybrec/projreg.hpp"
#include "hybrec/recycle.hpp"

namespace hybrec {

/// Reference pipeline for the subspace analysis: m steps of plain GKB
/// continued to m + ell (one run), truncated-SVD compression of V_m to
/// k - 1 directions, deflation of the regularized iterate x1, and ell
/// recycling steps against the same right-hand side.
struct AnalysisPipeline {
  GkbState full;  // at m + ell iterations
  RecycleState rec;
  Index m = 0;
  Index k = 0;
  Index ell = 0;
  Vector x1;
};

AnalysisPipeline run_pipeline(const LinearOp& A, const Vector& b, Index m,
                              Index k, Index ell,
                              const RegMethod& reg = RegMethod::gcv(),
                              bool reorth = true);

/// Orthogonal transforms relating the recycled factors to the reference
/// basis: Y = U T1, Utilde = U T2, W = V Z1, Vtilde = V Z2, with Tc and Zc
/// completing [T1 T2] and [Z1 Z2] to orthogonal matrices.
struct TransformPair {
  Matrix T1, T2, Tc;
  Matrix Z1, Z2, Zc;
  double containment_error = 0.0;  // worst reconstruction residual
};

TransformPair build_transforms(const GkbState& full, const RecycleState& rec,
                               unsigned seed = 7);

/// Completes the orthonormal columns of Q to a basis of the full space
/// using a seeded random matrix and Gram-Schmidt.
Matrix orthogonal_complement(const Matrix& Q, unsigned seed);

/// Frobenius norms of the six block identities of the transformed
/// reference matrix T^T B Z against [R C; 0 Btilde; 0 0]:
/// T1'BZ1 - R, T1'BZ2 - C, T2'BZ1, T2'BZ2 - Btilde, Tc'BZ1, Tc'BZ2.
std::array<double, 6> block_identity_norms(const TransformPair& pair,
                                           const GkbState& full,
                                           const RecycleState& rec);

struct ResidualBoundResult {
  double rhat_norm = 0.0;  // projected residual norm
  double r_norm = 0.0;     // factored form ||Zc' B' [T1 T2] rhat||
  double r_norm_direct = 0.0;  // residual of the transformed normal
                               // equations assembled blockwise
  double bound = 0.0;
  double exact_frob = 0.0;  // ||Zc' B' [T1 T2]||_F, the exact factor
  bool clamped = false;     // bound radicand fell below zero numerically
};

/// Evaluates ||r_lambda|| <= ||rhat_lambda|| (sigma_k^2 - r_kk^2 +
/// alpha_{m+1}^2 - ||C||_F^2 + alphat_{ell+1}^2)^{1/2} for the
/// truncated-SVD pipeline at a fixed lambda.
ResidualBoundResult residual_bound(const AnalysisPipeline& pipe,
                                   const TransformPair& pair, double lambda);

/// Same evaluation against a caller-supplied projected problem (used to
/// study perturbed or corrupted projected matrices).
ResidualBoundResult residual_bound(const AnalysisPipeline& pipe,
                                   const TransformPair& pair, double lambda,
                                   const ProjectedProblem& pp);

/// Max violation of sigma_{m-k+j}(B_full) <= sigma_j(Bhat) <= sigma_j(B_full)
/// over j; negative means every constraint holds strictly.
double interlacing_check(const Matrix& B_full, const Matrix& Bhat);

/// Trailing ell x ell upper bidiagonal block of B_{m+ell} (diagonal
/// beta_{m+2}..beta_{m+ell+1}, superdiagonal alpha_{m+2}..alpha_{m+ell}).
Matrix bbar_ell(const GkbState& full, Index m, Index ell);

/// The stacked block [alpha_{m+1} e_1^T; bbar_ell], (ell+1) x ell.
Matrix bbarbar_ell(const GkbState& full, Index m, Index ell);

struct FrobGap {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// ||B_full||_F - ||Bhat||_F <= max{sigma_k, ||Bbar_ell||_F}(m - k) +
/// |alpha_{m+1}|, both sides returned.
FrobGap frob_gap(const Matrix& B_full, const Matrix& Bhat, double sigma_k,
                 double alpha_m1, const Matrix& Bbar_ell);

struct ExtensionEnergyGap {
  double d = 0.0;        // | ||Bbarbar||_F^2 - ||Btilde||_F^2 |
  double norm_bb2 = 0.0; // ||Bbarbar||_F^2
  double norm_bt2 = 0.0; // ||Btilde||_F^2
  double sigma_k = 0.0;
};

ExtensionEnergyGap extension_energy_gap(const AnalysisPipeline& pipe);

struct AlphaTrend {
  std::vector<double> series;  // |alpha_j|, j = 1..m
  double slope = 0.0;          // least-squares slope of log|alpha_j|
};

AlphaTrend alpha_trend(const GkbState& full);

/// Largest principal angle (radians) of range(small) within range(big),
/// via the SVD of big^T small. Zero means containment.
double subspace_containment(const Matrix& small, const Matrix& big);

struct Sigma1Bound {
  double sigma1_full = 0.0;
  double estimate = 0.0;  // sqrt(sigma1(Bhat)^2 + sigma_k^2 - r_kk^2 +
                          //      sigma_{k+1}^2 + ... + sigma_m^2)
};

Sigma1Bound sigma1_bound(const AnalysisPipeline& pipe);

struct EtaDiagnostic {
  double bmt_eta_norm = 0.0;  // ||B_m^T eta||
  double r_kk = 0.0;
  double sigma_k = 0.0;
};

EtaDiagnostic eta_diagnostic(const AnalysisPipeline& pipe);

}  // namespace hybrec

#endif
