// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#include "hybrec/analysis.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "hybrec/compress.hpp"
#include "hybrec/rng.hpp"

namespace hybrec {

AnalysisPipeline run_pipeline(const LinearOp& A, const Vector& b, Index m,
                              Index k, Index ell, const RegMethod& reg,
                              bool reorth) {
  if (k < 2 || k > m || ell < 1)
    throw std::invalid_argument("run_pipeline: need 2 <= k <= m, ell >= 1");
  GkbState full = gkb_run(A, b, m + ell, reorth);
  if (full.iterations() < m + ell)
    throw std::runtime_error("run_pipeline: reference run broke down early");

  const Matrix Bfull = full.B().materialize();
  const Matrix Bm = Bfull.topLeftCorner(m + 1, m);
  const Matrix Vm = full.V().leftCols(m);
  Vector chat = Vector::Zero(m + 1);
  chat[0] = full.beta1();
  const LambdaChoice lc = select_lambda(Bm, chat, reg);
  const Vector x1 = Vm * lc.y;

  const CompressResult cr = compress_tsvd(Vm, Bm, k - 1, 1e-300);
  const Matrix W = build_Wk(cr.W, x1);
  RecycleState rec = recycle_init(A, b, W);
  for (Index i = 0; i < ell; ++i)
    if (!rec.step(A, reorth))
      throw std::runtime_error("run_pipeline: recycling run broke down early");

  return AnalysisPipeline{std::move(full), std::move(rec), m, W.cols(),
                          ell, x1};
}

Matrix orthogonal_complement(const Matrix& Q, unsigned seed) {
  const Index n = Q.rows(), p = Q.cols();
  if (p > n) throw std::invalid_argument("orthogonal_complement: p > n");
  GaussianSampler gauss(seed);
  Matrix C(n, n - p);
  for (Index j = 0; j < n - p; ++j) {
    Vector v(n);
    double nrm = 0.0;
    for (int attempt = 0; attempt < 16; ++attempt) {
      for (Index i = 0; i < n; ++i) v[i] = gauss();
      for (int pass = 0; pass < 2; ++pass) {
        v -= Q * (Q.transpose() * v);
        if (j > 0) {
          auto Cj = C.leftCols(j);
          v -= Cj * (Cj.transpose() * v);
        }
      }
      nrm = v.norm();
      if (nrm > 1e-10) break;
    }
    if (nrm <= 1e-10)
      throw std::runtime_error("orthogonal_complement: degenerate completion");
    C.col(j) = v / nrm;
  }
  return C;
}

TransformPair build_transforms(const GkbState& full, const RecycleState& rec,
                               unsigned seed) {
  const Matrix U = full.U();
  const Matrix V = full.V();
  TransformPair tp;
  tp.T1 = U.transpose() * rec.Y();
  tp.T2 = U.transpose() * rec.Ut();
  tp.Z1 = V.transpose() * rec.W();
  tp.Z2 = V.transpose() * rec.Vt();

  Matrix T12(tp.T1.rows(), tp.T1.cols() + tp.T2.cols());
  T12 << tp.T1, tp.T2;
  tp.Tc = orthogonal_complement(T12, seed);
  Matrix Z12(tp.Z1.rows(), tp.Z1.cols() + tp.Z2.cols());
  Z12 << tp.Z1, tp.Z2;
  tp.Zc = orthogonal_complement(Z12, seed + 1);

  double err = (rec.Y() - U * tp.T1).norm();
  err = std::max(err, (rec.Ut() - U * tp.T2).norm());
  err = std::max(err, (rec.W() - V * tp.Z1).norm());
  err = std::max(err, (rec.Vt() - V * tp.Z2).norm());
  tp.containment_error = err;
  return tp;
}

std::array<double, 6> block_identity_norms(const TransformPair& pair,
                                           const GkbState& full,
                                           const RecycleState& rec) {
  const Matrix B = full.B().materialize();
  const Matrix Bt = rec.Bt().materialize();
  return {
      (pair.T1.transpose() * B * pair.Z1 - rec.R()).norm(),
      (pair.T1.transpose() * B * pair.Z2 - rec.C()).norm(),
      (pair.T2.transpose() * B * pair.Z1).norm(),
      (pair.T2.transpose() * B * pair.Z2 - Bt).norm(),
      (pair.Tc.transpose() * B * pair.Z1).norm(),
      (pair.Tc.transpose() * B * pair.Z2).norm(),
  };
}

ResidualBoundResult residual_bound(const AnalysisPipeline& pipe,
                                   const TransformPair& pair, double lambda) {
  return residual_bound(pipe, pair, lambda, assemble_projected(pipe.rec));
}

ResidualBoundResult residual_bound(const AnalysisPipeline& pipe,
                                   const TransformPair& pair, double lambda,
                                   const ProjectedProblem& pp) {
  const RecycleState& rec = pipe.rec;
  const Matrix Bfull = pipe.full.B().materialize();
  const Matrix Bm = Bfull.topLeftCorner(pipe.m + 1, pipe.m);
  const Index k = rec.k();

  const auto [y, rhat_norm] = tikhonov_projected(pp.Bhat, pp.chat, lambda);
  const Vector rhat = pp.chat - pp.Bhat * y;

  Matrix T12(pair.T1.rows(), pair.T1.cols() + pair.T2.cols());
  T12 << pair.T1, pair.T2;
  const Matrix factor = pair.Zc.transpose() * Bfull.transpose() * T12;

  ResidualBoundResult out;
  out.rhat_norm = rhat_norm;
  out.r_norm = (factor * rhat).norm();
  out.exact_frob = factor.norm();

  // Residual of [y; 0] for the transformed normal equations, assembled from
  // the blocks directly. Its top block vanishes because y solves the
  // projected Tikhonov system; the bottom block is factor * rhat.
  const Vector top = pp.Bhat.transpose() * pp.chat -
                     (pp.Bhat.transpose() * (pp.Bhat * y) +
                      lambda * lambda * y);
  const Vector bottom = factor * pp.chat - factor * (pp.Bhat * y);
  out.r_norm_direct =
      std::sqrt(top.squaredNorm() + bottom.squaredNorm());

  const double sigma_k =
      Eigen::JacobiSVD<Matrix>(Bm).singularValues()[k - 1];
  const double r_kk = rec.R()(k - 1, k - 1);
  const double alpha_m1 = pipe.full.alphas()[size_t(pipe.m)];
  const double alphat_next = rec.broke_down() ? 0.0 : rec.alpha_next();
  double radicand = sigma_k * sigma_k - r_kk * r_kk + alpha_m1 * alpha_m1 -
                    rec.C().squaredNorm() + alphat_next * alphat_next;
  if (radicand < 0.0) {
    radicand = 0.0;
    out.clamped = true;
  }
  out.bound = rhat_norm * std::sqrt(radicand);
  return out;
}

double interlacing_check(const Matrix& B_full, const Matrix& Bhat) {
  const Vector sf = Eigen::JacobiSVD<Matrix>(B_full).singularValues();
  const Vector sh = Eigen::JacobiSVD<Matrix>(Bhat).singularValues();
  const Index shift = B_full.cols() - Bhat.cols();
  if (shift < 0)
    throw std::invalid_argument("interlacing_check: Bhat wider than B_full");
  double worst = -std::numeric_limits<double>::infinity();
  for (Index j = 0; j < sh.size(); ++j) {
    worst = std::max(worst, sh[j] - sf[j]);          // upper constraint
    worst = std::max(worst, sf[shift + j] - sh[j]);  // lower constraint
  }
  return worst;
}

Matrix bbar_ell(const GkbState& full, Index m, Index ell) {
  const auto& alphas = full.alphas();
  const auto& betas = full.betas();
  if (Index(betas.size()) < m + ell)
    throw std::invalid_argument("bbar_ell: run too short");
  Matrix B = Matrix::Zero(ell, ell);
  for (Index i = 0; i < ell; ++i) {
    B(i, i) = betas[size_t(m + i)];  // beta_{m+2+i}
    if (i + 1 < ell) B(i, i + 1) = alphas[size_t(m + 1 + i)];  // alpha_{m+2+i}
  }
  return B;
}

Matrix bbarbar_ell(const GkbState& full, Index m, Index ell) {
  Matrix B = Matrix::Zero(ell + 1, ell);
  B(0, 0) = full.alphas()[size_t(m)];  // alpha_{m+1}
  B.bottomRows(ell) = bbar_ell(full, m, ell);
  return B;
}

FrobGap frob_gap(const Matrix& B_full, const Matrix& Bhat, double sigma_k,
                 double alpha_m1, const Matrix& Bbar_ell) {
  FrobGap g;
  g.lhs = B_full.norm() - Bhat.norm();
  const Index m_minus_k = B_full.cols() - Bhat.cols();
  g.rhs = std::max(sigma_k, Bbar_ell.norm()) * double(m_minus_k) +
          std::abs(alpha_m1);
  return g;
}

ExtensionEnergyGap extension_energy_gap(const AnalysisPipeline& pipe) {
  if (pipe.ell < 1)
    throw std::invalid_argument("extension_energy_gap: ell must be >= 1");
  ExtensionEnergyGap g;
  g.norm_bb2 = bbarbar_ell(pipe.full, pipe.m, pipe.ell).squaredNorm();
  g.norm_bt2 = pipe.rec.Bt().materialize().squaredNorm();
  g.d = std::abs(g.norm_bb2 - g.norm_bt2);
  const Matrix Bm =
      pipe.full.B().materialize().topLeftCorner(pipe.m + 1, pipe.m);
  g.sigma_k = Eigen::JacobiSVD<Matrix>(Bm).singularValues()[pipe.k - 1];
  return g;
}

AlphaTrend alpha_trend(const GkbState& full) {
  AlphaTrend t;
  const Index m = full.iterations();
  for (Index j = 0; j < m; ++j)
    t.series.push_back(std::abs(full.alphas()[size_t(j)]));
  // least-squares slope of log|alpha_j| against j
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  Index n = 0;
  for (Index j = 0; j < m; ++j) {
    if (t.series[size_t(j)] <= 0.0) continue;
    const double x = double(j), y = std::log(t.series[size_t(j)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double den = double(n) * sxx - sx * sx;
  t.slope = den != 0.0 ? (double(n) * sxy - sx * sy) / den : 0.0;
  return t;
}

double subspace_containment(const Matrix& small, const Matrix& big) {
  if (small.cols() > big.cols())
    throw std::invalid_argument("subspace_containment: small wider than big");
  // sine-based formula: accurate for angles near zero, where acos of the
  // smallest cosine loses half the significant digits
  const Matrix resid = small - big * (big.transpose() * small);
  const Vector s = Eigen::JacobiSVD<Matrix>(resid).singularValues();
  return std::asin(std::clamp(s[0], 0.0, 1.0));
}

Sigma1Bound sigma1_bound(const AnalysisPipeline& pipe) {
  const Matrix Bfull = pipe.full.B().materialize();
  const Matrix Bm = Bfull.topLeftCorner(pipe.m + 1, pipe.m);
  const Vector sig = Eigen::JacobiSVD<Matrix>(Bm).singularValues();
  const ProjectedProblem pp = assemble_projected(pipe.rec);
  const double s1hat =
      Eigen::JacobiSVD<Matrix>(pp.Bhat).singularValues()[0];
  const Index k = pipe.rec.k();
  const double r_kk = pipe.rec.R()(k - 1, k - 1);
  double tail = 0.0;
  for (Index i = k; i < pipe.m; ++i) tail += sig[i] * sig[i];

  Sigma1Bound out;
  out.sigma1_full = Eigen::JacobiSVD<Matrix>(Bfull).singularValues()[0];
  out.estimate = std::sqrt(s1hat * s1hat + sig[k - 1] * sig[k - 1] -
                           r_kk * r_kk + tail);
  return out;
}

EtaDiagnostic eta_diagnostic(const AnalysisPipeline& pipe) {
  const Matrix Bfull = pipe.full.B().materialize();
  const Matrix Bm = Bfull.topLeftCorner(pipe.m + 1, pipe.m);
  const Matrix Vm = pipe.full.V().leftCols(pipe.m);
  const Index k = pipe.rec.k();
  const Vector xcheck = pipe.rec.W().col(k - 1);
  const Vector xi = Vm.transpose() * xcheck;
  const Vector eta_raw = Bm * xi;
  EtaDiagnostic d;
  d.r_kk = pipe.rec.R()(k - 1, k - 1);
  d.sigma_k = Eigen::JacobiSVD<Matrix>(Bm).singularValues()[k - 1];
  const double nrm = eta_raw.norm();
  d.bmt_eta_norm = nrm > 0 ? (Bm.transpose() * (eta_raw / nrm)).norm() : 0.0;
  return d;
}

}  // namespace hybrec
