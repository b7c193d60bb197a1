// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#include "hybrec/projreg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hybrec {

namespace {

// SVD-diagonalized view of min ||Bhat y - chat||^2 + lambda^2 ||y||^2.
struct Spectral {
  Vector sig;     // singular values, descending
  Vector d;       // left.transpose() * chat
  double dperp2;  // energy of chat outside the column space
  Index nr;       // rows of Bhat
  Matrix right;

  double resnorm2(double lambda) const {
    double r = dperp2;
    for (Index i = 0; i < sig.size(); ++i) {
      const double s2 = sig[i] * sig[i];
      const double f = (lambda * lambda) / (s2 + lambda * lambda);
      r += f * f * d[i] * d[i];
    }
    return r;
  }
  double trace_filter(double lambda) const {
    double t = 0;
    for (Index i = 0; i < sig.size(); ++i) {
      const double s2 = sig[i] * sig[i];
      t += s2 / (s2 + lambda * lambda);
    }
    return t;
  }
  double dresnorm2(double lambda) const {
    double r = 0;
    for (Index i = 0; i < sig.size(); ++i) {
      const double s2 = sig[i] * sig[i];
      const double den = s2 + lambda * lambda;
      r += 4.0 * lambda * lambda * lambda * s2 / (den * den * den) * d[i] * d[i];
    }
    return r;
  }
  double dtrace_filter(double lambda) const {
    double t = 0;
    for (Index i = 0; i < sig.size(); ++i) {
      const double s2 = sig[i] * sig[i];
      const double den = s2 + lambda * lambda;
      t -= 2.0 * lambda * s2 / (den * den);
    }
    return t;
  }
  Vector solve(double lambda) const {
    Vector y = Vector::Zero(right.rows());
    const double drop = sig.size() ? 1e-14 * sig[0] : 0.0;
    for (Index i = 0; i < sig.size(); ++i) {
      if (lambda == 0.0 && sig[i] <= drop) continue;
      const double f = sig[i] / (sig[i] * sig[i] + lambda * lambda);
      y += f * d[i] * right.col(i);
    }
    return y;
  }
};

Spectral decompose(const Matrix& Bhat, const Vector& chat) {
  if (Bhat.rows() != chat.size())
    throw std::invalid_argument("projreg: Bhat/chat dimension mismatch");
  Eigen::JacobiSVD<Matrix> svd(Bhat, Eigen::ComputeThinU | Eigen::ComputeFullV);
  Spectral sp;
  sp.sig = svd.singularValues();
  sp.d = svd.matrixU().transpose() * chat;
  sp.dperp2 = std::max(0.0, chat.squaredNorm() - sp.d.squaredNorm());
  sp.nr = Bhat.rows();
  sp.right = svd.matrixV();
  return sp;
}

double objective(const Spectral& sp, const RegMethod& m, double lambda) {
  const double nr = double(sp.nr);
  switch (m.kind) {
    case RegMethod::Kind::Gcv: {
      const double den = nr - sp.trace_filter(lambda);
      return nr * sp.resnorm2(lambda) / (den * den);
    }
    case RegMethod::Kind::Wgcv: {
      const double den = nr - m.omega * sp.trace_filter(lambda);
      return nr * sp.resnorm2(lambda) / (den * den);
    }
    case RegMethod::Kind::Upre:
      return sp.resnorm2(lambda) / nr +
             (2.0 * m.noise_variance / nr) * sp.trace_filter(lambda) -
             m.noise_variance;
    case RegMethod::Kind::Optimal: {
      if (!m.lift || m.x_true.size() == 0)
        throw std::invalid_argument(
            "projreg: optimal rule needs lift and x_true");
      return (m.lift(sp.solve(lambda)) - m.x_true).norm();
    }
    case RegMethod::Kind::Dp:
      return std::sqrt(sp.resnorm2(lambda));
  }
  return 0.0;
}

// Golden-section search for the minimum of f on [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a), e = a + phi * (b - a);
  double fc = f(c), fe = f(e);
  for (int it = 0; it < 80 && (b - a) > 1e-12 * std::max(1.0, b); ++it) {
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + phi * (b - a);
      fe = f(e);
    }
  }
  return 0.5 * (a + b);
}

LambdaChoice choose_dp(const Spectral& sp, const RegMethod& m) {
  LambdaChoice out;
  const double target = m.tau * m.noise_norm;
  const double r0 = std::sqrt(sp.resnorm2(0.0));
  if (r0 >= target) {
    // Even the unregularized residual misses the target; take lambda = 0.
    out.lambda = 0.0;
    out.dp_infeasible = true;
  } else {
    double hi = sp.sig.size() ? sp.sig[0] : 1.0;
    int guard = 0;
    while (std::sqrt(sp.resnorm2(hi)) < target && guard++ < 200) hi *= 2.0;
    if (std::sqrt(sp.resnorm2(hi)) < target) {
      out.lambda = hi;
      out.dp_infeasible = true;
    } else {
      double lo = 0.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (std::sqrt(sp.resnorm2(mid)) < target)
          lo = mid;
        else
          hi = mid;
      }
      out.lambda = 0.5 * (lo + hi);
    }
  }
  out.y = sp.solve(out.lambda);
  out.resnorm = std::sqrt(sp.resnorm2(out.lambda));
  out.functional = out.resnorm;
  return out;
}

}  // namespace

SmallSvd small_svd(const Matrix& B) {
  Eigen::JacobiSVD<Matrix> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return SmallSvd{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

std::pair<Vector, double> tikhonov_projected(const Matrix& Bhat,
                                             const Vector& chat,
                                             double lambda) {
  const Spectral sp = decompose(Bhat, chat);
  return {sp.solve(lambda), std::sqrt(sp.resnorm2(lambda))};
}

LambdaChoice select_lambda(const Matrix& Bhat, const Vector& chat,
                           const RegMethod& method) {
  const Spectral sp = decompose(Bhat, chat);
  if (method.kind == RegMethod::Kind::Dp) return choose_dp(sp, method);

  const double sig1 = sp.sig.size() ? sp.sig[0] : 1.0;
  if (sig1 <= 0.0) {
    LambdaChoice out;
    out.y = Vector::Zero(Bhat.cols());
    out.resnorm = chat.norm();
    return out;
  }
  const double lo = 1e-10 * sig1, hi = sig1;
  constexpr int kGrid = 200;
  auto f = [&](double lam) { return objective(sp, method, lam); };

  int best = 0;
  double best_val = f(lo);
  std::vector<double> grid(kGrid);
  grid[0] = lo;
  const double ratio = std::pow(hi / lo, 1.0 / double(kGrid - 1));
  for (int i = 1; i < kGrid; ++i) {
    grid[size_t(i)] = grid[size_t(i - 1)] * ratio;
    const double v = f(grid[size_t(i)]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = grid[size_t(std::max(0, best - 1))];
  const double b = grid[size_t(std::min(kGrid - 1, best + 1))];
  LambdaChoice out;
  out.lambda = golden_min(f, a, b);
  if (f(out.lambda) > best_val) out.lambda = grid[size_t(best)];
  out.y = sp.solve(out.lambda);
  out.resnorm = std::sqrt(sp.resnorm2(out.lambda));
  out.functional = f(out.lambda);
  return out;
}

double WgcvOmegaTracker::update(const Matrix& Bhat, const Vector& chat,
                                const RegMethod&) {
  const Spectral sp = decompose(Bhat, chat);
  double omega = 1.0;
  // Evaluate the weighted-GCV stationarity condition at the smallest
  // singular value of the projected matrix, a stable proxy for the
  // regularization scale of the current subproblem.
  const double lam = sp.sig.size() ? sp.sig[sp.sig.size() - 1] : -1.0;
  if (lam > 0.0) {
    const double R = sp.resnorm2(lam), Rp = sp.dresnorm2(lam);
    const double s = sp.trace_filter(lam), spr = sp.dtrace_filter(lam);
    const double den = Rp * s - 2.0 * R * spr;
    if (den != 0.0) omega = Rp * double(sp.nr) / den;
    omega = std::clamp(omega, 0.0, 1.0);
  }
  omegas_.push_back(omega);
  return current();
}

double WgcvOmegaTracker::current() const {
  if (omegas_.empty()) return 1.0;
  double sum = 0.0;
  for (double w : omegas_) sum += w;
  return sum / double(omegas_.size());
}

}  // namespace hybrec
