// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#include "hybrec/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hybrec/rng.hpp"

namespace hybrec {

namespace {

// Unit-sum Gaussian kernel truncated at radius ceil(4*sigma).
std::vector<double> gaussian_kernel(double sigma) {
  const Index r = Index(std::ceil(4.0 * sigma));
  std::vector<double> w(2 * r + 1);
  double sum = 0.0;
  for (Index d = -r; d <= r; ++d) {
    w[d + r] = std::exp(-double(d * d) / (2.0 * sigma * sigma));
    sum += w[d + r];
  }
  for (double& v : w) v /= sum;
  return w;
}

// In-place 1-D convolution with a symmetric kernel, zero boundary
// conditions, along a strided slice of x.
void convolve_strided(const Vector& x, Vector& y, Index offset, Index stride,
                      Index len, const std::vector<double>& w) {
  const Index r = Index(w.size() - 1) / 2;
  for (Index i = 0; i < len; ++i) {
    double acc = 0.0;
    const Index dlo = std::max<Index>(-r, -i);
    const Index dhi = std::min<Index>(r, len - 1 - i);
    for (Index d = dlo; d <= dhi; ++d)
      acc += w[d + r] * x[offset + (i + d) * stride];
    y[offset + i * stride] = acc;
  }
}

class Blur1DOp final : public LinearOp {
public:
  Blur1DOp(Index n, double sigma) : n_(n), w_(gaussian_kernel(sigma)) {}
  Index rows() const override { return n_; }
  Index cols() const override { return n_; }
  const std::vector<double>& kernel() const { return w_; }

protected:
  Vector apply_impl(const Vector& x) const override {
    Vector y(n_);
    convolve_strided(x, y, 0, 1, n_, w_);
    return y;
  }
  // symmetric kernel with zero BC gives a symmetric Toeplitz matrix
  Vector apply_transpose_impl(const Vector& y) const override {
    return apply_impl(y);
  }

private:
  Index n_;
  std::vector<double> w_;
};

class Blur2DOp final : public LinearOp {
public:
  Blur2DOp(Index nx, Index ny, double sigma)
      : nx_(nx), ny_(ny), w_(gaussian_kernel(sigma)) {}
  Index rows() const override { return nx_ * ny_; }
  Index cols() const override { return nx_ * ny_; }

protected:
  Vector apply_impl(const Vector& x) const override {
    Vector t(x.size()), y(x.size());
    for (Index iy = 0; iy < ny_; ++iy)  // along rows (x direction)
      convolve_strided(x, t, iy * nx_, 1, nx_, w_);
    for (Index ix = 0; ix < nx_; ++ix)  // along columns (y direction)
      convolve_strided(t, y, ix, nx_, ny_, w_);
    return y;
  }
  Vector apply_transpose_impl(const Vector& y) const override {
    return apply_impl(y);
  }

private:
  Index nx_, ny_;
  std::vector<double> w_;
};

class TomoOp final : public LinearOp {
public:
  TomoOp(Index n, const std::vector<double>& angles_deg, Index n_rays)
      : n_(n), nrows_(Index(angles_deg.size()) * n_rays) {
    rows_.resize(size_t(nrows_));
    const double h = 2.0 / double(n);
    Index row = 0;
    for (double adeg : angles_deg) {
      const double rad = adeg * std::numbers::pi / 180.0;
      const double ex = std::cos(rad), ey = std::sin(rad);  // offset axis
      const double dx = -std::sin(rad), dy = std::cos(rad); // ray direction
      for (Index j = 0; j < n_rays; ++j) {
        const double t = -1.0 + (double(j) + 0.5) * (2.0 / double(n_rays));
        trace_ray(t * ex, t * ey, dx, dy, h, rows_[size_t(row)]);
        ++row;
      }
    }
  }

  Index rows() const override { return nrows_; }
  Index cols() const override { return n_ * n_; }

protected:
  Vector apply_impl(const Vector& x) const override {
    Vector y(nrows_);
    for (Index r = 0; r < nrows_; ++r) {
      double acc = 0.0;
      for (const auto& [p, len] : rows_[size_t(r)]) acc += len * x[p];
      y[r] = acc;
    }
    return y;
  }
  Vector apply_transpose_impl(const Vector& y) const override {
    Vector x = Vector::Zero(n_ * n_);
    for (Index r = 0; r < nrows_; ++r)
      for (const auto& [p, len] : rows_[size_t(r)]) x[p] += len * y[r];
    return x;
  }

private:
  // Exact pixel intersection lengths for the line (ox,oy) + s (dx,dy):
  // clip to [-1,1]^2, collect all gridline crossings, and classify each
  // segment by its midpoint.
  void trace_ray(double ox, double oy, double dx, double dy, double h,
                 std::vector<std::pair<Index, double>>& out) const {
    const double tiny = 1e-14;
    double s0 = -std::numeric_limits<double>::infinity();
    double s1 = std::numeric_limits<double>::infinity();
    auto clip = [&](double o, double d) {
      if (std::abs(d) > tiny) {
        double a = (-1.0 - o) / d, b = (1.0 - o) / d;
        if (a > b) std::swap(a, b);
        s0 = std::max(s0, a);
        s1 = std::min(s1, b);
        return true;
      }
      return std::abs(o) <= 1.0;
    };
    if (!clip(ox, dx) || !clip(oy, dy) || s1 <= s0 + tiny) return;

    std::vector<double> ss = {s0, s1};
    auto crossings = [&](double o, double d) {
      if (std::abs(d) <= tiny) return;
      for (Index i = 1; i < n_; ++i) {
        const double s = (-1.0 + double(i) * h - o) / d;
        if (s > s0 + tiny && s < s1 - tiny) ss.push_back(s);
      }
    };
    crossings(ox, dx);
    crossings(oy, dy);
    std::sort(ss.begin(), ss.end());

    for (size_t i = 0; i + 1 < ss.size(); ++i) {
      const double len = ss[i + 1] - ss[i];
      if (len <= tiny) continue;
      const double sm = 0.5 * (ss[i] + ss[i + 1]);
      const auto ix = Index((ox + sm * dx + 1.0) / h);
      const auto iy = Index((oy + sm * dy + 1.0) / h);
      if (ix < 0 || ix >= n_ || iy < 0 || iy >= n_) continue;
      out.emplace_back(iy * n_ + ix, len);
    }
  }

  Index n_, nrows_;
  std::vector<std::vector<std::pair<Index, double>>> rows_;
};

struct Ellipse {
  double value, a, b, x0, y0, phi_deg;
};

// Modified Shepp-Logan intensity table (values sum to [0,1] range).
constexpr Ellipse kSheppLogan[10] = {
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
};

}  // namespace

LinearOpPtr gaussian_blur_1d(Index n, double psf_sigma) {
  if (n < 1 || psf_sigma <= 0.0)
    throw std::invalid_argument("gaussian_blur_1d: nonpositive inputs");
  return std::make_shared<Blur1DOp>(n, psf_sigma);
}

LinearOpPtr gaussian_blur_2d(Index nx, Index ny, double psf_sigma) {
  if (nx < 1 || ny < 1 || psf_sigma <= 0.0)
    throw std::invalid_argument("gaussian_blur_2d: nonpositive inputs");
  return std::make_shared<Blur2DOp>(nx, ny, psf_sigma);
}

LinearOpPtr parallel_tomo(Index n, const std::vector<double>& angles_deg,
                          Index n_rays) {
  if (n < 2) throw std::invalid_argument("parallel_tomo: n must be >= 2");
  if (angles_deg.empty())
    throw std::invalid_argument("parallel_tomo: empty angle list");
  if (n_rays < 1) throw std::invalid_argument("parallel_tomo: n_rays < 1");
  return std::make_shared<TomoOp>(n, angles_deg, n_rays);
}

Vector shepp_logan(Index n) {
  if (n < 8) throw std::invalid_argument("shepp_logan: n must be >= 8");
  Vector img(n * n);
  const double h = 2.0 / double(n);
  for (Index iy = 0; iy < n; ++iy) {
    const double y = -1.0 + (double(iy) + 0.5) * h;
    for (Index ix = 0; ix < n; ++ix) {
      const double x = -1.0 + (double(ix) + 0.5) * h;
      double v = 0.0;
      for (const Ellipse& e : kSheppLogan) {
        const double phi = e.phi_deg * std::numbers::pi / 180.0;
        const double c = std::cos(phi), s = std::sin(phi);
        const double xr = (x - e.x0) * c + (y - e.y0) * s;
        const double yr = -(x - e.x0) * s + (y - e.y0) * c;
        if (xr * xr / (e.a * e.a) + yr * yr / (e.b * e.b) <= 1.0) v += e.value;
      }
      img[iy * n + ix] = std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

std::pair<Vector, double> add_noise(const Vector& b_exact, double level,
                                    std::uint64_t seed) {
  if (level < 0.0) throw std::invalid_argument("add_noise: negative level");
  if (level == 0.0) return {b_exact, 0.0};
  const double bnorm = b_exact.norm();
  if (bnorm == 0.0)
    throw std::invalid_argument("add_noise: zero data with positive level");
  GaussianSampler g(seed);
  Vector eps(b_exact.size());
  for (Index i = 0; i < eps.size(); ++i) eps[i] = g();
  const double target = level * bnorm;
  eps *= target / eps.norm();
  return {b_exact + eps, target};
}

NoisyProblem make_problem(LinearOpPtr op, Vector x_true, double noise_level,
                          std::uint64_t seed) {
  NoisyProblem p;
  p.op = std::move(op);
  p.x_true = std::move(x_true);
  p.b_exact = p.op->apply(p.x_true);
  auto [b, nn] = add_noise(p.b_exact, noise_level, seed);
  p.b = std::move(b);
  p.noise_level = noise_level;
  p.noise_norm = nn;
  p.seed = seed;
  return p;
}

Vector bumps_signal(Index n) {
  Vector x(n);
  for (Index i = 0; i < n; ++i) {
    const double t = (double(i) + 0.5) / double(n);
    double v = 0.75 * std::exp(-std::pow((t - 0.3) / 0.05, 2));
    v += 0.5 * std::exp(-std::pow((t - 0.55) / 0.1, 2));
    if (t > 0.75 && t < 0.88) v += 0.9;  // step feature
    x[i] = v;
  }
  return x;
}

}  // namespace hybrec
