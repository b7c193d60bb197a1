// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#include "hybrec/driver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "hybrec/gkb.hpp"
#include "hybrec/recycle.hpp"

namespace hybrec {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0, bool timing) {
  if (!timing) return 0.0;
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double rel_error(const SolverConfig& cfg, const Vector& x) {
  if (cfg.x_true.size() == 0) return -1.0;
  const double tn = cfg.x_true.norm();
  return tn > 0 ? (x - cfg.x_true).norm() / tn : x.norm();
}

// Per-iteration parameter rule: wires the lift and true solution into the
// optimal rule and resolves the automatic WGCV weight through the tracker.
RegMethod resolve_reg(const SolverConfig& cfg,
                      const std::function<Vector(const Vector&)>& lift,
                      WgcvOmegaTracker& tracker, const Matrix& Bhat,
                      const Vector& chat) {
  RegMethod reg = cfg.reg;
  if (reg.kind == RegMethod::Kind::Optimal) {
    if (!reg.lift) reg.lift = lift;
    if (reg.x_true.size() == 0) reg.x_true = cfg.x_true;
  }
  if (reg.kind == RegMethod::Kind::Wgcv && reg.omega_auto) {
    RegMethod ctx;
    ctx.noise_norm = reg.noise_norm;
    ctx.tau = reg.tau;
    if (cfg.x_true.size() > 0) {
      ctx.lift = lift;
      ctx.x_true = cfg.x_true;
    }
    reg.omega = tracker.update(Bhat, chat, ctx);
    reg.omega_auto = false;
  }
  return reg;
}

// Relative flatness of the selection functional over the trailing window.
bool gcv_flat(const SolverConfig& cfg, const std::vector<double>& vals) {
  if (cfg.inner_stop != SolverConfig::InnerStop::GcvFlat) return false;
  const int w = cfg.gcv_flat_window;
  if (int(vals.size()) < w + 1) return false;
  for (size_t i = vals.size() - size_t(w); i < vals.size(); ++i) {
    const double prev = vals[i - 1];
    if (std::abs(vals[i] - prev) >= cfg.gcv_flat_tol * std::abs(prev))
      return false;
  }
  return true;
}

struct HybrRun {
  Vector x;
  std::vector<IterationRecord> records;
  Matrix V;     // basis of the final iterate
  Matrix Bhat;  // final projected matrix
  Vector chat;
  Vector y;
};

HybrRun run_hybr(const LinearOp& A, const Vector& b, const SolverConfig& cfg,
                 int cycle_tag) {
  HybrRun out;
  out.x = Vector::Zero(A.cols());
  GkbState s = GkbState::init(A, b);
  WgcvOmegaTracker tracker;
  std::vector<double> functionals;
  for (Index j = 1; j <= cfg.storage_limit; ++j) {
    const auto t0 = Clock::now();
    s.step(A, cfg.reorth);
    if (s.iterations() < j) break;
    const Matrix V = s.V();
    const Matrix B = s.B().materialize();
    Vector chat = Vector::Zero(j + 1);
    chat[0] = s.beta1();
    auto lift = [&V](const Vector& y) -> Vector { return V * y; };
    const RegMethod reg = resolve_reg(cfg, lift, tracker, B, chat);
    const LambdaChoice lc = select_lambda(B, chat, reg);
    out.x = V * lc.y;
    out.V = V;
    out.Bhat = B;
    out.chat = chat;
    out.y = lc.y;
    functionals.push_back(lc.functional);
    out.records.push_back({cycle_tag, j, lc.lambda, lc.resnorm,
                           rel_error(cfg, out.x), j,
                           elapsed_ms(t0, cfg.timing)});
    if (s.broke_down() || gcv_flat(cfg, functionals)) break;
  }
  return out;
}

// Keeps the whole basis when it is already at or below the target size;
// compressing would otherwise reject q >= column count.
CompressResult compress_or_keep(const Matrix& Vc, const Matrix& Bhat,
                                const Vector& chat, const Vector& y,
                                const CompressMethod& method) {
  if (Vc.cols() <= method.q) return CompressResult{Vc, Vc.cols()};
  return compress(Vc, Bhat, chat, y, method);
}

}  // namespace

SolveResult hybr(const LinearOp& A, const Vector& b,
                 const SolverConfig& config) {
  HybrRun run = run_hybr(A, b, config, 0);
  SolveResult out;
  out.x = run.x;
  out.records = std::move(run.records);
  return out;
}

SolveResult hybr_recycle(const LinearOp& A, const Vector& b,
                         const Matrix& W_init, const Vector& x_init,
                         const SolverConfig& config) {
  if (config.compress.q >= config.storage_limit)
    throw std::invalid_argument("hybr_recycle: need q < storage_limit");
  SolveResult out;
  Matrix W = W_init;
  Vector x =
      x_init.size() > 0 ? x_init : Vector(Vector::Zero(A.cols()));

  int cycles_done = 0;
  if (W.cols() == 0 && x.norm() == 0.0) {
    HybrRun base = run_hybr(A, b, config, 0);
    out.records = std::move(base.records);
    x = base.x;
    if (x.norm() == 0.0) {
      out.x = x;
      return out;
    }
    const CompressResult cr = compress_or_keep(base.V, base.Bhat, base.chat,
                                               base.y, config.compress);
    W = cr.W;
    cycles_done = 1;  // the fill pass counts as the first cycle
  }

  for (int cycle = 1; cycles_done < config.max_cycles;
       ++cycle, ++cycles_done) {
    if (x.norm() > 0.0) W = build_Wk(W, x);
    if (W.cols() == 0 || W.cols() >= config.storage_limit) break;

    RecycleState rs;
    try {
      rs = recycle_init(A, b, W);
    } catch (const NoExtensionNeeded&) {
      break;
    }
    const Index k = rs.k();
    WgcvOmegaTracker tracker;
    std::vector<double> functionals;
    ProjectedProblem pp;
    Vector y_last;
    bool solved = false;

    while (k + rs.ell() < config.storage_limit) {
      const auto t0 = Clock::now();
      const Index ell_before = rs.ell();
      const bool ok = rs.step(A, config.reorth);
      if (rs.ell() == ell_before) break;
      pp = assemble_projected(rs);
      auto lift = [&rs](const Vector& y) { return lift_solution(rs, y); };
      const RegMethod reg = resolve_reg(config, lift, tracker, pp.Bhat, pp.chat);
      const LambdaChoice lc = select_lambda(pp.Bhat, pp.chat, reg);
      y_last = lc.y;
      solved = true;
      functionals.push_back(lc.functional);
      out.records.push_back({cycle, rs.ell(), lc.lambda, lc.resnorm,
                             rel_error(config, lift_solution(rs, lc.y)),
                             k + rs.ell(), elapsed_ms(t0, config.timing)});
      if (!ok || gcv_flat(config, functionals)) break;
    }
    if (!solved) break;

    const Vector x_new = lift_solution(rs, y_last);
    Matrix Vc(A.cols(), k + rs.ell());
    Vc.leftCols(k) = rs.W();
    Vc.rightCols(rs.ell()) = rs.Vt();
    const CompressResult cr =
        compress_or_keep(Vc, pp.Bhat, pp.chat, y_last, config.compress);
    W = cr.W;
    const double xn = x.norm();
    const double change = xn > 0 ? (x_new - x).norm() / xn : 1.0;
    x = x_new;
    if (change < config.cycle_tol) break;
  }

  out.x = x;
  out.W = W;
  return out;
}

StreamResult stream_solve(const std::vector<Dataset>& data,
                          const SolverConfig& config, int approach) {
  if (data.empty())
    throw std::invalid_argument("stream_solve: empty problem list");
  if (approach < 1 || approach > 4)
    throw std::invalid_argument("stream_solve: approach must be 1..4");
  const Index n = data.front().first->cols();
  for (const auto& d : data)
    if (d.first->cols() != n)
      throw std::invalid_argument("stream_solve: column dims differ");

  StreamResult out;
  switch (approach) {
    case 1: {
      // One pass per dataset: a hybrid fill on the first, one recycling
      // cycle on each later one, the compressed basis carried forward.
      SolverConfig stage = config;
      stage.max_cycles = 1;
      Matrix W(n, 0);
      Vector x = Vector::Zero(n);
      for (size_t i = 0; i < data.size(); ++i) {
        SolveResult r = hybr_recycle(*data[i].first, data[i].second, W, x,
                                     stage);
        x = r.x;
        W = r.W;
        out.stage_solutions.push_back(x);
        for (auto& rec : r.records) {
          rec.cycle += int(i) * (config.max_cycles + 1);
          out.records.push_back(rec);
        }
      }
      out.x = x;
      break;
    }
    case 2: {
      SolveResult r = hybr(*data.back().first, data.back().second, config);
      out.x = r.x;
      out.stage_solutions.push_back(r.x);
      out.records = std::move(r.records);
      break;
    }
    case 3: {
      std::vector<LinearOpPtr> ops;
      Index total_rows = 0;
      for (const auto& d : data) {
        ops.push_back(d.first);
        total_rows += d.first->rows();
      }
      Vector b(total_rows);
      Index at = 0;
      for (const auto& d : data) {
        b.segment(at, d.second.size()) = d.second;
        at += d.second.size();
      }
      SolveResult r = hybr(*stack(ops), b, config);
      out.x = r.x;
      out.stage_solutions.push_back(r.x);
      out.records = std::move(r.records);
      break;
    }
    case 4: {
      Vector sum = Vector::Zero(n);
      for (size_t i = 0; i < data.size(); ++i) {
        SolveResult r = hybr(*data[i].first, data[i].second, config);
        out.stage_solutions.push_back(r.x);
        sum += r.x;
        for (auto& rec : r.records) {
          rec.cycle += int(i) * (config.max_cycles + 1);
          out.records.push_back(rec);
        }
      }
      out.x = sum / double(data.size());
      break;
    }
  }
  return out;
}

StorageCosts storage_costs(Index k, Index ell, Index M, Index N) {
  if (k < 0 || ell < 0 || M < 1 || N < 1)
    throw std::invalid_argument("storage_costs: bad dimensions");
  const double kk = double(k), ll = double(ell), m = kk + ll;
  const double Md = double(M), Nd = double(N);
  StorageCosts c;
  c.c_hybr = 2.0 * m + (Nd + 2.0) * m + Md;
  c.c_recycle =
      kk * kk / 2.0 + (Nd + Md + 2.0) * kk + 2.0 * ll + (Nd + 1.0) * ll + kk * ll;
  c.bound = m * m / 2.0 + (Nd + Md + 2.0) * m;
  return c;
}

}  // namespace hybrec
