// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYBREC_DRIVER_HPP
#define HYBREC_DRIVER_HPP

#include <utility>
#include <vector>

#include "hybrec/compress.hpp"
#include "hybrec/linops.hpp"
#include "hybrec/projreg.hpp"

namespace hybrec {

/// Outer-loop configuration shared by the hybrid and recycling solvers.
struct SolverConfig {
  Index storage_limit = 15;  // hard cap on stored solution-space basis vectors
  CompressMethod compress = CompressMethod::tsvd(10);
  RegMethod reg = RegMethod::wgcv_auto();
  bool reorth = false;
  int max_cycles = 5;

  enum class InnerStop { MaxFill, GcvFlat };
  InnerStop inner_stop = InnerStop::MaxFill;
  double gcv_flat_tol = 1e-4;
  int gcv_flat_window = 3;

  double cycle_tol = 1e-6;
  unsigned long long seed = 0;
  bool timing = false;  // off keeps logs byte-identical across runs

  Vector x_true;  // enables rel_error logging and the optimal rule
};

/// One inner iteration of either solver. rel_error is -1 when no true
/// solution was supplied. wall_ms is 0 unless timing is enabled.
struct IterationRecord {
  int cycle = 0;
  Index inner_iter = 0;
  double lambda = 0.0;
  double projected_resnorm = 0.0;
  double rel_error = -1.0;
  Index basis_count = 0;
  double wall_ms = 0.0;
};

struct SolveResult {
  Vector x;
  std::vector<IterationRecord> records;
  Matrix W;  // compressed basis after the final cycle (recycling solver)
};

/// Standard hybrid projection baseline: plain Golub-Kahan up to
/// storage_limit iterations with an automatic Tikhonov solve of each
/// projected problem.
SolveResult hybr(const LinearOp& A, const Vector& b,
                 const SolverConfig& config);

/// Hybrid projection with recycling and compression. Cycles of
/// build_Wk, recycle_init, inner extension to the storage limit, compress,
/// deflate. W_init may be empty; with x_init = 0 the first cycle is plain
/// hybr followed by compression.
SolveResult hybr_recycle(const LinearOp& A, const Vector& b,
                         const Matrix& W_init, const Vector& x_init,
                         const SolverConfig& config);

using Dataset = std::pair<LinearOpPtr, Vector>;

struct StreamResult {
  Vector x;
  std::vector<Vector> stage_solutions;
  std::vector<IterationRecord> records;
};

/// Multi-dataset workflows: 1 = sequential recycling across datasets,
/// 2 = hybrid solve of the last dataset only, 3 = hybrid solve of the
/// stacked system, 4 = average of independent per-dataset solves.
StreamResult stream_solve(const std::vector<Dataset>& data,
                          const SolverConfig& config, int approach);

/// Closed-form storage costs (in scalars) for a problem of size M x N.
struct StorageCosts {
  double c_hybr = 0.0;
  double c_recycle = 0.0;
  double bound = 0.0;
};

/// c_hybr evaluated at j = k + ell; c_recycle at (k, ell); bound at m = k + ell.
StorageCosts storage_costs(Index k, Index ell, Index M, Index N);

}  // namespace hybrec

#endif
