// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYBREC_IO_HPP
#define HYBREC_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "hybrec/driver.hpp"

namespace hybrec {

/// Shortest 17-significant-digit decimal form (printf %.17g); identical
/// bytes for identical doubles on every platform.
std::string fmt17(double v);

/// Per-iteration log as CSV with the fixed column set
/// cycle,iter,lambda,resnorm,relerr,basis_count,wall_ms.
std::string records_csv(const std::vector<IterationRecord>& records);

/// Multi-series variant: same columns plus a trailing "method" label.
std::string records_csv(
    const std::vector<std::pair<std::string, std::vector<IterationRecord>>>&
        series);

void write_text(const std::string& path, const std::string& content);

/// Plain-text PGM (P2) of a row-major nx x ny image, linearly rescaled to
/// 0..255 (constant images map to 0).
std::string pgm_image(const Vector& img, Index nx, Index ny);

}  // namespace hybrec

#endif
