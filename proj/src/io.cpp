// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#include "hybrec/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hybrec {

namespace {
constexpr char kHeader[] =
    "cycle,iter,lambda,resnorm,relerr,basis_count,wall_ms";

void append_record(std::ostringstream& out, const IterationRecord& r) {
  out << r.cycle << ',' << r.inner_iter << ',' << fmt17(r.lambda) << ','
      << fmt17(r.projected_resnorm) << ',' << fmt17(r.rel_error) << ','
      << r.basis_count << ',' << fmt17(r.wall_ms);
}
}  // namespace

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string records_csv(const std::vector<IterationRecord>& records) {
  std::ostringstream out;
  out << kHeader << '\n';
  for (const auto& r : records) {
    append_record(out, r);
    out << '\n';
  }
  return out.str();
}

std::string records_csv(
    const std::vector<std::pair<std::string, std::vector<IterationRecord>>>&
        series) {
  std::ostringstream out;
  out << kHeader << ",method\n";
  for (const auto& [name, records] : series)
    for (const auto& r : records) {
      append_record(out, r);
      out << ',' << name << '\n';
    }
  return out.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io: cannot open " + path);
  out << content;
  if (!out) throw std::runtime_error("io: write failed for " + path);
}

std::string pgm_image(const Vector& img, Index nx, Index ny) {
  if (img.size() != nx * ny)
    throw std::invalid_argument("pgm_image: size mismatch");
  const double lo = img.minCoeff(), hi = img.maxCoeff();
  const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
  std::ostringstream out;
  out << "P2\n" << nx << ' ' << ny << "\n255\n";
  for (Index y = 0; y < ny; ++y) {
    for (Index x = 0; x < nx; ++x) {
      const int v = int(std::lround((img[y * nx + x] - lo) * scale));
      out << v << (x + 1 < nx ? ' ' : '\n');
    }
  }
  return out.str();
}

}  // namespace hybrec
