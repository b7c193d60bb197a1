// Copyright (c) the hybrec contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HYBREC_RNG_HPP
#define HYBREC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace hybrec {

/// Reproducible standard-normal sampler: mersenne twister (mt19937_64, fully
/// specified by the C++ standard) feeding a Box-Muller transform. Same seed
/// gives bit-identical draws on every platform.
class GaussianSampler {
public:
  explicit GaussianSampler(std::uint64_t seed) : gen_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // uniforms in (0,1); the +0.5 offset keeps u1 away from 0 for the log
    const double u1 = (double(gen_() >> 11) + 0.5) * 0x1p-53;
    const double u2 = (double(gen_() >> 11) + 0.5) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hybrec

#endif
