// Copyright 2026 The polyldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>

#include "polyldp/core/error.hpp"
#include "polyldp/core/random.hpp"
#include "polyldp/ldp/laplace.hpp"

namespace polyldp {

// Points j * step for integer j in [lo_index, hi_index], covering the clamp
// range [-pad, 1 + pad]. Messages carry the offset j - lo_index.
struct DiscreteGrid {
  double step = 0.0;
  std::int64_t lo_index = 0;
  std::int64_t hi_index = 0;

  std::uint64_t cardinality() const {
    return static_cast<std::uint64_t>(hi_index - lo_index + 1);
  }

  // ceil(log2(cardinality)), at least 1.
  int bits() const {
    const std::uint64_t c = cardinality();
    return c <= 2 ? 1 : static_cast<int>(std::bit_width(c - 1));
  }

  double value(std::uint64_t message) const {
    return static_cast<double>(lo_index + static_cast<std::int64_t>(message)) * step;
  }

  double lower() const { return static_cast<double>(lo_index) * step; }
  double upper() const { return static_cast<double>(hi_index) * step; }

  // Clamps z into the grid range and rounds to the nearest point.
  std::uint64_t index_of(double z) const {
    const double j = std::round(std::clamp(z, lower(), upper()) / step);
    const auto ji = std::clamp(static_cast<std::int64_t>(j), lo_index, hi_index);
    return static_cast<std::uint64_t>(ji - lo_index);
  }
};

inline DiscreteGrid make_discrete_grid(double step, double pad) {
  detail::require(step > 0.0 && step < 1.0, "make_discrete_grid: step must lie in (0, 1)");
  detail::require(pad >= 0.0, "make_discrete_grid: pad must be >= 0");
  DiscreteGrid g;
  g.step = step;
  g.lo_index = -static_cast<std::int64_t>(std::ceil(pad / step - 1e-9));
  g.hi_index = static_cast<std::int64_t>(std::ceil((1.0 + pad) / step - 1e-9));
  return g;
}

// Default step (1/(n eps)) sqrt(d/n log(d/beta)) with unit constant, capped
// below 1/2 so [0,1] always holds at least three points.
inline double default_grid_step(std::size_t n, std::size_t d, double epsilon,
                                double beta) {
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const double step = std::sqrt(dd / nn * std::log(dd / beta)) / (nn * epsilon);
  return std::min(step, 0.5);
}

// Clamp pad R = (10/eps) log(2n); the Laplace tail beyond R has mass
// (2n)^{-10}.
inline double default_clamp_pad(double epsilon, std::size_t n) {
  return 10.0 / epsilon * std::log(2.0 * static_cast<double>(n));
}

// v + Lap(1/eps), clamped to the grid range and rounded to the nearest point.
inline std::uint64_t discretized_randomize(double v, double epsilon,
                                           const DiscreteGrid& grid, Stream& rng) {
  detail::require(v >= 0.0 && v <= 1.0, "discretized_randomize: v must lie in [0, 1]");
  detail::require(epsilon > 0.0, "discretized_randomize: epsilon must be positive");
  return grid.index_of(v + laplace_noise(1.0, epsilon, rng));
}

// Exact Pr[discretized_randomize(v) = message] for finite epsilon: the
// Laplace mass of the rounding cell, with the end cells absorbing the tails.
inline double discretized_output_probability(double v, double epsilon,
                                             const DiscreteGrid& grid,
                                             std::uint64_t message) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double center = grid.value(message);
  const double lo = message == 0 ? -kInf : center - 0.5 * grid.step;
  const double hi = message + 1 == grid.cardinality() ? kInf : center + 0.5 * grid.step;
  return laplace_interval_mass(lo, hi, v, 1.0 / epsilon);
}

}  // namespace polyldp
