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

// Locally private averaging of bounded scalars and vectors.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/random.hpp"
#include "polyldp/core/tensor.hpp"
#include "polyldp/ldp/laplace.hpp"

namespace polyldp {

// Each player sends v_i + Lap(b/eps); the server returns the mean of reports.
inline double ldp_avg_1d(std::span<const double> values, double b, double epsilon,
                         Stream& rng) {
  detail::require(!values.empty(), "ldp_avg_1d: need at least one value");
  detail::require(b > 0.0, "ldp_avg_1d: b must be positive");
  detail::require(epsilon > 0.0, "ldp_avg_1d: epsilon must be positive");
  detail::CompensatedSum sum;
  for (double v : values) {
    if (!(v >= 0.0 && v <= b)) throw DomainError("ldp_avg_1d: value outside [0, b]");
    sum.add(v + laplace_noise(b, epsilon, rng));
  }
  return sum.value() / static_cast<double>(values.size());
}

// One report of the coordinate-sampling vector average: the player picks a
// coordinate uniformly (data independent) and perturbs only that entry.
struct CoordinateReport {
  std::uint32_t coordinate = 0;
  double value = 0.0;  // dim * (v_j - offset_j) + Lap(dim * b / eps)
};

inline CoordinateReport ldp_avg_pd_player(std::span<const double> v, double b,
                                          double epsilon,
                                          std::span<const double> offsets,
                                          Stream& rng) {
  const std::size_t dim = v.size();
  const auto j = static_cast<std::uint32_t>(rng.below(dim));
  const double lo = offsets.empty() ? 0.0 : offsets[j];
  const double shifted = v[j] - lo;
  // Tolerate rounding at the range edges.
  if (!(shifted >= -1e-12 * b && shifted <= b * (1.0 + 1e-12))) {
    throw DomainError("ldp_avg_pd: coordinate outside its declared range");
  }
  const double scale = static_cast<double>(dim);
  return {j, scale * shifted + laplace_noise(scale * b, epsilon, rng)};
}

// Per-coordinate mean of report/dim over the players that sampled it, shifted
// back by the offset. Coordinates nobody sampled fall back to the range
// midpoint.
inline std::vector<double> ldp_avg_pd_server(std::span<const CoordinateReport> reports,
                                             std::size_t dim, double b,
                                             std::span<const double> offsets) {
  std::vector<detail::CompensatedSum> sums(dim);
  std::vector<std::size_t> counts(dim, 0);
  for (const auto& r : reports) {
    sums[r.coordinate].add(r.value);
    ++counts[r.coordinate];
  }
  std::vector<double> out(dim);
  const double scale = static_cast<double>(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double lo = offsets.empty() ? 0.0 : offsets[j];
    out[j] = counts[j] == 0
                 ? lo + 0.5 * b
                 : lo + sums[j].value() / (scale * static_cast<double>(counts[j]));
  }
  return out;
}

// p-dimensional LDP average with O(1) work per player. Coordinates of every
// vector must lie in [offset_j, offset_j + b] (offsets default to 0).
inline std::vector<double> ldp_avg_pd(std::span<const std::vector<double>> vectors,
                                      double b, double epsilon, Stream& rng,
                                      std::span<const double> offsets = {}) {
  detail::require(!vectors.empty(), "ldp_avg_pd: need at least one vector");
  detail::require(b > 0.0, "ldp_avg_pd: b must be positive");
  detail::require(epsilon > 0.0, "ldp_avg_pd: epsilon must be positive");
  const std::size_t dim = vectors.front().size();
  detail::require(dim >= 1, "ldp_avg_pd: vectors must be nonempty");
  detail::require(offsets.empty() || offsets.size() == dim,
                  "ldp_avg_pd: offsets length mismatch");
  std::vector<CoordinateReport> reports;
  reports.reserve(vectors.size());
  for (const auto& v : vectors) {
    detail::require(v.size() == dim, "ldp_avg_pd: ragged input");
    reports.push_back(ldp_avg_pd_player(v, b, epsilon, offsets, rng));
  }
  return ldp_avg_pd_server(reports, dim, b, offsets);
}

}  // namespace polyldp
