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

#include <cmath>
#include <optional>

#include "polyldp/core/error.hpp"
#include "polyldp/core/random.hpp"

namespace polyldp {

// Privacy budget and accuracy targets. epsilon may be +infinity, which every
// mechanism treats as "no noise" (the noiseless limit used by oracles).
struct PrivacyParams {
  double epsilon = 1.0;
  double beta = 0.05;
  std::optional<double> alpha;

  void validate() const {
    detail::require(epsilon > 0.0, "PrivacyParams: epsilon must be positive");
    detail::require(beta > 0.0 && beta < 1.0, "PrivacyParams: beta must lie in (0, 1)");
    if (alpha) detail::require(*alpha > 0.0, "PrivacyParams: alpha must be positive");
  }

  bool noiseless() const { return std::isinf(epsilon); }
};

// Laplace(0, scale) by inverse CDF from a single uniform draw.
inline double laplace_sample(double scale, Stream& rng) {
  detail::require(scale > 0.0, "laplace_sample: scale must be positive");
  count_noise_draw();
  const double d = rng.uniform_open() - 0.5;
  const double magnitude = -scale * std::log1p(-2.0 * std::fabs(d));
  return d < 0.0 ? -magnitude : magnitude;
}

// Laplace(0, sensitivity/epsilon), or exactly 0 when epsilon is infinite.
inline double laplace_noise(double sensitivity, double epsilon, Stream& rng) {
  if (std::isinf(epsilon) || sensitivity == 0.0) return 0.0;
  return laplace_sample(sensitivity / epsilon, rng);
}

// Laplace density with location `loc` and scale `scale`.
inline double laplace_density(double x, double loc, double scale) {
  return std::exp(-std::fabs(x - loc) / scale) / (2.0 * scale);
}

inline double laplace_cdf(double x, double loc, double scale) {
  const double z = (x - loc) / scale;
  return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

// Laplace mass of [lo, hi] (infinite ends allowed), evaluated on the tail
// side so far-out cells keep full relative precision.
inline double laplace_interval_mass(double lo, double hi, double loc, double scale) {
  auto tail = [&](double x) { return 0.5 * std::exp(-std::fabs(x - loc) / scale); };
  if (lo >= loc) return tail(lo) - (std::isinf(hi) ? 0.0 : tail(hi));
  if (hi <= loc) return tail(hi) - (std::isinf(lo) ? 0.0 : tail(lo));
  return 1.0 - (std::isinf(lo) ? 0.0 : tail(lo)) - (std::isinf(hi) ? 0.0 : tail(hi));
}

}  // namespace polyldp
