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

// Gaussian width E sup_{a in S} <a, g> by Monte Carlo, with closed forms for
// the built-in constraint sets.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/parallel.hpp"
#include "polyldp/core/random.hpp"
#include "polyldp/erm/constraint.hpp"

namespace polyldp {

struct WidthEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

namespace detail {

// Each trial draws its own standard gaussian vector from a per-trial stream.
template <class Sup>
WidthEstimate width_monte_carlo(std::size_t dim, std::size_t trials, std::uint64_t seed,
                                unsigned threads, const Sup& sup) {
  detail::require(trials >= 2, "gaussian_width_mc: need at least 2 trials");
  std::vector<double> samples(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Stream rng = Stream::derive(seed, StreamPurpose::kWidth, t);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> g(dim);
    for (auto& v : g) v = normal(rng);
    samples[t] = sup(g);
  });
  double mean = 0.0, m2 = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const double d = samples[t] - mean;
    mean += d / static_cast<double>(t + 1);
    m2 += d * (samples[t] - mean);
  }
  const double var = m2 / static_cast<double>(trials - 1);
  return {mean, std::sqrt(var / static_cast<double>(trials))};
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Trapezoid rule of f over [lo, hi] with `steps` panels.
template <class F>
double integrate(const F& f, double lo, double hi, int steps) {
  const double h = (hi - lo) / steps;
  double s = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < steps; ++i) s += f(lo + i * h);
  return s * h;
}

}  // namespace detail

inline WidthEstimate gaussian_width_mc(const ConstraintSet& C, std::size_t trials = 10'000,
                                       std::uint64_t seed = 0, unsigned threads = 1) {
  return detail::width_monte_carlo(C.dim(), trials, seed, threads,
                                   [&](std::span<const double> g) { return C.support(g); });
}

// Width of a finite point set: E max_i <a_i, g>.
inline WidthEstimate gaussian_width_mc(std::span<const std::vector<double>> points,
                                       std::size_t trials = 10'000, std::uint64_t seed = 0,
                                       unsigned threads = 1) {
  detail::require(!points.empty(), "gaussian_width_mc: empty point set");
  const std::size_t dim = points.front().size();
  return detail::width_monte_carlo(dim, trials, seed, threads, [&](std::span<const double> g) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& a : points) {
      double s = 0.0;
      for (std::size_t i = 0; i < dim; ++i) s += a[i] * g[i];
      best = std::max(best, s);
    }
    return best;
  });
}

// E ||g||_2 = sqrt(2) Gamma((p+1)/2) / Gamma(p/2).
inline double expected_gaussian_norm(int p) {
  return std::numbers::sqrt2 * std::exp(std::lgamma((p + 1) / 2.0) - std::lgamma(p / 2.0));
}

// E ||g||_inf = int_0^inf 1 - (2 Phi(t) - 1)^p dt.
inline double expected_gaussian_max_abs(int p) {
  return detail::integrate(
      [p](double t) { return 1.0 - std::pow(2.0 * detail::normal_cdf(t) - 1.0, p); }, 0.0, 12.0,
      24'000);
}

// E max_i g_i = int_0^inf (1 - Phi(t)^p) dt - int_{-inf}^0 Phi(t)^p dt.
inline double expected_gaussian_max(int p) {
  const double pos = detail::integrate(
      [p](double t) { return 1.0 - std::pow(detail::normal_cdf(t), p); }, 0.0, 12.0, 24'000);
  const double neg = detail::integrate(
      [p](double t) { return std::pow(detail::normal_cdf(t), p); }, -12.0, 0.0, 24'000);
  return pos - neg;
}

// Closed-form width of a built-in set (the center contributes 0 in
// expectation).
inline double gaussian_width_exact(const ConstraintSet& C) {
  const int p = C.dim();
  switch (C.kind()) {
    case ConstraintKind::kBox:
      return C.radius() * p * std::sqrt(2.0 / std::numbers::pi);
    case ConstraintKind::kL2Ball:
      return C.radius() * expected_gaussian_norm(p);
    case ConstraintKind::kL1Ball:
      return C.radius() * expected_gaussian_max_abs(p);
    case ConstraintKind::kSimplex:
      return C.radius() * expected_gaussian_max(p);
  }
  throw DomainError("gaussian_width_exact: unsupported set");
}

}  // namespace polyldp
