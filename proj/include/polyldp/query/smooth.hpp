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

// Smooth queries f on [-1,1]^p answered from the released averages of the
// basis values prod_j cos(r_j arccos x_j) = prod_j T_{r_j}(x_j).

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/tensor.hpp"
#include "polyldp/poly/trig.hpp"
#include "polyldp/query/summary.hpp"

namespace polyldp {

struct SmoothQuery {
  std::string name;
  int p = 1;
  std::function<double(std::span<const double>)> f;  // on [-1,1]^p
  std::optional<int> t;                               // expected basis degree
  int h = 0;                                          // documented smoothness
  double T = 0.0;
};

namespace detail {

inline std::string short_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace detail

namespace smooth_queries {

// exp(-||x - center||^2 / (2 sigma^2)), already in [0, 1].
inline SmoothQuery gaussian_kernel(std::vector<double> center, double sigma) {
  detail::require(sigma > 0.0, "gaussian_kernel: sigma must be positive");
  SmoothQuery q;
  q.name = "gaussian center=";
  for (std::size_t i = 0; i < center.size(); ++i) {
    q.name += (i ? "," : "") + detail::short_double(center[i]);
  }
  q.name += " sigma=" + detail::short_double(sigma);
  q.p = static_cast<int>(center.size());
  q.h = 1000;
  q.T = 1.0 / (sigma * sigma);
  q.f = [center = std::move(center), sigma](std::span<const double> x) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - center[i]) * (x[i] - center[i]);
    return std::exp(-d2 / (2.0 * sigma * sigma));
  };
  return q;
}

inline SmoothQuery constant(int p, double c) {
  SmoothQuery q;
  q.name = "constant c=" + detail::short_double(c);
  q.p = p;
  q.h = 1000;
  q.f = [c](std::span<const double>) { return c; };
  return q;
}

// x_j for one coordinate.
inline SmoothQuery coordinate(int p, int j) {
  detail::require(j >= 0 && j < p, "coordinate: index out of range");
  SmoothQuery q;
  q.name = "coordinate j=" + std::to_string(j);
  q.p = p;
  q.h = 1000;
  q.T = 1.0;
  q.f = [j](std::span<const double> x) { return x[j]; };
  return q;
}

}  // namespace smooth_queries

// Basis values T_r(x) for r in {0..t-1}^p (lexicographic), each in [-1,1].
inline std::vector<double> trig_basis_values(std::span<const double> x, int t) {
  const int p = static_cast<int>(x.size());
  std::vector<std::vector<double>> per_axis(p, std::vector<double>(t));
  for (int j = 0; j < p; ++j) {
    detail::require(x[j] >= -1.0 && x[j] <= 1.0, "release_smooth: coordinates must lie in [-1, 1]");
    const double theta = std::acos(x[j]);
    for (int r = 0; r < t; ++r) per_axis[j][r] = std::cos(r * theta);
  }
  const std::size_t size = detail::checked_power(t, p, kDefaultTrigCap, "trig basis t^p");
  std::vector<double> out(size);
  std::vector<std::size_t> idx(p);
  for (std::size_t g = 0; g < size; ++g) {
    detail::unflatten(g, t, idx);
    double v = 1.0;
    for (int j = 0; j < p; ++j) v *= per_axis[j][idx[j]];
    out[g] = v;
  }
  return out;
}

// LDP-AVG of the t^p basis values; each lies in [-1, 1], so the averaging
// range is offset -1 with width 2.
inline CoefficientSummary release_smooth(std::span<const std::vector<double>> dataset, int t,
                                         const PrivacyParams& privacy, std::uint64_t seed,
                                         unsigned threads = 1,
                                         std::size_t cap = kDefaultTrigCap) {
  privacy.validate();
  detail::require(!dataset.empty(), "release_smooth: empty dataset");
  detail::require(t >= 1, "release_smooth: t must be >= 1");
  const int p = static_cast<int>(dataset.front().size());
  detail::require(p >= 1, "release_smooth: points must have dimension >= 1");
  const std::size_t dim = detail::checked_power(t, p, cap, "trig basis t^p");
  for (const auto& x : dataset) {
    detail::require(x.size() == static_cast<std::size_t>(p), "release_smooth: ragged dataset");
  }
  const std::vector<double> offsets(dim, -1.0);
  CoefficientSummary s;
  s.family = SummaryFamily::kTrigSmooth;
  s.coeffs = detail::private_coefficient_average(
      dataset.size(), dim, 2.0, offsets, privacy.epsilon, seed, threads,
      [&](std::size_t i) { return trig_basis_values(dataset[i], t); });
  s.privacy = privacy;
  s.p = p;
  s.degree = t;
  s.range_bound = 2.0;
  s.n = dataset.size();
  s.seed = seed;
  s.basis_order = "lexicographic r in {0..t-1}^p, first variable most significant";
  return s;
}

// trig_fit of g_f(theta) = f(cos theta_1, ..., cos theta_p) at the summary's
// degree, dotted with the summary.
inline double answer_smooth(const CoefficientSummary& s, const SmoothQuery& q) {
  if (s.family != SummaryFamily::kTrigSmooth) {
    throw DomainError("answer_smooth: summary is not a trig-smooth summary");
  }
  detail::require(q.p == s.p, "answer_smooth: query dimension != summary dimension");
  if (q.t && *q.t != s.degree) throw DomainError("answer_smooth: degree mismatch");
  const auto g = [&](std::span<const double> theta) {
    std::vector<double> x(theta.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::cos(theta[i]);
    return q.f(x);
  };
  const TrigPolynomial c = trig_fit(g, s.p, s.degree);
  detail::require(c.coeffs.size() == s.coeffs.size(), "answer_smooth: degree mismatch");
  return detail::dot(c.coeffs, s.coeffs, true);
}

// Exact (1/n) sum_i f(x_i); never touches a randomizer.
inline double oracle_smooth(std::span<const std::vector<double>> dataset, const SmoothQuery& q) {
  detail::require(!dataset.empty(), "oracle_smooth: empty dataset");
  detail::CompensatedSum acc;
  for (const auto& x : dataset) acc.add(q.f(x));
  return acc.value() / static_cast<double>(dataset.size());
}

// max |f(x) - trig approximant(x)| over `points` per axis on a regular grid.
inline double trig_sup_error(const SmoothQuery& q, int t, int points = 1001) {
  const auto g = [&](std::span<const double> theta) {
    std::vector<double> x(theta.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::cos(theta[i]);
    return q.f(x);
  };
  const TrigPolynomial c = trig_fit(g, q.p, t);
  const std::size_t total = detail::checked_power(points, q.p, 10'000'000, "sup grid");
  std::vector<std::size_t> idx(q.p);
  std::vector<double> x(q.p);
  double sup = 0.0;
  for (std::size_t s = 0; s < total; ++s) {
    detail::unflatten(s, points, idx);
    for (int i = 0; i < q.p; ++i) x[i] = -1.0 + 2.0 * static_cast<double>(idx[i]) / (points - 1);
    sup = std::max(sup, std::fabs(q.f(x) - c.at_cosines(x)));
  }
  return sup;
}

}  // namespace polyldp
