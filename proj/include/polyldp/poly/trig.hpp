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
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/tensor.hpp"

namespace polyldp {

inline constexpr std::size_t kDefaultTrigCap = 1'000'000;

// sum_r c_r prod_i cos(r_i theta_i) over r in {0..t-1}^p, r in lexicographic
// order (first variable most significant).
struct TrigPolynomial {
  int degree_per_var = 1;
  int p = 1;
  std::vector<double> coeffs;

  double operator()(std::span<const double> theta) const {
    detail::require(theta.size() == static_cast<std::size_t>(p),
                    "TrigPolynomial: point has wrong dimension");
    const std::size_t t = degree_per_var;
    std::vector<std::vector<double>> cosines(p, std::vector<double>(t));
    for (int i = 0; i < p; ++i) {
      for (std::size_t r = 0; r < t; ++r) cosines[i][r] = std::cos(r * theta[i]);
    }
    std::vector<double> cur = detail::contract_last(coeffs, cosines[p - 1], false);
    for (int axis = p - 2; axis >= 0; --axis) {
      cur = detail::contract_last(cur, cosines[axis], false);
    }
    return cur[0];
  }

  // Evaluates the algebraic form at x in [-1,1]^p via theta_i = arccos(x_i).
  double at_cosines(std::span<const double> x) const {
    std::vector<double> theta(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) theta[i] = std::acos(x[i]);
    return (*this)(theta);
  }
};

// Cosine-series coefficients of g by discrete cosine quadrature at 4t
// Chebyshev angles per axis. Exact for cosine polynomials of per-axis degree
// < t (no aliasing below 2 * 4t).
inline TrigPolynomial trig_fit(const std::function<double(std::span<const double>)>& g,
                               int p, int t, std::size_t cap = kDefaultTrigCap) {
  detail::require(t >= 1, "trig_fit: t must be >= 1");
  detail::require(p >= 1, "trig_fit: p must be >= 1");
  const std::size_t nodes = 4 * static_cast<std::size_t>(t);
  const std::size_t samples = detail::checked_power(nodes, p, cap * 64, "trig_fit sample grid");
  detail::checked_power(t, p, cap, "trig basis t^p");

  std::vector<double> angles(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    angles[j] = (j + 0.5) * std::numbers::pi / static_cast<double>(nodes);
  }
  std::vector<double> values(samples);
  std::vector<std::size_t> idx(p);
  std::vector<double> theta(p);
  for (std::size_t s = 0; s < samples; ++s) {
    detail::unflatten(s, nodes, idx);
    for (int i = 0; i < p; ++i) theta[i] = angles[idx[i]];
    values[s] = g(theta);
  }
  // t x nodes transform: c_r = (w_r / N) sum_j g(theta_j) cos(r theta_j).
  std::vector<double> transform(static_cast<std::size_t>(t) * nodes);
  for (int r = 0; r < t; ++r) {
    const double w = (r == 0 ? 1.0 : 2.0) / static_cast<double>(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
      transform[r * nodes + j] = w * std::cos(r * angles[j]);
    }
  }
  std::vector<std::size_t> extents(p, nodes);
  for (int axis = 0; axis < p; ++axis) {
    values = detail::mode_product(values, extents, axis, transform, t);
  }
  return TrigPolynomial{t, p, std::move(values)};
}

}  // namespace polyldp
