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
#include <cmath>
#include <vector>

#include "polyldp/core/error.hpp"

namespace polyldp {

// Univariate p(x) = sum_i coeffs[i] x^i with p(0) = 0 and |p(x) - 1| <= gamma
// at every integer x in [1, k].
struct ChebyshevDisjunctionPoly {
  int k = 1;
  int degree = 1;
  std::vector<double> coeffs;  // coeffs[0] == 0
  double gamma = 0.0;           // requested bound
  double achieved_error = 0.0;  // max_{x=1..k} |p(x) - 1|

  double operator()(double x) const {
    double acc = 0.0;
    for (int i = degree; i >= 0; --i) acc = acc * x + coeffs[i];
    return acc;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs) m = std::max(m, std::fabs(c));
    return m;
  }
};

namespace detail {

// Monomial coefficients of T_t(a x + b).
inline std::vector<double> shifted_chebyshev(int t, double a, double b) {
  std::vector<double> prev{1.0};
  if (t == 0) return prev;
  std::vector<double> cur{b, a};
  for (int n = 1; n < t; ++n) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i] += 2.0 * b * cur[i];
      next[i + 1] += 2.0 * a * cur[i];
    }
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

inline double chebyshev_t(int t, double z) {
  if (std::fabs(z) <= 1.0) return std::cos(t * std::acos(z));
  const double s = z > 0 ? 1.0 : ((t % 2 == 0) ? 1.0 : -1.0);
  return s * std::cosh(t * std::acosh(std::fabs(z)));
}

}  // namespace detail

// Builds p(x) = 1 - T_t(z(x)) / T_t(z(0)), where z maps [1, k] affinely onto
// [-1, 1]. The point x = 0 maps outside [-1, 1], where T_t grows like
// exp(2t / sqrt(k)), so the smallest passing t is O(sqrt(k) log(1/gamma)).
// t is increased until the bound is verified on the monomial form at every
// integer in [1, k].
inline ChebyshevDisjunctionPoly chebyshev_disjunction(int k, double gamma,
                                                      int max_degree = 64) {
  detail::require(k >= 1, "chebyshev_disjunction: k must be >= 1");
  detail::require(gamma > 0.0 && gamma < 1.0,
                  "chebyshev_disjunction: gamma must lie in (0, 1)");
  ChebyshevDisjunctionPoly poly;
  poly.k = k;
  poly.gamma = gamma;
  if (k == 1) {
    poly.degree = 1;
    poly.coeffs = {0.0, 1.0};
    poly.achieved_error = 0.0;
    return poly;
  }
  const double a = 2.0 / (k - 1);
  const double b = -static_cast<double>(k + 1) / (k - 1);
  double best = 1.0;
  for (int t = 1; t <= max_degree; ++t) {
    const double scale = detail::chebyshev_t(t, b);
    std::vector<double> c = detail::shifted_chebyshev(t, a, b);
    for (double& ci : c) ci = -ci / scale;
    c[0] = 0.0;  // 1 - T_t(b)/T_t(b)
    poly.degree = t;
    poly.coeffs = c;
    double err = 0.0;
    for (int x = 1; x <= k; ++x) err = std::max(err, std::fabs(poly(x) - 1.0));
    best = std::min(best, err);
    if (err <= gamma) {
      poly.achieved_error = err;
      return poly;
    }
  }
  throw ConstructionError("chebyshev_disjunction: target gamma not reached by degree " +
                              std::to_string(max_degree),
                          best);
}

}  // namespace polyldp
