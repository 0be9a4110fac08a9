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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polyldp/core/error.hpp"

namespace polyldp {

inline constexpr std::size_t kDefaultBasisCap = 1'000'000;

// All monomials y^alpha in `vars` variables with |alpha| <= degree, in graded
// lexicographic order: total degree ascending, then exponent tuples in
// descending lexicographic order (y_1 ranks highest). For two variables and
// degree 2 the order is 1, y1, y2, y1^2, y1 y2, y2^2.
class MonomialBasis {
 public:
  static constexpr const char* kOrderName = "graded-lex (degree asc, exponents lex desc)";

  MonomialBasis(int vars, int degree, std::size_t cap = kDefaultBasisCap)
      : vars_(vars), degree_(degree) {
    detail::require(vars >= 1, "MonomialBasis: need at least one variable");
    detail::require(degree >= 0, "MonomialBasis: degree must be >= 0");
    // C(vars + degree, degree), checked against the cap as it grows.
    double count = 1.0;
    for (int i = 1; i <= degree; ++i) count = count * (vars + i) / i;
    if (count > static_cast<double>(cap)) {
      throw ResourceError("MonomialBasis: dimension C(p+t,t) = " +
                          std::to_string(static_cast<long double>(count)) +
                          " exceeds cap " + std::to_string(cap));
    }
    exponents_.reserve(static_cast<std::size_t>(std::llround(count)) * vars);
    std::vector<std::uint8_t> current(vars, 0);
    for (int d = 0; d <= degree; ++d) emit(current, 0, d);
  }

  int vars() const { return vars_; }
  int degree() const { return degree_; }
  std::size_t size() const { return exponents_.size() / vars_; }

  std::span<const std::uint8_t> exponents(std::size_t i) const {
    return std::span<const std::uint8_t>(exponents_).subspan(i * vars_, vars_);
  }

  int total_degree(std::size_t i) const {
    int d = 0;
    for (auto e : exponents(i)) d += e;
    return d;
  }

  double evaluate(std::size_t i, std::span<const double> y) const {
    double v = 1.0;
    auto e = exponents(i);
    for (int j = 0; j < vars_; ++j) {
      for (int r = 0; r < e[j]; ++r) v *= y[j];
    }
    return v;
  }

 private:
  void emit(std::vector<std::uint8_t>& current, int var, int remaining) {
    if (var == vars_ - 1) {
      current[var] = static_cast<std::uint8_t>(remaining);
      exponents_.insert(exponents_.end(), current.begin(), current.end());
      current[var] = 0;
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      current[var] = static_cast<std::uint8_t>(e);
      emit(current, var + 1, remaining - e);
    }
    current[var] = 0;
  }

  int vars_;
  int degree_;
  std::vector<std::uint8_t> exponents_;
};

}  // namespace polyldp
