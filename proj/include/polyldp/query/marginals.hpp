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

// Monotone k-way disjunctions q_y(x) = OR_{j : y_j = 1} x_j, released through
// the polynomial p_k(sum_j y_j x_j) expanded in the monomials of y.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/poly/chebyshev.hpp"
#include "polyldp/poly/monomial.hpp"
#include "polyldp/query/summary.hpp"

namespace polyldp {

using BitVector = std::vector<std::uint8_t>;

// Exact answer of the disjunction q_y on one record.
inline double disjunction(std::span<const std::uint8_t> y, std::span<const std::uint8_t> x) {
  detail::require(x.size() == y.size(), "disjunction: length mismatch");
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] && y[j]) return 1.0;
  }
  return 0.0;
}

namespace detail {

// |alpha|! / prod alpha_j!.
inline double multinomial(std::span<const std::uint8_t> alpha) {
  double out = 1.0;
  int total = 0;
  for (auto a : alpha) {
    for (int r = 1; r <= a; ++r) out = out * (total + r) / r;
    total += a;
  }
  return out;
}

// Value the monomial alpha takes for a record with support covering alpha.
inline std::vector<double> monomial_weights(const MonomialBasis& basis,
                                            const ChebyshevDisjunctionPoly& poly) {
  std::vector<double> w(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const int d = basis.total_degree(i);
    w[i] = d <= poly.degree ? poly.coeffs[d] * multinomial(basis.exponents(i)) : 0.0;
  }
  return w;
}

}  // namespace detail

// Coefficients of y -> p_k(sum_j y_j x_j) over `basis`. The power
// (sum_{j in S} y_j)^d contributes multinomial(alpha) y^alpha for alpha
// supported in S = supp(x).
inline std::vector<double> encode_disjunction(std::span<const std::uint8_t> x,
                                              const ChebyshevDisjunctionPoly& poly,
                                              const MonomialBasis& basis) {
  detail::require(x.size() == static_cast<std::size_t>(basis.vars()),
                  "encode_disjunction: record length != basis variables");
  detail::require(basis.degree() >= poly.degree, "encode_disjunction: basis degree too small");
  std::vector<double> out(basis.size(), 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto alpha = basis.exponents(i);
    bool supported = true;
    for (std::size_t j = 0; j < alpha.size() && supported; ++j) {
      supported = alpha[j] == 0 || x[j] != 0;
    }
    const int d = basis.total_degree(i);
    if (supported && d <= poly.degree) {
      out[i] = poly.coeffs[d] * detail::multinomial(alpha);
    }
  }
  return out;
}

inline std::vector<double> encode_disjunction(std::span<const std::uint8_t> x,
                                              const ChebyshevDisjunctionPoly& poly,
                                              std::size_t cap = kDefaultBasisCap) {
  return encode_disjunction(x, poly, MonomialBasis(static_cast<int>(x.size()), poly.degree, cap));
}

// Releases p~_D = LDP-AVG of the players' encodings. gamma = alpha / 2; the
// range of coordinate alpha is [min(0, w_alpha), max(0, w_alpha)], known to
// everyone, with width b = max |w_alpha|.
inline CoefficientSummary release_marginals(std::span<const BitVector> dataset, int p, int k,
                                            const PrivacyParams& privacy, std::uint64_t seed,
                                            unsigned threads = 1,
                                            std::size_t cap = kDefaultBasisCap) {
  privacy.validate();
  detail::require(!dataset.empty(), "release_marginals: empty dataset");
  detail::require(p >= 1 && k >= 1 && k <= p, "release_marginals: need 1 <= k <= p");
  detail::require(privacy.alpha.has_value(), "release_marginals: alpha is required");
  for (const auto& x : dataset) {
    detail::require(x.size() == static_cast<std::size_t>(p), "release_marginals: record length != p");
    for (auto b : x) detail::require(b <= 1, "release_marginals: records must be bit vectors");
  }
  const double gamma = *privacy.alpha / 2.0;
  const ChebyshevDisjunctionPoly poly = chebyshev_disjunction(k, gamma);
  const MonomialBasis basis(p, poly.degree, cap);
  const auto weights = detail::monomial_weights(basis, poly);
  std::vector<double> offsets(weights.size());
  double b = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    offsets[i] = std::min(0.0, weights[i]);
    b = std::max(b, std::fabs(weights[i]));
  }
  if (b == 0.0) b = 1.0;

  CoefficientSummary s;
  s.family = SummaryFamily::kChebyshevMarginal;
  s.coeffs = detail::private_coefficient_average(
      dataset.size(), basis.size(), b, offsets, privacy.epsilon, seed, threads,
      [&](std::size_t i) { return encode_disjunction(dataset[i], poly, basis); });
  s.privacy = privacy;
  s.p = p;
  s.k = k;
  s.degree = poly.degree;
  s.gamma = poly.achieved_error;
  s.range_bound = b;
  s.n = dataset.size();
  s.seed = seed;
  s.poly_coeffs = poly.coeffs;
  s.basis_order = MonomialBasis::kOrderName;
  return s;
}

// Evaluates the released polynomial at the bit vector y.
inline double answer_marginal(const CoefficientSummary& s, std::span<const std::uint8_t> y) {
  if (s.family != SummaryFamily::kChebyshevMarginal) {
    throw DomainError("answer_marginal: summary is not a chebyshev-marginal summary");
  }
  detail::require(y.size() == static_cast<std::size_t>(s.p), "answer_marginal: query length != p");
  int weight = 0;
  for (auto b : y) weight += b ? 1 : 0;
  detail::require(weight <= s.k, "answer_marginal: query weight exceeds k");
  const MonomialBasis basis(s.p, s.degree);
  detail::require(basis.size() == s.coeffs.size(), "answer_marginal: coefficient length mismatch");
  detail::CompensatedSum acc;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto alpha = basis.exponents(i);
    bool inside = true;
    for (std::size_t j = 0; j < alpha.size() && inside; ++j) inside = alpha[j] == 0 || y[j] != 0;
    if (inside) acc.add(s.coeffs[i]);
  }
  return acc.value();
}

// Exact answer (1/n) sum_i q_y(x_i); never touches a randomizer.
inline double oracle_marginal(std::span<const BitVector> dataset, std::span<const std::uint8_t> y) {
  detail::require(!dataset.empty(), "oracle_marginal: empty dataset");
  double hits = 0.0;
  for (const auto& x : dataset) hits += disjunction(y, x);
  return hits / static_cast<double>(dataset.size());
}

// Every y in {0,1}^p with |y| <= k (the empty query included), in increasing
// binary order.
inline std::vector<BitVector> enumerate_queries(int p, int k) {
  detail::require(p >= 1 && p <= 20, "enumerate_queries: p must lie in [1, 20]");
  std::vector<BitVector> out;
  for (std::uint32_t mask = 0; mask < (1u << p); ++mask) {
    if (std::popcount(mask) > k) continue;
    BitVector y(p);
    for (int j = 0; j < p; ++j) y[j] = (mask >> j) & 1;
    out.push_back(std::move(y));
  }
  return out;
}

}  // namespace polyldp
