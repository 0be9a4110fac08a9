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
#include <string_view>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/random.hpp"
#include "polyldp/core/parallel.hpp"
#include "polyldp/ldp/averaging.hpp"
#include "polyldp/ldp/laplace.hpp"

namespace polyldp {

enum class SummaryFamily { kChebyshevMarginal, kTrigSmooth };

inline std::string_view summary_family_name(SummaryFamily f) {
  return f == SummaryFamily::kChebyshevMarginal ? "chebyshev-marginal" : "trig-smooth";
}

inline SummaryFamily parse_summary_family(std::string_view name) {
  if (name == "chebyshev-marginal") return SummaryFamily::kChebyshevMarginal;
  if (name == "trig-smooth") return SummaryFamily::kTrigSmooth;
  throw DomainError("unknown summary family '" + std::string(name) + "'");
}

// A privately released coefficient vector for a query family.
struct CoefficientSummary {
  SummaryFamily family = SummaryFamily::kChebyshevMarginal;
  std::vector<double> coeffs;
  PrivacyParams privacy;
  int p = 1;
  int k = 0;       // marginals: disjunction width
  int degree = 0;  // marginals: t_k; smooth: t (basis indices 0..t-1 per axis)
  double gamma = 0.0;
  double range_bound = 0.0;  // LDP-AVG range width b
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<double> poly_coeffs;  // marginals: the univariate p_k
  std::string basis_order;
};

namespace detail {

// Per-player encodings averaged by coordinate-sampling LDP-AVG, each player
// on its own substream. Noiseless (epsilon = inf) returns the exact mean.
template <class Encode>
std::vector<double> private_coefficient_average(std::size_t n, std::size_t dim, double b,
                                                std::span<const double> offsets,
                                                double epsilon, std::uint64_t seed,
                                                unsigned threads, const Encode& encode) {
  if (std::isinf(epsilon)) {
    std::vector<std::vector<double>> enc(n);
    parallel_for(n, threads, [&](std::size_t i) { enc[i] = encode(i); });
    std::vector<CompensatedSum> sums(dim);
    for (const auto& e : enc) {
      for (std::size_t j = 0; j < dim; ++j) sums[j].add(e[j]);
    }
    std::vector<double> out(dim);
    for (std::size_t j = 0; j < dim; ++j) out[j] = sums[j].value() / static_cast<double>(n);
    return out;
  }
  std::vector<CoordinateReport> reports(n);
  parallel_for(n, threads, [&](std::size_t i) {
    Stream rng = Stream::derive(seed, StreamPurpose::kPlayer, i);
    const auto v = encode(i);
    reports[i] = ldp_avg_pd_player(v, b, epsilon, offsets, rng);
  });
  return ldp_avg_pd_server(reports, dim, b, offsets);
}

}  // namespace detail
}  // namespace polyldp
