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

// One-bit randomizer over shared public Laplace strings.
//
// A player holding v in [0,1] and public y ~ Lap(1/e0) sends b ~ Bernoulli(p)
// with p = 1/2 * f_v(y) / f_0(y) = 1/2 exp(e0 (|y| - |y - v|)), where f_v is
// the Lap(v, 1/e0) density. Since E[b y] = v/2, the server estimates a subset
// mean by (2/|I|) sum_{i in I} b_i y_i.
//
// Privacy of the pair (y, b): Pr[b=1 | v, y] ratios are at most e^{e0}, but
// Pr[b=0 | v, y] ranges over [1 - e^{e0}/2, 1/2], a ratio of 1/(2 - e^{e0}).
// Targeting eps therefore uses the inner parameter e0 = ln(2 - e^{-eps}),
// for which every ratio is at most e^{eps}.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/random.hpp"
#include "polyldp/core/tensor.hpp"
#include "polyldp/ldp/laplace.hpp"

namespace polyldp {

inline constexpr double kOneBitMaxEpsilon = std::numbers::ln2;

// Laplace parameter used inside the randomizer for a target epsilon.
inline double one_bit_inner_epsilon(double epsilon) {
  return std::log(2.0 - std::exp(-epsilon));
}

// 1/2 exp(e0 (|y| - |y - v|)) for the Laplace parameter e0 used in the
// density ratio.
inline double one_bit_probability(double v, double y, double inner_epsilon) {
  return 0.5 * std::exp(inner_epsilon * (std::fabs(y) - std::fabs(y - v)));
}

struct OneBitReport {
  std::uint8_t bit = 0;
  std::uint64_t player_index = 0;
  std::uint64_t public_string_index = 0;
};

// y_1..y_n i.i.d. Lap(1/e0), regenerated bit-exactly from (seed, n, epsilon).
class PublicStrings {
 public:
  PublicStrings(std::uint64_t seed, std::size_t n, double epsilon)
      : seed_(seed), n_(n), epsilon_(epsilon) {
    detail::require(epsilon > 0.0 && epsilon <= kOneBitMaxEpsilon,
                    "PublicStrings: epsilon must lie in (0, ln 2]");
    const double scale = 1.0 / one_bit_inner_epsilon(epsilon);
    Stream rng = Stream::derive(seed, StreamPurpose::kPublicStrings);
    values_.resize(n);
    for (auto& y : values_) y = laplace_sample(scale, rng);
  }

  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return n_; }
  double epsilon() const { return epsilon_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

 private:
  std::uint64_t seed_;
  std::size_t n_;
  double epsilon_;
  std::vector<double> values_;
};

// Player side: eps-LDP single bit for v in [0,1] given public string y.
inline std::uint8_t one_bit_randomize(double v, double y, double epsilon, Stream& rng) {
  detail::require(v >= 0.0 && v <= 1.0, "one_bit_randomize: v must lie in [0, 1]");
  detail::require(epsilon > 0.0 && epsilon <= kOneBitMaxEpsilon,
                  "one_bit_randomize: epsilon must lie in (0, ln 2]");
  const double p = one_bit_probability(v, y, one_bit_inner_epsilon(epsilon));
  count_noise_draw();
  return rng.uniform() < p ? 1 : 0;
}

// Server side: (2/|I|) sum b_i y_i over the given reports.
inline double one_bit_estimate(std::span<const OneBitReport> reports,
                               const PublicStrings& publics) {
  if (reports.empty()) {
    throw DegenerateInputError("one_bit_estimate: empty subset");
  }
  detail::CompensatedSum sum;
  for (const auto& r : reports) {
    if (r.bit) sum.add(publics[r.public_string_index]);
  }
  return 2.0 * sum.value() / static_cast<double>(reports.size());
}

}  // namespace polyldp
