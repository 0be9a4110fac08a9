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

// Non-private brute-force answers for every command. None of these touch a
// randomizer; the returned documents carry the noise-draw counter delta.

#include <cstddef>
#include <cstdint>
#include <string>

#include "polyldp/core/error.hpp"
#include "polyldp/core/random.hpp"
#include "polyldp/erm/erm.hpp"
#include "polyldp/experiment/config.hpp"
#include "polyldp/experiment/datasets.hpp"
#include "polyldp/experiment/sweep.hpp"
#include "polyldp/highdim/glm.hpp"
#include "polyldp/io/json.hpp"
#include "polyldp/query/marginals.hpp"
#include "polyldp/query/smooth.hpp"

namespace polyldp {

inline constexpr std::size_t kOracleMaxRecords = 2'000'000;
inline constexpr int kOracleMaxDim = 4;
inline constexpr int kOracleMaxBits = 16;

// `kind` is one of erm, marginals, smooth, highdim.
inline Json run_oracle(const std::string& kind, const ExperimentConfig& c, std::size_t n,
                       std::uint64_t seed) {
  if (n > kOracleMaxRecords) {
    throw ResourceError("oracle: n = " + std::to_string(n) + " exceeds the cap " +
                        std::to_string(kOracleMaxRecords));
  }
  const std::uint64_t draws_before = noise_draws();
  Json out = {{"kind", kind}, {"n", n}, {"seed", seed}, {"p", c.p}};
  if (kind == "erm") {
    if (c.p > kOracleMaxDim) throw ResourceError("oracle: ERM dimension exceeds the cap");
    const LossSpec loss = losses::by_name(c.loss, c.p);
    const std::string name = c.dataset.empty() ? datasets::default_erm_dataset(c.loss) : c.dataset;
    const auto data = datasets::erm_dataset(name, n, c.p, seed);
    const EmpiricalOracle oracle(data, loss, erm_constraint(c.constraint, c.p));
    out["theta_star"] = io::numbers(oracle.argmin());
    out["minimum"] = io::number(oracle.minimum());
    out["loss"] = c.loss;
    out["dataset"] = name;
  } else if (kind == "marginals") {
    if (c.p > kOracleMaxBits) throw ResourceError("oracle: marginal dimension exceeds the cap");
    const int width = c.k > 0 ? c.k : 2;
    const auto data = datasets::bit_dataset(n, c.p, seed);
    Json answers = Json::array();
    for (const auto& y : enumerate_queries(c.p, width)) {
      std::string bits;
      for (auto b : y) bits.push_back(b ? '1' : '0');
      answers.push_back({{"query", bits}, {"exact", io::number(oracle_marginal(data, y))}});
    }
    out["answers"] = answers;
  } else if (kind == "smooth") {
    if (c.p > kOracleMaxDim) throw ResourceError("oracle: smooth dimension exceeds the cap");
    const auto data = datasets::smooth_dataset(n, c.p, seed);
    Json answers = Json::array();
    for (const auto& q : smooth_query_family(c.p)) {
      answers.push_back({{"query", q.name}, {"exact", io::number(oracle_smooth(data, q))}});
    }
    out["answers"] = answers;
  } else if (kind == "highdim") {
    const auto kindc = parse_constraint_kind(c.constraint);
    const bool simplex = kindc == ConstraintKind::kSimplex;
    detail::require(simplex || kindc == ConstraintKind::kL1Ball,
                    "oracle: highdim constraint must be l1 or simplex");
    const std::size_t p = static_cast<std::size_t>(c.p);
    const auto planted = datasets::planted_glm(n, p, std::min(c.sparsity, p), c.loss, seed, simplex);
    const ConstraintSet C = simplex ? ConstraintSet::simplex(c.p, 1.0)
                                    : ConstraintSet::l1_ball(std::vector<double>(p, 0.0), 1.0);
    const GLMMinimum best = glm_oracle(glm_losses::by_name(c.loss), planted.data, C);
    out["w_star"] = io::numbers(best.w);
    out["minimum"] = io::number(best.value);
  } else {
    throw DomainError("oracle: unknown kind '" + kind + "'");
  }
  out["noise_draws"] = noise_draws() - draws_before;
  return out;
}

}  // namespace polyldp
