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

// JSON documents for surrogates, public strings, projections, summaries and
// results. Non-finite doubles are written as the strings "inf", "-inf" and
// "nan" since JSON has no literal for them.

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/erm/erm.hpp"
#include "polyldp/highdim/dr_erm.hpp"
#include "polyldp/highdim/projection.hpp"
#include "polyldp/ldp/one_bit.hpp"
#include "polyldp/poly/bernstein.hpp"
#include "polyldp/query/summary.hpp"

namespace polyldp {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::json;

namespace io {

inline Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double to_number(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw DomainError("expected a number, got '" + s + "'");
  }
  if (!j.is_number()) throw DomainError("expected a number, got " + j.dump());
  return j.get<double>();
}

inline Json numbers(std::span<const double> v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

inline std::vector<double> to_numbers(const Json& j) {
  if (!j.is_array()) throw DomainError("expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(to_number(x));
  return out;
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw DomainError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

inline void check_schema(const Json& j, const char* what) {
  const int v = field(j, "schema_version").get<int>();
  if (v != kSchemaVersion) {
    throw DomainError(std::string(what) + ": unsupported schema_version " + std::to_string(v));
  }
}

}  // namespace io

// Surrogate: {schema_version, config, values[]} with values the grid
// estimates in lexicographic grid order.
inline Json surrogate_to_json(const BernsteinSurrogate& s) {
  const auto& c = s.config();
  return {{"schema_version", kSchemaVersion},
          {"kind", "iterated-bernstein"},
          {"config", {{"k", c.k}, {"h", c.h}, {"p", c.p}, {"T", io::number(c.smoothness_T)}}},
          {"grid_order", "lexicographic, first coordinate most significant, node j/k"},
          {"values", io::numbers(s.grid_values())}};
}

inline BernsteinSurrogate surrogate_from_json(const Json& j) {
  io::check_schema(j, "surrogate");
  const Json& c = io::field(j, "config");
  SurrogateConfig config;
  config.k = io::field(c, "k").get<int>();
  config.h = io::field(c, "h").get<int>();
  config.p = io::field(c, "p").get<int>();
  if (c.contains("T")) config.smoothness_T = io::to_number(c.at("T"));
  config.validate();
  return BernsteinSurrogate(config, io::to_numbers(io::field(j, "values")));
}

inline Json public_strings_to_json(const PublicStrings& s) {
  return {{"seed", s.seed()}, {"n", s.size()}, {"epsilon", io::number(s.epsilon())}};
}

inline PublicStrings public_strings_from_json(const Json& j) {
  return PublicStrings(io::field(j, "seed").get<std::uint64_t>(),
                       io::field(j, "n").get<std::size_t>(),
                       io::to_number(io::field(j, "epsilon")));
}

inline Json projection_to_json(const ProjectionMatrix& phi) {
  return {{"seed", phi.seed()},
          {"m", phi.rows()},
          {"p", phi.cols()},
          {"tag", std::string(projection_tag_name(phi.tag()))}};
}

inline ProjectionMatrix projection_from_json(const Json& j) {
  return gen_projection(io::field(j, "m").get<std::size_t>(), io::field(j, "p").get<std::size_t>(),
                        parse_projection_tag(io::field(j, "tag").get<std::string>()),
                        io::field(j, "seed").get<std::uint64_t>());
}

inline Json privacy_to_json(const PrivacyParams& p) {
  Json j = {{"epsilon", io::number(p.epsilon)}, {"beta", io::number(p.beta)}};
  if (p.alpha) j["alpha"] = io::number(*p.alpha);
  return j;
}

inline PrivacyParams privacy_from_json(const Json& j) {
  PrivacyParams p;
  p.epsilon = io::to_number(io::field(j, "epsilon"));
  if (j.contains("beta")) p.beta = io::to_number(j.at("beta"));
  if (j.contains("alpha") && !j.at("alpha").is_null()) p.alpha = io::to_number(j.at("alpha"));
  p.validate();
  return p;
}

inline Json summary_to_json(const CoefficientSummary& s) {
  return {{"schema_version", kSchemaVersion},
          {"family", std::string(summary_family_name(s.family))},
          {"privacy", privacy_to_json(s.privacy)},
          {"p", s.p},
          {"k", s.k},
          {"degree", s.degree},
          {"gamma", io::number(s.gamma)},
          {"range_bound", io::number(s.range_bound)},
          {"n", s.n},
          {"seed", s.seed},
          {"basis_order", s.basis_order},
          {"poly_coeffs", io::numbers(s.poly_coeffs)},
          {"coeffs", io::numbers(s.coeffs)}};
}

inline CoefficientSummary summary_from_json(const Json& j) {
  io::check_schema(j, "summary");
  CoefficientSummary s;
  s.family = parse_summary_family(io::field(j, "family").get<std::string>());
  s.privacy = privacy_from_json(io::field(j, "privacy"));
  s.p = io::field(j, "p").get<int>();
  s.k = io::field(j, "k").get<int>();
  s.degree = io::field(j, "degree").get<int>();
  s.gamma = io::to_number(io::field(j, "gamma"));
  s.range_bound = io::to_number(io::field(j, "range_bound"));
  s.n = io::field(j, "n").get<std::size_t>();
  s.seed = io::field(j, "seed").get<std::uint64_t>();
  s.basis_order = io::field(j, "basis_order").get<std::string>();
  s.poly_coeffs = io::to_numbers(io::field(j, "poly_coeffs"));
  s.coeffs = io::to_numbers(io::field(j, "coeffs"));
  return s;
}

inline Json comm_to_json(const CommStats& c) {
  return {{"total_bits", c.total_bits}, {"max_player_bits", c.max_player_bits},
          {"messages", c.messages}};
}

namespace io {

inline Json optional_number(const std::optional<double>& v) {
  return v ? number(*v) : Json(nullptr);
}

}  // namespace io

inline Json erm_result_to_json(const ERMResult& r, bool include_surrogate = true) {
  Json j = {{"schema_version", kSchemaVersion},
            {"theta_priv", io::numbers(r.theta_priv)},
            {"surrogate_value", io::number(r.surrogate_value)},
            {"mu", io::number(r.mu)},
            {"k", r.k},
            {"h", r.h},
            {"p", r.p},
            {"epsilon", io::number(r.epsilon)},
            {"seed", r.seed},
            {"mechanism", r.mechanism},
            {"minimizer", r.minimizer},
            {"converged", r.converged},
            {"missing_grid_points", r.missing_grid_points},
            {"comm", comm_to_json(r.comm)},
            {"err_empirical", io::optional_number(r.err_empirical)},
            {"sup_grid_error", io::optional_number(r.sup_grid_error)},
            {"empirical_minimum", io::optional_number(r.empirical_minimum)},
            {"theta_star", io::numbers(r.theta_star)}};
  if (r.err_population) {
    j["err_population"] = {{"value", io::number(r.err_population->value)},
                           {"std_error", io::number(r.err_population->std_error)}};
  } else {
    j["err_population"] = nullptr;
  }
  if (include_surrogate && r.surrogate) j["surrogate"] = surrogate_to_json(*r.surrogate);
  return j;
}

inline Json highdim_result_to_json(const HighDimResult& r) {
  return {{"schema_version", kSchemaVersion},
          {"w_priv", io::numbers(r.w_priv)},
          {"w_bar", io::numbers(r.w_bar)},
          {"projection",
           {{"seed", r.seed}, {"m", r.m}, {"p", r.p}, {"tag", std::string(projection_tag_name(r.tag))}}},
          {"k", r.k},
          {"h", r.h},
          {"epsilon", io::number(r.epsilon)},
          {"mechanism", r.mechanism},
          {"low_dim_method", r.low_dim_method},
          {"minimizer", r.minimizer},
          {"box_scale", io::number(r.box_scale)},
          {"gaussian_width", {{"value", io::number(r.width.value)}, {"std_error", io::number(r.width.std_error)}}},
          {"gamma", io::number(r.gamma)},
          {"distortion", {{"pass", r.distortion.pass}, {"max_distortion", io::number(r.distortion.max_distortion)}}},
          {"lipschitz_fraction", io::number(r.lipschitz_fraction)},
          {"recovery_fallback", r.recovery_fallback},
          {"recovery_converged", r.recovery_converged},
          {"recovery_residual", io::number(r.recovery_residual)},
          {"gauge", io::number(r.gauge)},
          {"comm", comm_to_json(r.comm)},
          {"missing_grid_points", r.missing_grid_points},
          {"excess_risk", io::optional_number(r.excess_risk)},
          {"zero_excess_risk", io::optional_number(r.zero_excess_risk)},
          {"projected_excess_risk", io::optional_number(r.projected_excess_risk)},
          {"empirical_minimum", io::optional_number(r.empirical_minimum)}};
}

}  // namespace polyldp
