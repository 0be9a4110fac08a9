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

// Generalized linear losses l(w, (y, z)) = f(<w, y>, z).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/tensor.hpp"
#include "polyldp/erm/constraint.hpp"
#include "polyldp/erm/minimizer.hpp"

namespace polyldp {

struct GLMRecord {
  std::vector<double> y;  // ||y||_2 <= 1
  double z = 0.0;         // |z| <= 1
};

struct GLMLoss {
  std::string name;
  // Link on [-margin_bound, margin_bound] x [-1, 1] with values in [0, 1].
  std::function<double(double, double)> link;
  std::function<double(double, double)> derivative;  // d link / d margin
  double margin_bound = 1.0;
  double lipschitz = 1.0;  // in the margin
  bool convex = true;

  double clamp(double margin) const {
    return std::clamp(margin, -margin_bound, margin_bound);
  }
  double operator()(double margin, double z) const { return link(clamp(margin), z); }
  // Zero outside the clamp range.
  double slope(double margin, double z) const {
    if (margin <= -margin_bound || margin >= margin_bound) return 0.0;
    return derivative(margin, z);
  }
};

namespace glm_losses {

inline double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }
inline double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// (softplus(-z a) - softplus(-A)) / A; softplus(A) - softplus(-A) = A.
inline GLMLoss logistic(double A = 1.0) {
  detail::require(A > 0.0, "logistic GLM: margin bound must be positive");
  GLMLoss l;
  l.name = "logistic";
  l.margin_bound = A;
  l.lipschitz = 1.0 / A;
  l.link = [A](double a, double z) {
    return std::clamp((softplus(-z * a) - softplus(-A)) / A, 0.0, 1.0);
  };
  l.derivative = [A](double a, double z) { return -z * sigmoid(-z * a) / A; };
  return l;
}

// (a - z)^2 / (A + 1)^2.
inline GLMLoss squared(double A = 1.0) {
  detail::require(A > 0.0, "squared GLM: margin bound must be positive");
  GLMLoss l;
  l.name = "squared";
  l.margin_bound = A;
  l.lipschitz = 2.0 / (A + 1.0);
  const double s = (A + 1.0) * (A + 1.0);
  l.link = [s](double a, double z) { return (a - z) * (a - z) / s; };
  l.derivative = [s](double a, double z) { return 2.0 * (a - z) / s; };
  return l;
}

inline GLMLoss by_name(const std::string& name, double A = 1.0) {
  if (name == "logistic") return logistic(A);
  if (name == "squared") return squared(A);
  throw DomainError("unknown GLM loss '" + name + "'");
}

}  // namespace glm_losses

// Throws DomainError on ||y||_2 > 1 or |z| > 1.
inline void check_glm_records(std::span<const GLMRecord> data, std::size_t p) {
  detail::require(!data.empty(), "GLM dataset is empty");
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& r = data[i];
    detail::require(r.y.size() == p, "GLM record " + std::to_string(i) + " has wrong dimension");
    double sq = 0.0;
    for (double v : r.y) sq += v * v;
    detail::require(sq <= 1.0 + 1e-12, "GLM record " + std::to_string(i) + " has ||y|| > 1");
    detail::require(std::fabs(r.z) <= 1.0, "GLM record " + std::to_string(i) + " has |z| > 1");
  }
}

// Largest |f(a, z) - f(b, z)| / |a - b| over `samples` random margin pairs
// per label in {-1, 0, 1}.
inline double measured_lipschitz(const GLMLoss& loss, int samples = 10'000) {
  double worst = 0.0;
  const double A = loss.margin_bound;
  for (double z : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    for (int s = 0; s < samples; ++s) {
      const double a = -A + 2.0 * A * (s + 0.5) / samples;
      const double b = std::min(A, a + 2.0 * A / samples);
      if (b <= a) continue;
      worst = std::max(worst, std::fabs(loss(a, z) - loss(b, z)) / (b - a));
    }
  }
  return worst;
}

inline double glm_risk(const GLMLoss& loss, std::span<const GLMRecord> data,
                       std::span<const double> w) {
  detail::require(!data.empty(), "glm_risk: empty dataset");
  detail::CompensatedSum s;
  for (const auto& r : data) s.add(loss(detail::dot(r.y, w, false), r.z));
  return s.value() / static_cast<double>(data.size());
}

inline std::vector<double> glm_gradient(const GLMLoss& loss, std::span<const GLMRecord> data,
                                        std::span<const double> w) {
  std::vector<double> g(w.size(), 0.0);
  for (const auto& r : data) {
    const double d = loss.slope(detail::dot(r.y, w, false), r.z);
    if (d == 0.0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) g[j] += d * r.y[j];
  }
  for (auto& v : g) v /= static_cast<double>(data.size());
  return g;
}

struct GLMMinimum {
  std::vector<double> w;
  double value = 0.0;
  bool converged = false;
};

// Non-private min over C of the empirical GLM risk by projected gradient from
// the center of C (the risk is convex for convex links).
inline GLMMinimum glm_oracle(const GLMLoss& loss, std::span<const GLMRecord> data,
                             const ConstraintSet& C, int max_iterations = 5000) {
  detail::require(C.dim() == static_cast<int>(data.front().y.size()),
                  "glm_oracle: constraint dimension != record dimension");
  MinimizerOptions opt;
  opt.max_iterations = max_iterations;
  opt.step_tolerance = 1e-13;
  auto f = [&](std::span<const double> w) { return glm_risk(loss, data, w); };
  auto g = [&](std::span<const double> w) { return glm_gradient(loss, data, w); };
  std::vector<double> start(C.center().begin(), C.center().end());
  if (C.kind() == ConstraintKind::kSimplex) {
    std::fill(start.begin(), start.end(), C.radius() / C.dim());
  }
  const MinimizeResult r = detail::projected_descent(C, f, g, std::move(start), opt);
  return {r.theta, r.value, r.converged};
}

}  // namespace polyldp
