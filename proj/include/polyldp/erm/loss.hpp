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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/tensor.hpp"

namespace polyldp {

// One player's data: a feature vector and a scalar label.
struct Record {
  std::vector<double> x;
  double y = 0.0;
};

// A loss l(theta, record) in [0,1] for theta in [0,1]^p.
struct LossSpec {
  std::string name;
  int p = 1;
  std::function<double(std::span<const double>, const Record&)> evaluate;
  int h_max = 2;       // documented smoothness order
  double T = 1.0;      // bound on partial derivatives up to h_max
  bool convex = false;
  std::optional<double> lipschitz;

  double operator()(std::span<const double> theta, const Record& r) const {
    return evaluate(theta, r);
  }
};

// Empirical risk (1/n) sum_i l(theta, x_i).
inline double empirical_risk(const LossSpec& loss, std::span<const Record> data,
                             std::span<const double> theta) {
  detail::CompensatedSum s;
  for (const auto& r : data) s.add(loss(theta, r));
  return s.value() / static_cast<double>(data.size());
}

namespace losses {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// ((<theta, x>/p) - y)^2 for x in [0,1]^p, y in [0,1]. Convex, (inf, 2)-smooth.
inline LossSpec rescaled_squared(int p) {
  LossSpec l;
  l.name = "squared";
  l.p = p;
  l.h_max = 1000;
  l.T = 2.0;
  l.convex = true;
  l.lipschitz = 2.0 / std::sqrt(static_cast<double>(p));
  l.evaluate = [p](std::span<const double> theta, const Record& r) {
    const double m = dot(theta, r.x) / p - r.y;
    return m * m;
  };
  return l;
}

// Logistic loss log(1 + exp(-y <2 theta - 1, x>)) for x in [-1,1]^p and
// y in {-1,+1}, affinely rescaled from [log(1+e^{-p}), log(1+e^{p})] onto
// [0,1]. Convex, (inf, T)-smooth with T = 2^h p^h / range (h-th derivative of
// softplus is bounded by 1).
inline LossSpec rescaled_logistic(int p) {
  LossSpec l;
  l.name = "logistic";
  l.p = p;
  l.h_max = 1000;
  const double lo = std::log1p(std::exp(-static_cast<double>(p)));
  const double hi = std::log1p(std::exp(static_cast<double>(p)));
  l.T = 4.0 * p * p / (hi - lo);
  l.convex = true;
  l.lipschitz = 2.0 * std::sqrt(static_cast<double>(p)) / (hi - lo);
  l.evaluate = [lo, hi](std::span<const double> theta, const Record& r) {
    double m = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) m += (2.0 * theta[i] - 1.0) * r.x[i];
    const double z = -r.y * m;
    const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    return (softplus - lo) / (hi - lo);
  };
  return l;
}

// sigmoid(steepness * (||theta - x||^2 - radius)): a smooth, bounded and
// non-convex loss whose empirical risk has one well per data cluster.
inline LossSpec sigmoid_well(int p, double steepness = 12.0, double radius = 0.1) {
  LossSpec l;
  l.name = "sigmoid_well";
  l.p = p;
  l.h_max = 1000;
  l.T = std::pow(steepness, 2.0);
  l.convex = false;
  l.evaluate = [steepness, radius](std::span<const double> theta, const Record& r) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double d = theta[i] - r.x[i];
      d2 += d * d;
    }
    return 1.0 / (1.0 + std::exp(-steepness * (d2 - radius)));
  };
  return l;
}

inline LossSpec constant(int p, double c) {
  LossSpec l;
  l.name = "constant";
  l.p = p;
  l.h_max = 1000;
  l.T = 1.0;
  l.convex = true;
  l.lipschitz = 0.0;
  l.evaluate = [c](std::span<const double>, const Record&) { return c; };
  return l;
}

inline LossSpec by_name(const std::string& name, int p) {
  if (name == "squared") return rescaled_squared(p);
  if (name == "logistic") return rescaled_logistic(p);
  if (name == "sigmoid_well") return sigmoid_well(p);
  throw DomainError("unknown loss '" + name + "'");
}

}  // namespace losses
}  // namespace polyldp
