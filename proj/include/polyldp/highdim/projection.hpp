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
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/random.hpp"

namespace polyldp {

enum class ProjectionTag { kGaussian, kRademacher };

inline std::string_view projection_tag_name(ProjectionTag t) {
  return t == ProjectionTag::kGaussian ? "gaussian" : "rademacher";
}

inline ProjectionTag parse_projection_tag(std::string_view name) {
  if (name == "gaussian") return ProjectionTag::kGaussian;
  if (name == "rademacher") return ProjectionTag::kRademacher;
  throw DomainError("unknown projection tag '" + std::string(name) + "'");
}

// m x p matrix (1/sqrt(m)) Phi~ with i.i.d. N(0,1) or +-1 entries, regenerated
// bit-exactly from (seed, m, p, tag). Row-major.
class ProjectionMatrix {
 public:
  ProjectionMatrix(std::size_t m, std::size_t p, ProjectionTag tag, std::uint64_t seed)
      : m_(m), p_(p), tag_(tag), seed_(seed) {
    detail::require(m >= 1 && p >= 1, "gen_projection: m and p must be >= 1");
    detail::require(m <= p, "gen_projection: need m <= p");
    data_.resize(m * p);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    Stream rng = Stream::derive(seed, StreamPurpose::kProjection);
    if (tag == ProjectionTag::kGaussian) {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (auto& v : data_) v = scale * normal(rng);
    } else {
      for (auto& v : data_) v = (rng() >> 63) ? scale : -scale;
    }
  }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return p_; }
  ProjectionTag tag() const { return tag_; }
  std::uint64_t seed() const { return seed_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * p_ + j]; }
  std::span<const double> data() const { return data_; }

  std::vector<double> apply(std::span<const double> a) const {
    detail::require(a.size() == p_, "ProjectionMatrix::apply: dimension mismatch");
    std::vector<double> out(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const double* row = &data_[i * p_];
      double s = 0.0;
      for (std::size_t j = 0; j < p_; ++j) s += row[j] * a[j];
      out[i] = s;
    }
    return out;
  }

  std::vector<double> apply_transpose(std::span<const double> u) const {
    detail::require(u.size() == m_, "ProjectionMatrix::apply_transpose: dimension mismatch");
    std::vector<double> out(p_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const double* row = &data_[i * p_];
      for (std::size_t j = 0; j < p_; ++j) out[j] += row[j] * u[i];
    }
    return out;
  }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(m_);
    for (std::size_t i = 0; i < m_; ++i) out[i] = data_[i * p_ + j];
    return out;
  }

 private:
  std::size_t m_;
  std::size_t p_;
  ProjectionTag tag_;
  std::uint64_t seed_;
  std::vector<double> data_;
};

inline ProjectionMatrix gen_projection(std::size_t m, std::size_t p, ProjectionTag tag,
                                       std::uint64_t seed) {
  return ProjectionMatrix(m, p, tag, seed);
}

struct JlCheckResult {
  bool pass = true;
  double max_distortion = 0.0;
};

// max over a in S of | ||Phi a||^2 - ||a||^2 | / ||a||^2 (0 for a = 0),
// compared against gamma.
inline JlCheckResult jl_check(const ProjectionMatrix& phi,
                              std::span<const std::vector<double>> points, double gamma) {
  detail::require(!points.empty(), "jl_check: empty point set");
  JlCheckResult r;
  for (const auto& a : points) {
    double na = 0.0;
    for (double v : a) na += v * v;
    if (na == 0.0) continue;
    double nb = 0.0;
    for (double v : phi.apply(a)) nb += v * v;
    r.max_distortion = std::max(r.max_distortion, std::fabs(nb - na) / na);
  }
  r.pass = r.max_distortion <= gamma;
  return r;
}

// Smallest m with m >= C psi^4 / gamma^2 * max(G_S, log(1/beta))^2.
inline std::size_t distortion_projection_dimension(double width, double gamma, double beta,
                                                  double psi = 1.0, double C = 1.0) {
  detail::require(gamma > 0.0 && gamma < 1.0, "projection dimension: gamma must lie in (0, 1)");
  detail::require(beta > 0.0 && beta < 1.0, "projection dimension: beta must lie in (0, 1)");
  const double t = std::max(width, std::log(1.0 / beta));
  return static_cast<std::size_t>(std::ceil(C * std::pow(psi, 4) * t * t / (gamma * gamma)));
}

// gamma = psi sqrt(G_C + sqrt(log n)) log(1/beta) (log(n/beta))^{1/4} / (sqrt(n) eps).
inline double default_distortion(double width, std::size_t n, double epsilon, double beta,
                                  double psi = 1.0) {
  const double nn = static_cast<double>(n);
  return psi * std::sqrt(width + std::sqrt(std::log(nn))) * std::log(1.0 / beta) *
         std::pow(std::log(nn / beta), 0.25) / (std::sqrt(nn) * epsilon);
}

// m = psi^4 (G_C + sqrt(log n))^2 log(n/beta) / gamma^2, all constants 1.
inline double risk_projection_dimension(double width, std::size_t n, double beta, double gamma,
                                        double psi = 1.0) {
  const double nn = static_cast<double>(n);
  const double t = width + std::sqrt(std::log(nn));
  return std::pow(psi, 4) * t * t * std::log(nn / beta) / (gamma * gamma);
}

}  // namespace polyldp
