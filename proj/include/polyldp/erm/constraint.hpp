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
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyldp/core/error.hpp"

namespace polyldp {

enum class ConstraintKind { kBox, kL2Ball, kL1Ball, kSimplex };

inline std::string_view constraint_kind_name(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::kBox:
      return "box";
    case ConstraintKind::kL2Ball:
      return "l2";
    case ConstraintKind::kL1Ball:
      return "l1";
    case ConstraintKind::kSimplex:
      return "simplex";
  }
  return "unknown";
}

inline ConstraintKind parse_constraint_kind(std::string_view name) {
  if (name == "box") return ConstraintKind::kBox;
  if (name == "l2" || name == "l2-ball") return ConstraintKind::kL2Ball;
  if (name == "l1" || name == "l1-ball") return ConstraintKind::kL1Ball;
  if (name == "simplex") return ConstraintKind::kSimplex;
  throw DomainError("unknown constraint kind '" + std::string(name) + "'");
}

// A closed convex set with projection, membership, support function and
// linear minimization oracles.
//   box:     center + [-radius, radius]^p
//   l2:      {x : ||x - center||_2 <= radius}
//   l1:      {x : ||x - center||_1 <= radius}
//   simplex: {x >= 0 : sum x = radius}  (center unused)
// A ball of radius 0 is the singleton {center}.
class ConstraintSet {
 public:
  ConstraintSet(ConstraintKind kind, std::vector<double> center, double radius)
      : kind_(kind), center_(std::move(center)), radius_(radius) {
    detail::require(!center_.empty(), "ConstraintSet: dimension must be >= 1");
    detail::require(radius_ >= 0.0 && std::isfinite(radius_),
                    "ConstraintSet: radius must be finite and >= 0");
    if (kind_ == ConstraintKind::kSimplex) {
      detail::require(radius_ > 0.0, "ConstraintSet: simplex radius must be positive");
    }
  }

  static ConstraintSet unit_box(int p) {
    return {ConstraintKind::kBox, std::vector<double>(p, 0.5), 0.5};
  }
  static ConstraintSet box(std::vector<double> center, double half_width) {
    return {ConstraintKind::kBox, std::move(center), half_width};
  }
  static ConstraintSet l2_ball(std::vector<double> center, double radius) {
    return {ConstraintKind::kL2Ball, std::move(center), radius};
  }
  static ConstraintSet l1_ball(std::vector<double> center, double radius) {
    return {ConstraintKind::kL1Ball, std::move(center), radius};
  }
  static ConstraintSet simplex(int p, double radius = 1.0) {
    return {ConstraintKind::kSimplex, std::vector<double>(p, 0.0), radius};
  }
  static ConstraintSet singleton(std::vector<double> point) {
    return {ConstraintKind::kL2Ball, std::move(point), 0.0};
  }

  ConstraintKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(center_.size()); }
  std::span<const double> center() const { return center_; }
  double radius() const { return radius_; }

  std::vector<double> project(std::span<const double> x) const {
    check_dim(x);
    std::vector<double> out(x.begin(), x.end());
    switch (kind_) {
      case ConstraintKind::kBox:
        for (std::size_t i = 0; i < out.size(); ++i) {
          out[i] = std::clamp(out[i], center_[i] - radius_, center_[i] + radius_);
        }
        break;
      case ConstraintKind::kL2Ball: {
        double norm = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) {
          norm += (out[i] - center_[i]) * (out[i] - center_[i]);
        }
        norm = std::sqrt(norm);
        if (norm > radius_) {
          const double s = radius_ / norm;
          for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = center_[i] + s * (out[i] - center_[i]);
          }
        }
        break;
      }
      case ConstraintKind::kL1Ball: {
        std::vector<double> d(out.size());
        for (std::size_t i = 0; i < out.size(); ++i) d[i] = out[i] - center_[i];
        project_l1(d, radius_);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = center_[i] + d[i];
        break;
      }
      case ConstraintKind::kSimplex:
        project_simplex(out, radius_);
        break;
    }
    return out;
  }

  bool contains(std::span<const double> x, double tol = 1e-9) const {
    check_dim(x);
    switch (kind_) {
      case ConstraintKind::kBox:
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (std::fabs(x[i] - center_[i]) > radius_ + tol) return false;
        }
        return true;
      case ConstraintKind::kL2Ball: {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - center_[i]) * (x[i] - center_[i]);
        return std::sqrt(s) <= radius_ + tol;
      }
      case ConstraintKind::kL1Ball: {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += std::fabs(x[i] - center_[i]);
        return s <= radius_ + tol;
      }
      case ConstraintKind::kSimplex: {
        double s = 0.0;
        for (double v : x) {
          if (v < -tol) return false;
          s += v;
        }
        return std::fabs(s - radius_) <= tol * std::max(1.0, radius_);
      }
    }
    return false;
  }

  // max over a in C of <a, g>.
  double support(std::span<const double> g) const {
    check_dim(g);
    double base = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) base += center_[i] * g[i];
    switch (kind_) {
      case ConstraintKind::kBox: {
        double s = 0.0;
        for (double v : g) s += std::fabs(v);
        return base + radius_ * s;
      }
      case ConstraintKind::kL2Ball: {
        double s = 0.0;
        for (double v : g) s += v * v;
        return base + radius_ * std::sqrt(s);
      }
      case ConstraintKind::kL1Ball: {
        double m = 0.0;
        for (double v : g) m = std::max(m, std::fabs(v));
        return base + radius_ * m;
      }
      case ConstraintKind::kSimplex:
        return radius_ * *std::max_element(g.begin(), g.end());
    }
    return 0.0;
  }

  // argmin over a in C of <a, g> (a vertex for l1 and simplex).
  std::vector<double> linear_minimizer(std::span<const double> g) const {
    check_dim(g);
    std::vector<double> out(center_);
    switch (kind_) {
      case ConstraintKind::kBox:
        for (std::size_t i = 0; i < g.size(); ++i) {
          out[i] += g[i] > 0 ? -radius_ : radius_;
        }
        break;
      case ConstraintKind::kL2Ball: {
        double s = 0.0;
        for (double v : g) s += v * v;
        s = std::sqrt(s);
        if (s > 0) {
          for (std::size_t i = 0; i < g.size(); ++i) out[i] -= radius_ * g[i] / s;
        }
        break;
      }
      case ConstraintKind::kL1Ball: {
        std::size_t j = 0;
        for (std::size_t i = 1; i < g.size(); ++i) {
          if (std::fabs(g[i]) > std::fabs(g[j])) j = i;
        }
        out[j] += g[j] > 0 ? -radius_ : radius_;
        break;
      }
      case ConstraintKind::kSimplex: {
        const auto j = static_cast<std::size_t>(
            std::min_element(g.begin(), g.end()) - g.begin());
        std::fill(out.begin(), out.end(), 0.0);
        out[j] = radius_;
        break;
      }
    }
    return out;
  }

  // Minkowski gauge inf{r >= 0 : x in r C}; defined for sets containing 0
  // (centered l1/l2 balls and the simplex cone).
  double gauge(std::span<const double> x) const {
    check_dim(x);
    switch (kind_) {
      case ConstraintKind::kL1Ball:
      case ConstraintKind::kL2Ball: {
        for (double c : center_) {
          if (c != 0.0) throw DomainError("gauge: ball must be centered at 0");
        }
        double s = 0.0;
        for (double v : x) s += kind_ == ConstraintKind::kL1Ball ? std::fabs(v) : v * v;
        if (kind_ == ConstraintKind::kL2Ball) s = std::sqrt(s);
        return s / radius_;
      }
      case ConstraintKind::kSimplex: {
        double s = 0.0;
        for (double v : x) {
          if (v < 0.0) return std::numeric_limits<double>::infinity();
          s += v;
        }
        return s / radius_;
      }
      case ConstraintKind::kBox:
        break;
    }
    throw DomainError("gauge: unsupported constraint kind");
  }

  std::vector<double> lower() const {
    std::vector<double> out(center_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = kind_ == ConstraintKind::kSimplex ? 0.0 : center_[i] - radius_;
    }
    return out;
  }

  std::vector<double> upper() const {
    std::vector<double> out(center_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = kind_ == ConstraintKind::kSimplex ? radius_ : center_[i] + radius_;
    }
    return out;
  }

  bool inside_unit_cube() const {
    const auto lo = lower();
    const auto hi = upper();
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (lo[i] < -1e-12 || hi[i] > 1.0 + 1e-12) return false;
    }
    return true;
  }

  double diameter() const {
    switch (kind_) {
      case ConstraintKind::kBox:
        return 2.0 * radius_ * std::sqrt(static_cast<double>(dim()));
      case ConstraintKind::kL2Ball:
      case ConstraintKind::kL1Ball:
        return 2.0 * radius_;
      case ConstraintKind::kSimplex:
        return dim() > 1 ? std::sqrt(2.0) * radius_ : 0.0;
    }
    return 0.0;
  }

  // Euclidean projection onto {x >= 0 : sum x = r} by sorting.
  static void project_simplex(std::vector<double>& x, double r) {
    std::vector<double> u(x);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumsum = 0.0, tau = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      cumsum += u[i];
      const double t = (cumsum - r) / static_cast<double>(i + 1);
      if (u[i] - t > 0) tau = t;
    }
    for (auto& v : x) v = std::max(v - tau, 0.0);
  }

  // Euclidean projection onto {x : ||x||_1 <= r}.
  static void project_l1(std::vector<double>& x, double r) {
    double norm = 0.0;
    for (double v : x) norm += std::fabs(v);
    if (norm <= r) return;
    if (r == 0.0) {
      std::fill(x.begin(), x.end(), 0.0);
      return;
    }
    std::vector<double> a(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = std::fabs(x[i]);
    project_simplex(a, r);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::copysign(a[i], x[i]);
  }

 private:
  void check_dim(std::span<const double> x) const {
    if (x.size() != center_.size()) throw DomainError("ConstraintSet: dimension mismatch");
  }

  ConstraintKind kind_;
  std::vector<double> center_;
  double radius_;
};

}  // namespace polyldp
