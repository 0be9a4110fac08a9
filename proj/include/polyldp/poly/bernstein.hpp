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

// Bernstein bases, the iterated Bernstein operator I - (I - B_k)^h, and the
// tensor-product surrogate built from values on the grid {0, 1/k, ..., 1}^p.

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/tensor.hpp"

namespace polyldp {

inline constexpr std::size_t kDefaultGridCap = 10'000'000;

struct SurrogateConfig {
  int k = 1;  // grid granularity per axis
  int h = 1;  // iteration order
  int p = 1;  // dimension
  double smoothness_T = 1.0;

  void validate() const {
    detail::require(k >= 1, "SurrogateConfig: k must be >= 1");
    detail::require(h >= 1, "SurrogateConfig: h must be >= 1");
    detail::require(p >= 1, "SurrogateConfig: p must be >= 1");
    detail::require(smoothness_T > 0, "SurrogateConfig: T must be positive");
  }

  // (k+1)^p, or ResourceError beyond `cap`.
  std::size_t grid_size(std::size_t cap = kDefaultGridCap) const {
    return detail::checked_power(static_cast<std::size_t>(k) + 1, p, cap,
                                 "grid size (k+1)^p");
  }
};

namespace detail {

inline double log_binomial(int n, int r) {
  return std::lgamma(n + 1.0) - std::lgamma(r + 1.0) - std::lgamma(n - r + 1.0);
}

inline double binomial(int n, int r) {
  if (n <= 50) {
    double c = 1.0;
    for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
    return std::round(c);
  }
  return std::exp(log_binomial(n, r));
}

inline double bernstein_unchecked(int v, int k, double x) {
  if (x == 0.0) return v == 0 ? 1.0 : 0.0;
  if (x == 1.0) return v == k ? 1.0 : 0.0;
  if (k <= 50) {
    return binomial(k, v) * std::pow(x, v) * std::pow(1.0 - x, k - v);
  }
  return std::exp(log_binomial(k, v) + v * std::log(x) +
                  (k - v) * std::log1p(-x));
}

}  // namespace detail

// b_{v,k}(x) = C(k,v) x^v (1-x)^(k-v).
inline double bernstein_basis(int v, int k, double x) {
  detail::require(k >= 1, "bernstein_basis: k must be >= 1");
  detail::require(v >= 0 && v <= k, "bernstein_basis: v must lie in [0, k]");
  detail::require(x >= 0.0 && x <= 1.0, "bernstein_basis: x must lie in [0, 1]");
  return detail::bernstein_unchecked(v, k, x);
}

// All k+1 basis values at x.
inline std::vector<double> bernstein_basis_all(int k, double x) {
  std::vector<double> out(static_cast<std::size_t>(k) + 1);
  for (int v = 0; v <= k; ++v) out[v] = detail::bernstein_unchecked(v, k, x);
  return out;
}

// d/dx b_{u,k}(x) = k (b_{u-1,k-1}(x) - b_{u,k-1}(x)).
inline std::vector<double> bernstein_derivative_all(int k, double x) {
  std::vector<double> out(static_cast<std::size_t>(k) + 1, 0.0);
  if (k == 0) return out;
  const std::vector<double> lower = bernstein_basis_all(k - 1, x);
  for (int u = 0; u <= k; ++u) {
    const double left = u >= 1 ? lower[u - 1] : 0.0;
    const double right = u <= k - 1 ? lower[u] : 0.0;
    out[u] = k * (left - right);
  }
  return out;
}

// Row-major (k+1)x(k+1) matrix W with b^{(h)}_{v,k} = sum_u W[u][v] b_{u,k}.
// W = sum_{i=1}^{h} C(h,i) (-1)^{i-1} M^{i-1}, where M[w][u] = b_{u,k}(w/k) is
// the Bernstein operator acting on Bernstein coefficient vectors.
// Memoized per (k, h); the cache is shared and thread safe.
inline std::shared_ptr<const std::vector<double>> iterated_weights(int k, int h) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const std::vector<double>>>
      cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({k, h});
    if (it != cache.end()) return it->second;
  }
  const std::size_t n = static_cast<std::size_t>(k) + 1;
  std::vector<double> m(n * n);
  for (std::size_t w = 0; w < n; ++w) {
    const double node = static_cast<double>(w) / k;
    for (std::size_t u = 0; u < n; ++u) {
      m[w * n + u] = detail::bernstein_unchecked(static_cast<int>(u), k, node);
    }
  }
  std::vector<double> result(n * n, 0.0);
  std::vector<double> power(n * n, 0.0);  // M^{i-1}
  for (std::size_t d = 0; d < n; ++d) power[d * n + d] = 1.0;
  for (int i = 1; i <= h; ++i) {
    const double coef = detail::binomial(h, i) * ((i - 1) % 2 == 0 ? 1.0 : -1.0);
    for (std::size_t e = 0; e < n * n; ++e) result[e] += coef * power[e];
    if (i == h) break;
    std::vector<double> next(n * n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        const double a = m[r * n + c];
        if (a == 0.0) continue;
        for (std::size_t q = 0; q < n; ++q) next[r * n + q] += a * power[c * n + q];
      }
    }
    power.swap(next);
  }
  auto shared = std::make_shared<const std::vector<double>>(std::move(result));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(std::make_pair(k, h), std::move(shared)).first->second;
}

// The perturbed or exact multivariate iterated Bernstein polynomial built from
// grid values. Immutable; evaluation is safe from any number of threads.
class BernsteinSurrogate {
 public:
  BernsteinSurrogate(SurrogateConfig config, std::vector<double> grid_values)
      : config_(config), grid_values_(std::move(grid_values)) {
    config_.validate();
    const std::size_t size = config_.grid_size();
    if (grid_values_.size() != size) {
      throw DomainError("iterated_bernstein_fit: expected " + std::to_string(size) +
                        " grid values, got " +
                        std::to_string(grid_values_.size()));
    }
    // Pushing W through every axis turns the surrogate into a plain tensor
    // Bernstein polynomial with these coefficients.
    const std::size_t n = static_cast<std::size_t>(config_.k) + 1;
    auto w = iterated_weights(config_.k, config_.h);
    std::vector<std::size_t> extents(config_.p, n);
    coefficients_ = grid_values_;
    if (config_.h > 1) {
      for (int axis = 0; axis < config_.p; ++axis) {
        coefficients_ = detail::mode_product(coefficients_, extents, axis, *w, n);
      }
    }
    compensated_ = size > 100'000;
  }

  const SurrogateConfig& config() const { return config_; }
  std::span<const double> grid_values() const { return grid_values_; }
  std::span<const double> coefficients() const { return coefficients_; }

  double operator()(std::span<const double> theta) const {
    check_point(theta, "eval_surrogate");
    std::vector<std::vector<double>> basis(config_.p);
    for (int i = 0; i < config_.p; ++i) basis[i] = bernstein_basis_all(config_.k, theta[i]);
    return contract(basis);
  }

  std::vector<double> gradient(std::span<const double> theta) const {
    check_point(theta, "grad_surrogate");
    std::vector<std::vector<double>> basis(config_.p), deriv(config_.p);
    for (int i = 0; i < config_.p; ++i) {
      basis[i] = bernstein_basis_all(config_.k, theta[i]);
      deriv[i] = bernstein_derivative_all(config_.k, theta[i]);
    }
    std::vector<double> grad(config_.p);
    for (int j = 0; j < config_.p; ++j) {
      std::swap(basis[j], deriv[j]);
      grad[j] = contract(basis);
      std::swap(basis[j], deriv[j]);
    }
    return grad;
  }

 private:
  void check_point(std::span<const double> theta, const char* op) const {
    if (theta.size() != static_cast<std::size_t>(config_.p)) {
      throw DomainError(std::string(op) + ": point has wrong dimension");
    }
    for (double t : theta) {
      if (!(t >= 0.0 && t <= 1.0)) {
        throw DomainError(std::string(op) + ": point outside the unit cube");
      }
    }
  }

  double contract(const std::vector<std::vector<double>>& basis) const {
    std::vector<double> current =
        detail::contract_last(coefficients_, basis[config_.p - 1], compensated_);
    for (int axis = config_.p - 2; axis >= 0; --axis) {
      current = detail::contract_last(current, basis[axis], compensated_);
    }
    return current[0];
  }

  SurrogateConfig config_;
  std::vector<double> grid_values_;
  std::vector<double> coefficients_;
  bool compensated_ = false;
};

inline BernsteinSurrogate iterated_bernstein_fit(std::vector<double> grid_values,
                                                 const SurrogateConfig& config) {
  return BernsteinSurrogate(config, std::move(grid_values));
}

inline double eval_surrogate(const BernsteinSurrogate& s,
                             std::span<const double> theta) {
  return s(theta);
}

inline std::vector<double> grad_surrogate(const BernsteinSurrogate& s,
                                          std::span<const double> theta) {
  return s.gradient(theta);
}

// Grid points (v_1/k, ..., v_p/k) in lexicographic multi-index order.
inline std::vector<std::vector<double>> build_grid(int k, int p,
                                                   std::size_t cap = kDefaultGridCap) {
  SurrogateConfig cfg{k, 1, p, 1.0};
  cfg.validate();
  const std::size_t size = cfg.grid_size(cap);
  std::vector<std::vector<double>> grid(size, std::vector<double>(p));
  std::vector<std::size_t> idx(p);
  for (std::size_t g = 0; g < size; ++g) {
    detail::unflatten(g, static_cast<std::size_t>(k) + 1, idx);
    for (int i = 0; i < p; ++i) grid[g][i] = static_cast<double>(idx[i]) / k;
  }
  return grid;
}

}  // namespace polyldp
