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

// Multi-start projected gradient descent with Armijo backtracking, plus a
// dense grid scan for p <= 2 whose best cells seed extra starts. Results are
// merged by (value, lexicographic point), so the outcome does not depend on
// the thread count.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/parallel.hpp"
#include "polyldp/core/random.hpp"

namespace polyldp {

template <class S>
concept ProjectableSet = requires(const S& s, std::span<const double> x) {
  { s.project(x) } -> std::convertible_to<std::vector<double>>;
  { s.contains(x) } -> std::convertible_to<bool>;
  { s.lower() } -> std::convertible_to<std::vector<double>>;
  { s.upper() } -> std::convertible_to<std::vector<double>>;
};

struct MinimizerOptions {
  int starts = 32;
  int max_iterations = 2000;
  double step_tolerance = 1e-12;
  bool dense_grid = true;     // used only when p <= 2
  int grid_points_1d = 2001;  // per axis, p = 1
  int grid_points_2d = 201;   // per axis, p = 2
  int grid_seeds = 4;         // best grid cells refined by PGD
  unsigned threads = 1;
  std::uint64_t seed = 0;
};

struct MinimizeResult {
  std::vector<double> theta;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  std::string method;
};

namespace detail {

inline bool better(double va, std::span<const double> a, double vb,
                   std::span<const double> b) {
  if (va != vb) return va < vb;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

template <ProjectableSet Set, class F, class G>
MinimizeResult projected_descent(const Set& set, const F& f, const G& grad,
                                 std::vector<double> x, const MinimizerOptions& opt) {
  x = set.project(x);
  double fx = f(x);
  double eta = 1.0;
  MinimizeResult r;
  r.method = "pgd";
  const std::size_t p = x.size();
  std::vector<double> trial(p);
  for (r.iterations = 0; r.iterations < opt.max_iterations; ++r.iterations) {
    const std::vector<double> g = grad(x);
    bool accepted = false;
    double moved = 0.0;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      for (std::size_t i = 0; i < p; ++i) trial[i] = x[i] - eta * g[i];
      std::vector<double> y = set.project(trial);
      double lin = 0.0, sq = 0.0;
      for (std::size_t i = 0; i < p; ++i) {
        const double d = y[i] - x[i];
        lin += g[i] * d;
        sq += d * d;
      }
      const double fy = f(y);
      if (fy <= fx + lin + sq / (2.0 * eta) + 1e-15 * std::fabs(fx)) {
        moved = std::sqrt(sq);
        accepted = fy <= fx;
        if (accepted) {
          x = std::move(y);
          fx = fy;
        }
        break;
      }
      eta *= 0.5;
    }
    if (!accepted || moved < opt.step_tolerance) {
      r.converged = true;
      break;
    }
    eta = std::min(eta * 2.0, 1e6);
  }
  r.theta = std::move(x);
  r.value = fx;
  return r;
}

}  // namespace detail

template <ProjectableSet Set, class F, class G>
MinimizeResult minimize(const Set& set, const F& f, const G& grad,
                        const MinimizerOptions& opt = {}) {
  const auto lo = set.lower();
  const auto hi = set.upper();
  const std::size_t p = lo.size();
  std::vector<std::vector<double>> starts;

  // Box corners, then the box center, then random interior points.
  const std::size_t corners = p < 20 ? (std::size_t{1} << p) : 0;
  for (std::size_t c = 0; c < corners && starts.size() + 1 < static_cast<std::size_t>(opt.starts); ++c) {
    std::vector<double> x(p);
    for (std::size_t i = 0; i < p; ++i) x[i] = (c >> i) & 1 ? hi[i] : lo[i];
    starts.push_back(std::move(x));
  }
  {
    std::vector<double> mid(p);
    for (std::size_t i = 0; i < p; ++i) mid[i] = 0.5 * (lo[i] + hi[i]);
    starts.push_back(std::move(mid));
  }
  Stream rng = Stream::derive(opt.seed, StreamPurpose::kMinimizer);
  while (starts.size() < static_cast<std::size_t>(std::max(opt.starts, 1))) {
    std::vector<double> x(p);
    for (std::size_t i = 0; i < p; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * rng.uniform();
    starts.push_back(std::move(x));
  }

  std::string method = "multi-start-pgd";
  if (opt.dense_grid && p <= 2) {
    method = "dense-grid+pgd";
    const int m = p == 1 ? opt.grid_points_1d : opt.grid_points_2d;
    const std::size_t total = p == 1 ? m : static_cast<std::size_t>(m) * m;
    std::vector<double> values(total, std::numeric_limits<double>::infinity());
    std::vector<std::vector<double>> points(total);
    parallel_for(total, opt.threads, [&](std::size_t g) {
      std::vector<double> x(p);
      std::size_t rem = g;
      for (std::size_t i = p; i-- > 0;) {
        const std::size_t j = rem % m;
        rem /= m;
        x[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(j) / (m - 1);
      }
      if (set.contains(x)) values[g] = f(x);
      points[g] = std::move(x);
    });
    std::vector<std::size_t> order(total);
    for (std::size_t g = 0; g < total; ++g) order[g] = g;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    for (int s = 0; s < opt.grid_seeds && s < static_cast<int>(total); ++s) {
      if (std::isfinite(values[order[s]])) starts.push_back(points[order[s]]);
    }
  }

  std::vector<MinimizeResult> results(starts.size());
  parallel_for(starts.size(), opt.threads, [&](std::size_t s) {
    results[s] = detail::projected_descent(set, f, grad, starts[s], opt);
  });
  std::size_t best = 0;
  for (std::size_t s = 1; s < results.size(); ++s) {
    if (detail::better(results[s].value, results[s].theta, results[best].value,
                       results[best].theta)) {
      best = s;
    }
  }
  MinimizeResult out = std::move(results[best]);
  out.method = method;
  return out;
}

// Central finite-difference gradient, one-sided at the faces of [lo, hi].
template <class F>
std::vector<double> numeric_gradient(const F& f, std::span<const double> x,
                                     std::span<const double> lo, std::span<const double> hi,
                                     double step = 1e-6) {
  std::vector<double> g(x.size());
  std::vector<double> y(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::max(lo[i], x[i] - step);
    const double b = std::min(hi[i], x[i] + step);
    if (b <= a) {
      g[i] = 0.0;
      continue;
    }
    y[i] = a;
    const double fa = f(y);
    y[i] = b;
    const double fb = f(y);
    y[i] = x[i];
    g[i] = (fb - fa) / (b - a);
  }
  return g;
}

}  // namespace polyldp
