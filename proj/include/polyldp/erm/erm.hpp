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
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/parallel.hpp"
#include "polyldp/core/random.hpp"
#include "polyldp/core/tensor.hpp"
#include "polyldp/erm/constraint.hpp"
#include "polyldp/erm/loss.hpp"
#include "polyldp/erm/minimizer.hpp"
#include "polyldp/poly/bernstein.hpp"
#include "polyldp/protocol/simulator.hpp"
#include "polyldp/protocol/transcript.hpp"

namespace polyldp {

inline constexpr int kMaxAutoGranularity = 64;

// k = (sqrt(p n) eps / (2^{(h+1)p} sqrt(log(1/beta))))^{1/(h+p)}, rounded,
// with unit constant and D_h = 1; clamped to [1, kMaxAutoGranularity].
inline int auto_granularity(std::size_t n, int p, int h, double epsilon, double beta) {
  detail::require(n >= 1 && p >= 1 && h >= 1, "auto_granularity: bad arguments");
  detail::require(epsilon > 0.0 && beta > 0.0 && beta < 1.0,
                  "auto_granularity: bad privacy parameters");
  if (std::isinf(epsilon)) return kMaxAutoGranularity;
  const double base = std::sqrt(static_cast<double>(p) * static_cast<double>(n)) * epsilon /
                      (std::exp2(static_cast<double>((h + 1) * p)) *
                       std::sqrt(std::log(1.0 / beta)));
  const double k = std::round(std::pow(base, 1.0 / static_cast<double>(h + p)));
  return static_cast<int>(std::clamp(k, 1.0, static_cast<double>(kMaxAutoGranularity)));
}

struct OracleOptions {
  int grid_points_1d = 1025;
  int grid_points_2d = 129;
  int table_points_high = 4096;  // total table size for p >= 3
  int grid_seeds = 4;
  int starts = 32;
  unsigned threads = 1;
  std::uint64_t seed = 0;
};

// Non-private empirical risk oracle: L^ tabulated on a regular grid of the
// unit cube, and its minimum over C (grid scan then projected descent with
// finite-difference gradients; 32-start descent for p >= 3).
class EmpiricalOracle {
 public:
  EmpiricalOracle(std::span<const Record> data, const LossSpec& loss, ConstraintSet C,
                  OracleOptions opt = {})
      : data_(data.begin(), data.end()), loss_(loss), set_(std::move(C)), opt_(opt) {
    detail::require(!data_.empty(), "EmpiricalOracle: empty dataset");
    detail::require(set_.dim() == loss_.p, "EmpiricalOracle: constraint dimension != loss p");
    const int p = loss_.p;
    const int m = p == 1   ? opt_.grid_points_1d
                  : p == 2 ? opt_.grid_points_2d
                           : std::max(2, static_cast<int>(std::floor(
                                             std::pow(opt_.table_points_high, 1.0 / p))));
    const std::size_t total = detail::checked_power(m, p, 10'000'000, "oracle table");
    table_points_.assign(total, std::vector<double>(p));
    table_risks_.assign(total, 0.0);
    std::vector<std::size_t> idx(p);
    for (std::size_t g = 0; g < total; ++g) {
      detail::unflatten(g, m, idx);
      for (int i = 0; i < p; ++i) table_points_[g][i] = static_cast<double>(idx[i]) / (m - 1);
    }
    parallel_for(total, opt_.threads, [&](std::size_t g) { table_risks_[g] = risk(table_points_[g]); });

    auto f = [this](std::span<const double> t) { return risk(t); };
    const auto lo = set_.lower();
    const auto hi = set_.upper();
    auto grad = [&](std::span<const double> t) { return numeric_gradient(f, t, lo, hi); };
    MinimizerOptions mo;
    mo.max_iterations = 5000;
    mo.step_tolerance = 1e-13;
    mo.threads = opt_.threads;
    mo.seed = opt_.seed;
    if (p <= 2) {
      std::vector<std::size_t> order;
      for (std::size_t g = 0; g < total; ++g) {
        if (set_.contains(table_points_[g])) order.push_back(g);
      }
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return table_risks_[a] < table_risks_[b];
      });
      std::vector<std::vector<double>> starts;
      for (int s = 0; s < opt_.grid_seeds && s < static_cast<int>(order.size()); ++s) {
        starts.push_back(table_points_[order[s]]);
      }
      if (starts.empty()) {
        // C is thinner than the table spacing (e.g. a singleton).
        std::vector<double> c(set_.center().begin(), set_.center().end());
        starts.push_back(set_.project(c));
      }
      MinimizeResult best;
      best.value = std::numeric_limits<double>::infinity();
      for (const auto& s : starts) {
        auto r = detail::projected_descent(set_, f, grad, s, mo);
        if (detail::better(r.value, r.theta, best.value, best.theta)) best = std::move(r);
      }
      argmin_ = best.theta;
      minimum_ = best.value;
    } else {
      mo.starts = opt_.starts;
      mo.dense_grid = false;
      auto r = minimize(set_, f, grad, mo);
      argmin_ = r.theta;
      minimum_ = r.value;
    }
  }

  double risk(std::span<const double> theta) const {
    return empirical_risk(loss_, data_, theta);
  }

  std::span<const double> argmin() const { return argmin_; }
  double minimum() const { return minimum_; }
  const LossSpec& loss() const { return loss_; }
  const ConstraintSet& constraint() const { return set_; }
  std::span<const Record> data() const { return data_; }

  // L^(theta) - min_C L^.
  double excess(std::span<const double> theta) const {
    if (!set_.contains(theta, 1e-7)) {
      throw DomainError("excess_empirical_risk: theta is not in C");
    }
    return risk(theta) - minimum_;
  }

  // max |s(theta) - L^(theta)| over the table and any extra points.
  template <class Surrogate>
  double sup_error(const Surrogate& s, std::span<const std::vector<double>> extra = {}) const {
    double sup = 0.0;
    for (std::size_t g = 0; g < table_points_.size(); ++g) {
      sup = std::max(sup, std::fabs(s(table_points_[g]) - table_risks_[g]));
    }
    for (const auto& x : extra) sup = std::max(sup, std::fabs(s(x) - risk(x)));
    return sup;
  }

  const std::vector<std::vector<double>>& table_points() const { return table_points_; }
  std::span<const double> table_risks() const { return table_risks_; }

 private:
  std::vector<Record> data_;
  LossSpec loss_;
  ConstraintSet set_;
  OracleOptions opt_;
  std::vector<std::vector<double>> table_points_;
  std::vector<double> table_risks_;
  std::vector<double> argmin_;
  double minimum_ = 0.0;
};

inline double excess_empirical_risk(std::span<const double> theta, std::span<const Record> data,
                                    const LossSpec& loss, const ConstraintSet& C,
                                    OracleOptions opt = {}) {
  return EmpiricalOracle(data, loss, C, opt).excess(theta);
}

struct PopulationEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Monte Carlo L_P(theta) - min L_P on a fresh sample of size eval_n; the
// standard error is that of the per-record loss differences.
inline PopulationEstimate excess_population_risk(
    std::span<const double> theta, const std::function<Record(Stream&)>& sampler,
    const LossSpec& loss, const ConstraintSet& C, std::size_t eval_n, std::uint64_t seed,
    OracleOptions opt = {}) {
  detail::require(eval_n >= 100, "excess_population_risk: eval_n must be >= 100");
  detail::require(C.contains(theta, 1e-7), "excess_population_risk: theta is not in C");
  Stream rng = Stream::derive(seed, StreamPurpose::kData, 0x9e37);
  std::vector<Record> fresh(eval_n);
  for (auto& r : fresh) r = sampler(rng);
  EmpiricalOracle oracle(fresh, loss, C, opt);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < eval_n; ++i) {
    const double d = loss(theta, fresh[i]) - loss(oracle.argmin(), fresh[i]);
    const double delta = d - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (d - mean);
  }
  const double var = eval_n > 1 ? m2 / static_cast<double>(eval_n - 1) : 0.0;
  return {oracle.excess(theta), std::sqrt(var / static_cast<double>(eval_n))};
}

struct ErmOptions {
  MinimizerOptions minimizer;
  OracleOptions oracle;
  bool evaluate = true;  // compute Err_D and the sup-grid error
  const EmpiricalOracle* oracle_cache = nullptr;
};

struct ERMResult {
  std::vector<double> theta_priv;
  std::shared_ptr<const BernsteinSurrogate> surrogate;
  double surrogate_value = 0.0;
  double mu = 0.0;
  int k = 0;
  int h = 0;
  int p = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::string mechanism;
  std::string minimizer;  // substitute for the approximately-convex optimizer
  bool converged = false;
  std::size_t missing_grid_points = 0;
  CommStats comm;
  std::shared_ptr<const Transcript> transcript;
  // Filled when ErmOptions::evaluate is set.
  std::optional<double> err_empirical;
  std::optional<double> sup_grid_error;
  std::optional<double> empirical_minimum;
  std::vector<double> theta_star;
  std::optional<PopulationEstimate> err_population;
};

inline double ridge_auto_mu(std::size_t n) {
  return std::pow(static_cast<double>(n), -1.0 / 12.0);
}

// Minimizes s(theta) + (mu/2)||theta||^2 over a set inside [0,1]^p.
template <ProjectableSet Set>
MinimizeResult minimize_surrogate(const BernsteinSurrogate& s, const Set& set, double mu,
                                  const MinimizerOptions& options) {
  const int p = s.config().p;
  auto clamp01 = [p](std::span<const double> t) {
    std::vector<double> c(t.begin(), t.end());
    for (int i = 0; i < p; ++i) c[i] = std::clamp(c[i], 0.0, 1.0);
    return c;
  };
  auto f = [&](std::span<const double> t) {
    const auto c = clamp01(t);
    double v = s(c);
    if (mu > 0.0) {
      double sq = 0.0;
      for (double x : c) sq += x * x;
      v += 0.5 * mu * sq;
    }
    return v;
  };
  auto grad = [&](std::span<const double> t) {
    const auto c = clamp01(t);
    auto g = s.gradient(c);
    if (mu > 0.0) {
      for (int i = 0; i < p; ++i) g[i] += mu * c[i];
    }
    return g;
  };
  MinimizeResult r = minimize(set, f, grad, options);
  r.theta = clamp01(r.theta);
  return r;
}

namespace detail {

inline ERMResult run_erm(std::span<const Record> dataset, const LossSpec& loss,
                         const ConstraintSet& C, const ProtocolConfig& config, double mu,
                         const ErmOptions& options) {
  detail::require(C.dim() == loss.p, "private_erm: constraint dimension != loss p");
  detail::require(C.inside_unit_cube(), "private_erm: C must lie inside [0,1]^p");
  detail::require(mu >= 0.0, "private_erm_regularized: mu must be >= 0");
  ProtocolOutput proto = run_protocol(dataset, loss, config);
  auto surrogate = std::make_shared<const BernsteinSurrogate>(config.surrogate,
                                                              std::move(proto.grid_estimates));
  const int p = loss.p;
  MinimizerOptions mo = options.minimizer;
  mo.seed = config.seed;
  const MinimizeResult min = minimize_surrogate(*surrogate, C, mu, mo);

  ERMResult out;
  out.theta_priv = min.theta;
  out.surrogate = surrogate;
  out.surrogate_value = min.value;
  out.mu = mu;
  out.k = config.surrogate.k;
  out.h = config.surrogate.h;
  out.p = p;
  out.epsilon = config.privacy.epsilon;
  out.seed = config.seed;
  out.mechanism = std::string(mechanism_name(config.mechanism));
  out.minimizer = min.method;
  out.converged = min.converged;
  for (bool m : proto.missing) out.missing_grid_points += m ? 1 : 0;
  out.comm = comm_stats(proto.transcript);
  out.transcript = std::make_shared<const Transcript>(std::move(proto.transcript));

  if (options.evaluate) {
    std::unique_ptr<EmpiricalOracle> owned;
    const EmpiricalOracle* oracle = options.oracle_cache;
    if (oracle == nullptr) {
      owned = std::make_unique<EmpiricalOracle>(dataset, loss, C, options.oracle);
      oracle = owned.get();
    }
    out.theta_star.assign(oracle->argmin().begin(), oracle->argmin().end());
    out.empirical_minimum = oracle->minimum();
    out.err_empirical = oracle->risk(out.theta_priv) - oracle->minimum();
    const std::vector<std::vector<double>> extra = {out.theta_priv, out.theta_star};
    out.sup_grid_error = oracle->sup_error(
        [&](std::span<const double> t) { return (*surrogate)(t); }, extra);
  }
  return out;
}

}  // namespace detail

inline ERMResult private_erm(std::span<const Record> dataset, const LossSpec& loss,
                             const ConstraintSet& C, const ProtocolConfig& config,
                             const ErmOptions& options = {}) {
  return detail::run_erm(dataset, loss, C, config, 0.0, options);
}

// mu = nullopt selects n^{-1/12}. The ridge term is data independent and is
// added by the server after the round.
inline ERMResult private_erm_regularized(std::span<const Record> dataset, const LossSpec& loss,
                                         const ConstraintSet& C, const ProtocolConfig& config,
                                         std::optional<double> mu,
                                         const ErmOptions& options = {}) {
  detail::require(loss.convex, "private_erm_regularized: loss must be flagged convex");
  const double m = mu.value_or(ridge_auto_mu(dataset.size()));
  detail::require(m >= 0.0, "private_erm_regularized: mu must be >= 0");
  return detail::run_erm(dataset, loss, C, config, m, options);
}

}  // namespace polyldp
