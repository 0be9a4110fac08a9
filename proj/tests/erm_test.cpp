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


#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "polyldp/erm/constraint.hpp"
#include "polyldp/erm/erm.hpp"
#include "polyldp/erm/loss.hpp"
#include "polyldp/erm/minimizer.hpp"
#include "polyldp/experiment/datasets.hpp"

namespace polyldp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ProtocolConfig config(Mechanism m, double eps, int k, int h, int p, std::uint64_t seed) {
  ProtocolConfig c;
  c.mechanism = m;
  c.privacy.epsilon = eps;
  c.surrogate = SurrogateConfig{k, h, p, 2.0};
  c.seed = seed;
  return c;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

TEST(Losses, RangeOnSampledPairs) {
  Stream rng(3);
  for (const char* name : {"squared", "logistic", "sigmoid_well"}) {
    for (int p : {1, 3}) {
      const auto loss = losses::by_name(name, p);
      const auto data = datasets::erm_dataset(datasets::default_erm_dataset(name), 200, p, 1);
      for (const auto& r : data) {
        std::vector<double> theta(p);
        for (auto& t : theta) t = rng.uniform();
        const double v = loss(theta, r);
        ASSERT_GE(v, 0.0) << name;
        ASSERT_LE(v, 1.0) << name;
      }
    }
  }
  EXPECT_THROW(losses::by_name("hinge", 1), DomainError);
}

TEST(Constraint, ProjectionExamples) {
  const auto l1 = ConstraintSet::l1_ball({0.0, 0.0}, 1.0);
  const std::vector<double> a = {1.0, 1.0};
  const auto pa = l1.project(a);
  EXPECT_NEAR(pa[0], 0.5, 1e-12);
  EXPECT_NEAR(pa[1], 0.5, 1e-12);
  const auto simplex = ConstraintSet::simplex(2);
  const std::vector<double> b = {0.8, 0.6};
  const auto pb = simplex.project(b);
  EXPECT_NEAR(pb[0], 0.6, 1e-12);
  EXPECT_NEAR(pb[1], 0.4, 1e-12);
  const auto l2 = ConstraintSet::l2_ball({0.5, 0.5}, 0.1);
  const std::vector<double> c = {0.5, 1.0};
  const auto pc = l2.project(c);
  EXPECT_NEAR(pc[1], 0.6, 1e-12);
  const auto box = ConstraintSet::unit_box(2);
  const std::vector<double> d = {-0.2, 0.4};
  EXPECT_EQ(box.project(d), (std::vector<double>{0.0, 0.4}));
}

TEST(Constraint, ProjectionIdempotentAndFeasible) {
  Stream rng(9);
  const std::vector<ConstraintSet> sets = {
      ConstraintSet::unit_box(3), ConstraintSet::box({0.5, 0.5, 0.5}, 0.2),
      ConstraintSet::l2_ball({0.5, 0.5, 0.5}, 0.3), ConstraintSet::l1_ball({0.5, 0.5, 0.5}, 0.4),
      ConstraintSet::simplex(3), ConstraintSet::singleton({0.2, 0.3, 0.4})};
  for (const auto& s : sets) {
    for (int t = 0; t < 200; ++t) {
      std::vector<double> x(3);
      for (auto& v : x) v = 3.0 * rng.uniform() - 1.0;
      const auto p1 = s.project(x);
      EXPECT_TRUE(s.contains(p1)) << constraint_kind_name(s.kind());
      const auto p2 = s.project(p1);
      for (int i = 0; i < 3; ++i) EXPECT_NEAR(p1[i], p2[i], 1e-12);
    }
  }
}

TEST(Constraint, SupportAndLinearMinimizer) {
  const std::vector<double> g = {0.3, -0.4};
  EXPECT_NEAR(ConstraintSet::l2_ball({0.0, 0.0}, 2.0).support(g), 1.0, 1e-12);
  EXPECT_NEAR(ConstraintSet::l1_ball({0.0, 0.0}, 2.0).support(g), 0.8, 1e-12);
  EXPECT_NEAR(ConstraintSet::box({0.0, 0.0}, 1.0).support(g), 0.7, 1e-12);
  EXPECT_NEAR(ConstraintSet::simplex(2, 2.0).support(g), 0.6, 1e-12);
  const auto l1 = ConstraintSet::l1_ball({0.0, 0.0}, 2.0);
  const auto v = l1.linear_minimizer(g);
  EXPECT_NEAR(v[0] * g[0] + v[1] * g[1], -l1.support(std::vector<double>{-0.3, 0.4}), 1e-12);
  EXPECT_EQ(v, (std::vector<double>{0.0, 2.0}));
}

TEST(Constraint, GaugeAndDiameter) {
  const std::vector<double> x = {0.3, -0.4};
  EXPECT_NEAR(ConstraintSet::l1_ball({0.0, 0.0}, 0.5).gauge(x), 1.4, 1e-12);
  EXPECT_NEAR(ConstraintSet::l2_ball({0.0, 0.0}, 0.5).gauge(x), 1.0, 1e-12);
  EXPECT_TRUE(std::isinf(ConstraintSet::simplex(2).gauge(x)));
  EXPECT_THROW(ConstraintSet::unit_box(2).gauge(x), DomainError);
  EXPECT_THROW(ConstraintSet::l1_ball({0.1, 0.0}, 0.5).gauge(x), DomainError);
  EXPECT_NEAR(ConstraintSet::unit_box(4).diameter(), 2.0, 1e-12);
  EXPECT_EQ(parse_constraint_kind("l1-ball"), ConstraintKind::kL1Ball);
  EXPECT_THROW(parse_constraint_kind("ellipse"), DomainError);
}

TEST(Minimizer, QuadraticInBox) {
  const auto box = ConstraintSet::unit_box(2);
  auto f = [](std::span<const double> t) {
    return (t[0] - 0.3) * (t[0] - 0.3) + (t[1] - 1.4) * (t[1] - 1.4);
  };
  auto g = [](std::span<const double> t) {
    return std::vector<double>{2 * (t[0] - 0.3), 2 * (t[1] - 1.4)};
  };
  const auto r = minimize(box, f, g, MinimizerOptions{});
  EXPECT_NEAR(r.theta[0], 0.3, 1e-6);
  EXPECT_NEAR(r.theta[1], 1.0, 1e-12);
  EXPECT_EQ(r.method, "dense-grid+pgd");
}

TEST(Minimizer, TiesGoToLexicographicallyLowest) {
  const auto box = ConstraintSet::unit_box(2);
  auto f = [](std::span<const double>) { return 0.25; };
  auto g = [](std::span<const double>) { return std::vector<double>{0.0, 0.0}; };
  for (unsigned threads : {1u, 3u}) {
    MinimizerOptions o;
    o.threads = threads;
    const auto r = minimize(box, f, g, o);
    EXPECT_EQ(r.theta, (std::vector<double>{0.0, 0.0}));
  }
}

TEST(Minimizer, HighDimensionalMultiStart) {
  const auto l2 = ConstraintSet::l2_ball({0.5, 0.5, 0.5, 0.5}, 0.25);
  auto f = [](std::span<const double> t) {
    double s = 0.0;
    for (double v : t) s += v * v;
    return s;
  };
  auto g = [](std::span<const double> t) {
    std::vector<double> out(t.begin(), t.end());
    for (auto& v : out) v *= 2.0;
    return out;
  };
  const auto r = minimize(l2, f, g, MinimizerOptions{});
  for (double v : r.theta) EXPECT_NEAR(v, 0.5 - 0.125, 1e-6);
  EXPECT_EQ(r.method, "multi-start-pgd");
}

TEST(AutoGranularity, Formula) {
  auto expected = [](double n, int p, int h, double eps, double beta) {
    const double base = std::sqrt(p * n) * eps / (std::pow(2.0, (h + 1) * p) * std::sqrt(std::log(1 / beta)));
    return static_cast<int>(std::clamp(std::round(std::pow(base, 1.0 / (h + p))), 1.0, 64.0));
  };
  EXPECT_EQ(auto_granularity(4096, 1, 2, 2.0, 0.05), 2);
  EXPECT_EQ(auto_granularity(262144, 1, 2, 2.0, 0.05), 4);
  for (double n : {100.0, 1e4, 1e6, 1e9}) {
    for (int p : {1, 2, 3}) {
      EXPECT_EQ(auto_granularity(static_cast<std::size_t>(n), p, 2, 1.0, 0.05),
                expected(n, p, 2, 1.0, 0.05));
    }
  }
  EXPECT_EQ(auto_granularity(10, 1, 2, kInf, 0.05), 64);
  EXPECT_EQ(auto_granularity(10, 3, 2, 0.1, 0.05), 1);
}

TEST(ExcessEmpiricalRisk, ClosedFormConstrainedQuadratic) {
  // L(theta) = (theta - 0.3)^2 on [0.4, 0.6]: minimizer 0.4, value 0.01.
  const std::vector<Record> data = {{{1.0}, 0.3}};
  const auto loss = losses::rescaled_squared(1);
  const auto C = ConstraintSet::l2_ball({0.5}, 0.1);
  const EmpiricalOracle oracle(data, loss, C);
  EXPECT_NEAR(oracle.argmin()[0], 0.4, 1e-6);
  EXPECT_NEAR(oracle.minimum(), 0.01, 1e-6);
  const std::vector<double> mid = {0.5};
  EXPECT_NEAR(excess_empirical_risk(mid, data, loss, C), 0.03, 1e-6);
  EXPECT_NEAR(oracle.excess(oracle.argmin()), 0.0, 1e-12);
  const std::vector<double> outside = {0.2};
  EXPECT_THROW(oracle.excess(outside), DomainError);
}

TEST(ExcessEmpiricalRisk, ConstantLossIsZero) {
  const auto data = datasets::erm_dataset("linear", 50, 2, 1);
  const auto loss = losses::constant(2, 0.4);
  const std::vector<double> theta = {0.9, 0.1};
  EXPECT_NEAR(excess_empirical_risk(theta, data, loss, ConstraintSet::unit_box(2)), 0.0, 1e-15);
}

TEST(ExcessEmpiricalRisk, TwoDimClosedForm) {
  // (theta . x / 2 - y)^2 with x = (1, 1), y = 0.7 is minimized on the line
  // theta_1 + theta_2 = 1.4; the box corner (1, 1) gives excess 0.09.
  const std::vector<Record> data = {{{1.0, 1.0}, 0.7}};
  const auto loss = losses::rescaled_squared(2);
  const std::vector<double> corner = {1.0, 1.0};
  EXPECT_NEAR(excess_empirical_risk(corner, data, loss, ConstraintSet::unit_box(2)), 0.09, 1e-6);
}

TEST(ExcessPopulationRisk, SymmetricDistribution) {
  // x = 1, y uniform on {0.2, 0.4}: population minimizer 0.3.
  auto sampler = [](Stream& rng) { return Record{{1.0}, rng.uniform() < 0.5 ? 0.2 : 0.4}; };
  const auto loss = losses::rescaled_squared(1);
  const auto C = ConstraintSet::unit_box(1);
  const std::vector<double> at_min = {0.3};
  const auto e = excess_population_risk(at_min, sampler, loss, C, 20'000, 4);
  EXPECT_LE(std::fabs(e.value), 3.0 * e.std_error + 1e-6);
  const std::vector<double> off = {0.5};
  const auto f = excess_population_risk(off, sampler, loss, C, 20'000, 4);
  EXPECT_NEAR(f.value, 0.04, 0.005);
}

TEST(ExcessPopulationRisk, PointMassEqualsEmpirical) {
  auto sampler = [](Stream&) { return Record{{0.8}, 0.1}; };
  const auto loss = losses::rescaled_squared(1);
  const auto C = ConstraintSet::box({0.5}, 0.3);
  const std::vector<double> theta = {0.6};
  const std::vector<Record> single = {{{0.8}, 0.1}};
  const auto e = excess_population_risk(theta, sampler, loss, C, 100, 1);
  EXPECT_NEAR(e.value, excess_empirical_risk(theta, single, loss, C), 1e-12);
  EXPECT_EQ(e.std_error, 0.0);
  EXPECT_THROW(excess_population_risk(theta, sampler, loss, C, 99, 1), DomainError);
}

TEST(PrivateErm, NoiselessSandwichAndAccuracy) {
  const auto data = datasets::erm_dataset("linear", 10'000, 1, 3);
  const auto loss = losses::rescaled_squared(1);
  const auto r = private_erm(data, loss, ConstraintSet::unit_box(1),
                             config(Mechanism::kFullGrid, kInf, 16, 2, 1, 1));
  ASSERT_TRUE(r.err_empirical && r.sup_grid_error);
  EXPECT_LE(*r.err_empirical, 2.0 * *r.sup_grid_error + 1e-6);
  EXPECT_LE(2.0 * *r.sup_grid_error, 0.02);
  EXPECT_GE(*r.err_empirical, -1e-9);
  EXPECT_EQ(r.comm.total_bits, 10'000u * 17u * 64u);
}

TEST(PrivateErm, NonConvexMatchesDenseGridMinimizerOfSurrogate) {
  const auto data = datasets::erm_dataset("clusters", 2000, 1, 8);
  const auto loss = losses::sigmoid_well(1);
  ASSERT_FALSE(loss.convex);
  const int k = 32;
  const auto r = private_erm(data, loss, ConstraintSet::unit_box(1),
                             config(Mechanism::kFullGrid, kInf, k, 2, 1, 2));
  const BernsteinSurrogate exact(SurrogateConfig{k, 2, 1, loss.T}, exact_grid_means(data, loss, k));
  double best = kInf, arg = 0.0;
  for (int i = 0; i <= 10'000; ++i) {
    const double pt[] = {i / 10'000.0};
    const double v = exact(pt);
    if (v < best) {
      best = v;
      arg = pt[0];
    }
  }
  EXPECT_NEAR(r.theta_priv[0], arg, 0.01);
  // The empirical risk violates midpoint convexity somewhere.
  bool nonconvex = false;
  for (int i = 1; i < 100 && !nonconvex; ++i) {
    const double lo[] = {(i - 1) / 100.0}, mid[] = {i / 100.0}, hi[] = {(i + 1) / 100.0};
    nonconvex = empirical_risk(loss, data, mid) >
                0.5 * (empirical_risk(loss, data, lo) + empirical_risk(loss, data, hi)) + 1e-9;
  }
  EXPECT_TRUE(nonconvex);
}

TEST(PrivateErm, FeasibleForEveryConstraint) {
  const auto data = datasets::erm_dataset("linear", 3000, 2, 5);
  const auto loss = losses::rescaled_squared(2);
  const std::vector<ConstraintSet> sets = {
      ConstraintSet::unit_box(2), ConstraintSet::l2_ball({0.3, 0.3}, 0.2),
      ConstraintSet::l1_ball({0.5, 0.5}, 0.3), ConstraintSet::simplex(2),
      ConstraintSet::singleton({0.2, 0.9})};
  for (const auto& C : sets) {
    for (auto m : {Mechanism::kFullGrid, Mechanism::kPartitionedOneBit}) {
      const auto r = private_erm(data, loss, C, config(m, 0.5, 3, 2, 2, 7));
      EXPECT_TRUE(C.contains(r.theta_priv, 1e-9)) << constraint_kind_name(C.kind());
      EXPECT_GE(*r.err_empirical, -1e-7);
      EXPECT_LE(*r.err_empirical, 2.0 * *r.sup_grid_error + 1e-6);
    }
  }
  EXPECT_THROW(private_erm(data, loss, ConstraintSet::l2_ball({0.5, 0.5}, 0.8),
                           config(Mechanism::kFullGrid, 1.0, 2, 2, 2, 1)),
               DomainError);
}

TEST(PrivateErm, ThreeDimensionalRun) {
  const auto data = datasets::erm_dataset("logistic", 2000, 3, 5);
  const auto r = private_erm(data, losses::rescaled_logistic(3), ConstraintSet::unit_box(3),
                             config(Mechanism::kFullGrid, 2.0, 2, 2, 3, 7));
  EXPECT_EQ(r.minimizer, "multi-start-pgd");
  EXPECT_LE(*r.err_empirical, 2.0 * *r.sup_grid_error + 1e-6);
  EXPECT_EQ(r.theta_star.size(), 3u);
}

TEST(PrivateErm, SeededDeterminism) {
  const auto data = datasets::erm_dataset("linear", 2000, 1, 5);
  const auto loss = losses::rescaled_squared(1);
  const auto C = ConstraintSet::unit_box(1);
  const auto a = private_erm(data, loss, C, config(Mechanism::kPartitionedOneBit, 0.5, 3, 2, 1, 11));
  const auto b = private_erm(data, loss, C, config(Mechanism::kPartitionedOneBit, 0.5, 3, 2, 1, 11));
  const auto c = private_erm(data, loss, C, config(Mechanism::kPartitionedOneBit, 0.5, 3, 2, 1, 12));
  EXPECT_EQ(a.theta_priv, b.theta_priv);
  auto values = [](const ERMResult& r) {
    return std::vector<double>(r.surrogate->grid_values().begin(), r.surrogate->grid_values().end());
  };
  EXPECT_EQ(values(a), values(b));
  EXPECT_NE(values(a), values(c));
}

TEST(PrivateErm, SupErrorNonIncreasingInEpsilon) {
  const auto data = datasets::erm_dataset("linear", 4000, 1, 6);
  const auto loss = losses::rescaled_squared(1);
  const auto C = ConstraintSet::unit_box(1);
  const EmpiricalOracle oracle(data, loss, C);
  ErmOptions opts;
  opts.oracle_cache = &oracle;
  double prev = kInf;
  for (double eps : {0.5, 1.0, 2.0, 4.0}) {
    std::vector<double> sups;
    for (int s = 0; s < 20; ++s) {
      sups.push_back(*private_erm(data, loss, C, config(Mechanism::kFullGrid, eps, 4, 2, 1, s), opts)
                          .sup_grid_error);
    }
    const double m = median(sups);
    EXPECT_LE(m, prev) << "eps=" << eps;
    prev = m;
  }
}

TEST(PrivateErmRegularized, ZeroMuIsIdentical) {
  const auto data = datasets::erm_dataset("linear", 1000, 1, 5);
  const auto loss = losses::rescaled_squared(1);
  const auto C = ConstraintSet::unit_box(1);
  const auto cfg = config(Mechanism::kFullGrid, 1.0, 3, 2, 1, 3);
  const auto a = private_erm(data, loss, C, cfg);
  const auto b = private_erm_regularized(data, loss, C, cfg, 0.0);
  EXPECT_EQ(a.theta_priv, b.theta_priv);
  EXPECT_EQ(a.surrogate_value, b.surrogate_value);
}

TEST(PrivateErmRegularized, LargeMuProjectsZero) {
  const auto data = datasets::erm_dataset("linear", 1000, 2, 5);
  const auto loss = losses::rescaled_squared(2);
  const auto C = ConstraintSet::l2_ball({0.5, 0.5}, 0.2);
  const auto r = private_erm_regularized(data, loss, C, config(Mechanism::kFullGrid, 1.0, 3, 2, 2, 3), 1e3);
  const std::vector<double> zero = {0.0, 0.0};
  const auto target = C.project(zero);
  EXPECT_NEAR(r.theta_priv[0], target[0], 1e-4);
  EXPECT_NEAR(r.theta_priv[1], target[1], 1e-4);
}

TEST(PrivateErmRegularized, AutoMuExponent) {
  const std::size_t n = 1u << 16;
  EXPECT_DOUBLE_EQ(ridge_auto_mu(n), std::pow(2.0, -16.0 / 12.0));
  EXPECT_NEAR(std::log(ridge_auto_mu(n)) / std::log(static_cast<double>(n)), -1.0 / 12.0, 1e-15);
  const auto data = datasets::erm_dataset("linear", 500, 1, 5);
  const auto r = private_erm_regularized(data, losses::rescaled_squared(1), ConstraintSet::unit_box(1),
                                         config(Mechanism::kFullGrid, 1.0, 2, 2, 1, 3), std::nullopt);
  EXPECT_DOUBLE_EQ(r.mu, ridge_auto_mu(500));
  EXPECT_THROW(private_erm_regularized(data, losses::rescaled_squared(1), ConstraintSet::unit_box(1),
                                       config(Mechanism::kFullGrid, 1.0, 2, 2, 1, 3), -1.0),
               DomainError);
  EXPECT_THROW(private_erm_regularized(data, losses::sigmoid_well(1), ConstraintSet::unit_box(1),
                                       config(Mechanism::kFullGrid, 1.0, 2, 2, 1, 3), 0.1),
               DomainError);
}

TEST(PrivateErmRegularized, PopulationRiskNotWorseAtSmallN) {
  const std::size_t n = 500;
  const auto loss = losses::rescaled_squared(1);
  const auto C = ConstraintSet::unit_box(1);
  const auto sampler = datasets::erm_sampler("linear", 1);
  std::vector<double> plain, ridge;
  for (int s = 0; s < 20; ++s) {
    const auto data = datasets::erm_dataset("linear", n, 1, 100 + s);
    const int k = auto_granularity(n, 1, 2, 1.0, 0.05);
    const auto cfg = config(Mechanism::kFullGrid, 1.0, k, 2, 1, s);
    ErmOptions opts;
    opts.evaluate = false;
    const auto a = private_erm(data, loss, C, cfg, opts);
    const auto b = private_erm_regularized(data, loss, C, cfg, std::nullopt, opts);
    plain.push_back(excess_population_risk(a.theta_priv, sampler, loss, C, 20'000, 77).value);
    ridge.push_back(excess_population_risk(b.theta_priv, sampler, loss, C, 20'000, 77).value);
  }
  EXPECT_LE(median(ridge), median(plain));
}

}  // namespace
}  // namespace polyldp
