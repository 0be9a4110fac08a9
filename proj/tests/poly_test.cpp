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


#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "polyldp/poly/bernstein.hpp"
#include "polyldp/poly/chebyshev.hpp"
#include "polyldp/poly/monomial.hpp"
#include "polyldp/poly/trig.hpp"

namespace polyldp {
namespace {

// C(k,v) x^v (1-x)^{k-v} by repeated multiplication; independent of the
// library's log-gamma path.
double naive_basis(int v, int k, double x) {
  double c = 1.0;
  for (int i = 1; i <= v; ++i) c = c * (k - v + i) / i;
  return c * std::pow(x, v) * std::pow(1.0 - x, k - v);
}

// Plain Bernstein polynomial of grid values on [0,1].
double plain_bernstein(const std::vector<double>& values, double x) {
  const int k = static_cast<int>(values.size()) - 1;
  double s = 0.0;
  for (int v = 0; v <= k; ++v) s += values[v] * naive_basis(v, k, x);
  return s;
}

std::vector<double> sample_grid(int k, double (*f)(double)) {
  std::vector<double> out(k + 1);
  for (int v = 0; v <= k; ++v) out[v] = f(static_cast<double>(v) / k);
  return out;
}

double smooth_fn(double x) { return 0.5 + 0.25 * std::sin(3.0 * x); }

double loglog_slope(const std::vector<double>& ks, const std::vector<double>& errs) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    mx += std::log(ks[i]);
    my += std::log(errs[i]);
  }
  mx /= ks.size();
  my /= ks.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sxy += (std::log(ks[i]) - mx) * (std::log(errs[i]) - my);
    sxx += (std::log(ks[i]) - mx) * (std::log(ks[i]) - mx);
  }
  return sxy / sxx;
}

double sup_grid_error(int k, int h) {
  SurrogateConfig cfg{k, h, 1, 9.0};
  const auto s = iterated_bernstein_fit(sample_grid(k, smooth_fn), cfg);
  double sup = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    const double pt[] = {x};
    sup = std::max(sup, std::fabs(s(pt) - smooth_fn(x)));
  }
  return sup;
}

TEST(BernsteinBasis, Examples) {
  EXPECT_DOUBLE_EQ(bernstein_basis(0, 1, 0.5), 0.5);
  EXPECT_NEAR(bernstein_basis(2, 3, 0.5), 0.375, 1e-15);
  EXPECT_NEAR(bernstein_basis(3, 7, 0.3), naive_basis(3, 7, 0.3), 1e-15);
}

TEST(BernsteinBasis, PartitionOfUnity) {
  for (int k : {1, 2, 5, 17, 64, 200, 1000}) {
    for (double x : {0.0, 0.013, 0.25, 0.5, 0.77, 1.0}) {
      double s = 0.0;
      for (int v = 0; v <= k; ++v) s += bernstein_basis(v, k, x);
      EXPECT_NEAR(s, 1.0, 1e-12) << "k=" << k << " x=" << x;
    }
  }
}

TEST(BernsteinBasis, LargeDegreeIsFinite) {
  const double mid = bernstein_basis(5000, 10000, 0.5);
  EXPECT_TRUE(std::isfinite(mid));
  // Central binomial mass ~ 1/sqrt(pi k/2).
  EXPECT_NEAR(mid, 1.0 / std::sqrt(std::numbers::pi * 5000.0), 1e-5);
  EXPECT_EQ(bernstein_basis(0, 10000, 1.0), 0.0);
}

TEST(BernsteinBasis, RejectsOutOfRange) {
  EXPECT_THROW(bernstein_basis(4, 3, 0.5), DomainError);
  EXPECT_THROW(bernstein_basis(-1, 3, 0.5), DomainError);
  EXPECT_THROW(bernstein_basis(1, 3, 1.5), DomainError);
}

TEST(IteratedBernstein, LinearReproductionOneDim) {
  SurrogateConfig cfg{5, 1, 1, 1.0};
  const auto s = iterated_bernstein_fit(sample_grid(5, [](double x) { return x; }), cfg);
  for (double x : {0.0, 0.25, 0.7, 1.0}) {
    const double pt[] = {x};
    EXPECT_NEAR(s(pt), x, 1e-12);
  }
}

TEST(IteratedBernstein, QuadraticAtHalf) {
  SurrogateConfig cfg{2, 1, 1, 2.0};
  const auto s = iterated_bernstein_fit({0.0, 0.25, 1.0}, cfg);
  const double pt[] = {0.5};
  EXPECT_NEAR(s(pt), 0.375, 1e-15);
}

TEST(IteratedBernstein, OrderTwoMatchesComposition) {
  const int k = 7;
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> values(k + 1);
  for (auto& v : values) v = u(gen);
  // B applied to the function B f, sampled back on the grid.
  std::vector<double> bf(k + 1);
  for (int v = 0; v <= k; ++v) bf[v] = plain_bernstein(values, static_cast<double>(v) / k);
  const auto s = iterated_bernstein_fit(values, SurrogateConfig{k, 2, 1, 1.0});
  for (int i = 0; i < 10; ++i) {
    const double x = u(gen);
    const double pt[] = {x};
    const double expected = 2.0 * plain_bernstein(values, x) - plain_bernstein(bf, x);
    EXPECT_NEAR(s(pt), expected, 1e-12);
  }
}

TEST(IteratedBernstein, OperatorIdentityBinomial) {
  // I - (I - B)^h = sum_j C(h,j) (-1)^{j+1} B^j, with B^j f sampled on the
  // grid through the matrix M_{wv} = b_v(w/k).
  const int k = 6;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> values(k + 1);
  for (auto& v : values) v = u(gen);
  for (int h = 1; h <= 4; ++h) {
    std::vector<double> coeffs(k + 1, 0.0);
    std::vector<double> power = values;  // M^{j-1} f
    double binom = 1.0;
    for (int j = 1; j <= h; ++j) {
      binom = binom * (h - j + 1) / j;
      const double sign = (j % 2 == 1) ? 1.0 : -1.0;
      for (int v = 0; v <= k; ++v) coeffs[v] += sign * binom * power[v];
      std::vector<double> next(k + 1);
      for (int w = 0; w <= k; ++w) next[w] = plain_bernstein(power, static_cast<double>(w) / k);
      power = next;
    }
    const auto s = iterated_bernstein_fit(values, SurrogateConfig{k, h, 1, 1.0});
    for (int i = 0; i < 10; ++i) {
      const double x = u(gen);
      const double pt[] = {x};
      EXPECT_NEAR(s(pt), plain_bernstein(coeffs, x), 1e-11) << "h=" << h;
    }
  }
}

TEST(IteratedBernstein, LinearReproductionAllOrders) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int p = 1; p <= 3; ++p) {
    for (int k : {1, 3, 6}) {
      for (int h = 1; h <= 3; ++h) {
        std::vector<double> a(p);
        for (auto& c : a) c = u(gen) - 0.5;
        const double a0 = u(gen);
        const auto grid = build_grid(k, p);
        std::vector<double> values;
        for (const auto& g : grid) {
          double v = a0;
          for (int i = 0; i < p; ++i) v += a[i] * g[i];
          values.push_back(v);
        }
        const auto s = iterated_bernstein_fit(values, SurrogateConfig{k, h, p, 1.0});
        for (int t = 0; t < 100; ++t) {
          std::vector<double> x(p);
          double expected = a0;
          for (int i = 0; i < p; ++i) {
            x[i] = u(gen);
            expected += a[i] * x[i];
          }
          ASSERT_NEAR(s(x), expected, 1e-10) << "p=" << p << " k=" << k << " h=" << h;
        }
      }
    }
  }
}

TEST(IteratedBernstein, ConstantAndTwoDimLinear) {
  const auto c = iterated_bernstein_fit(std::vector<double>(16, 0.42), SurrogateConfig{3, 2, 2, 1.0});
  const double pt[] = {0.3, 0.9};
  EXPECT_NEAR(c(pt), 0.42, 1e-13);
  const auto grid = build_grid(4, 2);
  std::vector<double> values;
  for (const auto& g : grid) values.push_back(g[0] + g[1]);
  const auto s = iterated_bernstein_fit(values, SurrogateConfig{4, 1, 2, 1.0});
  const double q[] = {0.3, 0.4};
  EXPECT_NEAR(s(q), 0.7, 1e-12);
}

TEST(IteratedBernstein, LengthMismatchAndDomain) {
  EXPECT_THROW(iterated_bernstein_fit({1.0, 2.0}, SurrogateConfig{2, 1, 1, 1.0}), DomainError);
  const auto s = iterated_bernstein_fit({0.0, 1.0}, SurrogateConfig{1, 1, 1, 1.0});
  const double out[] = {1.2};
  EXPECT_THROW(s(out), DomainError);
}

TEST(IteratedBernstein, ApproximationRate) {
  const std::vector<double> ks = {4, 8, 16, 32};
  for (int h : {1, 2}) {
    std::vector<double> errs;
    for (double k : ks) errs.push_back(sup_grid_error(static_cast<int>(k), h));
    EXPECT_LE(loglog_slope(ks, errs), -(h - 0.3)) << "h=" << h;
  }
}

TEST(GradSurrogate, LinearAndConstant) {
  const auto lin = iterated_bernstein_fit({0.0, 0.25, 0.5, 0.75, 1.0}, SurrogateConfig{4, 1, 1, 1.0});
  for (double x : {0.1, 0.5, 0.93}) {
    const double pt[] = {x};
    EXPECT_NEAR(grad_surrogate(lin, pt)[0], 1.0, 1e-12);
  }
  const auto c = iterated_bernstein_fit(std::vector<double>(9, 0.3), SurrogateConfig{2, 2, 2, 1.0});
  const double pt[] = {0.2, 0.6};
  for (double g : grad_surrogate(c, pt)) EXPECT_NEAR(g, 0.0, 1e-12);
}

TEST(GradSurrogate, MatchesCentralDifferences) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> values(36);
  for (auto& v : values) v = u(gen);
  for (int h : {1, 2}) {
    const auto s = iterated_bernstein_fit(values, SurrogateConfig{5, h, 2, 1.0});
    for (int t = 0; t < 20; ++t) {
      std::vector<double> x = {0.05 + 0.9 * u(gen), 0.05 + 0.9 * u(gen)};
      const auto g = grad_surrogate(s, x);
      for (int j = 0; j < 2; ++j) {
        auto lo = x, hi = x;
        lo[j] -= 1e-5;
        hi[j] += 1e-5;
        const double fd = (s(hi) - s(lo)) / 2e-5;
        EXPECT_LE(std::fabs(g[j] - fd), 1e-6 * std::max(1.0, std::fabs(fd)));
      }
    }
  }
}

TEST(BuildGrid, Examples) {
  const auto a = build_grid(1, 1);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0][0], 0.0);
  EXPECT_EQ(a[1][0], 1.0);
  const auto b = build_grid(2, 2);
  ASSERT_EQ(b.size(), 9u);
  EXPECT_EQ(b.front(), (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(b.back(), (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(b[1], (std::vector<double>{0.0, 0.5}));
  EXPECT_EQ(build_grid(3, 2).size(), 16u);
  EXPECT_THROW(build_grid(10, 7, 1'000'000), ResourceError);
}

TEST(ChebyshevDisjunction, Contract) {
  for (int k : {2, 3, 4, 6, 10, 20}) {
    for (double gamma : {0.3, 0.1, 0.01}) {
      const auto p = chebyshev_disjunction(k, gamma);
      EXPECT_EQ(p.coeffs[0], 0.0);
      EXPECT_EQ(p(0.0), 0.0);
      double worst = 0.0;
      for (int x = 1; x <= k; ++x) worst = std::max(worst, std::fabs(p(x) - 1.0));
      EXPECT_LE(worst, gamma);
      EXPECT_DOUBLE_EQ(worst, p.achieved_error);
      EXPECT_TRUE(std::isfinite(p.max_abs_coeff()));
    }
  }
}

TEST(ChebyshevDisjunction, KFourGammaTenth) {
  const auto p = chebyshev_disjunction(4, 0.1);
  for (int x = 1; x <= 4; ++x) EXPECT_LE(std::fabs(p(x) - 1.0), 0.1);
}

TEST(ChebyshevDisjunction, KOneIsIdentity) {
  const auto p = chebyshev_disjunction(1, 0.5);
  EXPECT_EQ(p.degree, 1);
  EXPECT_EQ(p.coeffs, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(p.achieved_error, 0.0);
}

TEST(ChebyshevDisjunction, DegreeGrowsLikeSqrtK) {
  // t_k = O(sqrt(k) log(1/gamma)); the ratio stays bounded.
  for (int k : {4, 16, 36}) {
    const auto p = chebyshev_disjunction(k, 0.05);
    EXPECT_LE(p.degree, 2.0 * std::sqrt(k) * std::log(1.0 / 0.05) + 2);
  }
}

TEST(ChebyshevDisjunction, UnreachableGammaIsConstructionError) {
  try {
    chebyshev_disjunction(30, 1e-9, 3);
    FAIL() << "expected ConstructionError";
  } catch (const ConstructionError& e) {
    EXPECT_GT(e.achieved_error(), 1e-9);
  }
  EXPECT_THROW(chebyshev_disjunction(3, 1.5), DomainError);
}

TEST(MonomialBasis, GradedLexOrder) {
  const MonomialBasis b(2, 2);
  ASSERT_EQ(b.size(), 6u);
  const std::vector<std::vector<int>> expected = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_EQ(b.exponents(i)[0], expected[i][0]);
    EXPECT_EQ(b.exponents(i)[1], expected[i][1]);
  }
  EXPECT_EQ(MonomialBasis(5, 3).size(), 56u);  // C(8,3)
  EXPECT_THROW(MonomialBasis(40, 10, 1000), ResourceError);
}

TEST(TrigFit, ConstantAndCosine) {
  const auto one = trig_fit([](std::span<const double>) { return 1.0; }, 2, 4);
  ASSERT_EQ(one.coeffs.size(), 16u);
  EXPECT_NEAR(one.coeffs[0], 1.0, 1e-12);
  for (std::size_t i = 1; i < one.coeffs.size(); ++i) EXPECT_NEAR(one.coeffs[i], 0.0, 1e-12);
  const auto c = trig_fit([](std::span<const double> th) { return std::cos(th[0]); }, 1, 5);
  for (int r = 0; r < 5; ++r) EXPECT_NEAR(c.coeffs[r], r == 1 ? 1.0 : 0.0, 1e-12);
}

TEST(TrigFit, ExpConvergesMonotonically) {
  const auto g = [](std::span<const double> th) { return std::exp(std::cos(th[0])); };
  double prev = 1e9;
  for (int t : {2, 4, 8}) {
    const auto c = trig_fit(g, 1, t);
    double sup = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double x = -1.0 + 2.0 * i / 99.0;
      const double pt[] = {x};
      sup = std::max(sup, std::fabs(c.at_cosines(pt) - std::exp(x)));
    }
    EXPECT_LT(sup, prev) << "t=" << t;
    prev = sup;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(TrigFit, LeftInverseOfEvaluation) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int p : {1, 2, 3}) {
    const int t = 4;
    TrigPolynomial poly;
    poly.degree_per_var = t;
    poly.p = p;
    poly.coeffs.resize(static_cast<std::size_t>(std::pow(t, p)));
    for (auto& c : poly.coeffs) c = u(gen);
    const auto fit = trig_fit([&](std::span<const double> th) { return poly(th); }, p, t);
    for (std::size_t i = 0; i < poly.coeffs.size(); ++i) {
      EXPECT_NEAR(fit.coeffs[i], poly.coeffs[i], 1e-10);
    }
  }
}

TEST(TrigFit, EvenInEachAngle) {
  TrigPolynomial poly{3, 2, {0.1, -0.3, 0.2, 0.5, 0.7, -0.4, 0.05, 0.9, -0.6}};
  const double a[] = {0.4, -1.3};
  const double b[] = {-0.4, 1.3};
  EXPECT_NEAR(poly(a), poly(b), 1e-14);
  EXPECT_THROW(trig_fit([](std::span<const double>) { return 0.0; }, 1, 0), DomainError);
}

}  // namespace
}  // namespace polyldp
