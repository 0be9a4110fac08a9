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

// argmin ||w||_C subject to Phi w = w_bar, for C an l1 ball centered at 0 or
// the simplex. Solved by ADMM on
//   min g(z) s.t. x = z, Phi x = w_bar
// where g is ||.||_1 (plus the nonnegativity indicator for the simplex). The
// x-iterate is an exact affine projection, so every returned point satisfies
// the linear constraint to rounding.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/erm/constraint.hpp"
#include "polyldp/highdim/projection.hpp"

namespace polyldp {

struct RecoveryOptions {
  int max_iterations = 50'000;
  double gap_tolerance = 1e-8;  // relative duality gap
  double residual_tolerance = 1e-9;
  bool polish = true;
};

struct RecoveryResult {
  std::vector<double> w;
  double gauge = 0.0;
  double duality_gap = 0.0;
  double residual = 0.0;  // max |(Phi w - w_bar)_i|
  int iterations = 0;
  bool converged = false;
  bool polished = false;
};

namespace detail {

inline Eigen::MatrixXd to_eigen(const ProjectionMatrix& phi) {
  Eigen::MatrixXd A(phi.rows(), phi.cols());
  for (std::size_t i = 0; i < phi.rows(); ++i) {
    for (std::size_t j = 0; j < phi.cols(); ++j) A(i, j) = phi(i, j);
  }
  return A;
}

}  // namespace detail

inline RecoveryResult recover_minkowski(std::span<const double> w_bar, const ProjectionMatrix& phi,
                                        const ConstraintSet& C,
                                        const RecoveryOptions& opt = {}) {
  const bool simplex = C.kind() == ConstraintKind::kSimplex;
  if (!simplex && C.kind() != ConstraintKind::kL1Ball) {
    throw DomainError("recover_minkowski: C must be an l1 ball or the simplex");
  }
  if (!simplex) {
    for (double c : C.center()) {
      detail::require(c == 0.0, "recover_minkowski: l1 ball must be centered at 0");
    }
  }
  const std::size_t m = phi.rows();
  const std::size_t p = phi.cols();
  detail::require(w_bar.size() == m, "recover_minkowski: w_bar length != rows of Phi");
  detail::require(static_cast<std::size_t>(C.dim()) == p,
                  "recover_minkowski: constraint dimension != columns of Phi");

  RecoveryResult out;
  out.w.assign(p, 0.0);
  Eigen::VectorXd b(m);
  for (std::size_t i = 0; i < m; ++i) b(i) = w_bar[i];
  if (b.lpNorm<Eigen::Infinity>() == 0.0) {
    out.converged = true;
    return out;
  }

  const Eigen::MatrixXd A = detail::to_eigen(phi);
  const Eigen::LLT<Eigen::MatrixXd> gram((A * A.transpose()).eval());
  if (gram.info() != Eigen::Success) {
    throw InfeasibleError("recover_minkowski: Phi does not have full row rank");
  }
  // x = v - A^T (A A^T)^{-1} (A v - b)
  auto affine = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return v - A.transpose() * gram.solve(A * v - b);
  };
  const Eigen::VectorXd x_ls = affine(Eigen::VectorXd::Zero(p));
  auto objective = [&](const Eigen::VectorXd& v) { return v.lpNorm<1>(); };
  // Best lower bound b^T nu over nu with A^T nu in the dual feasible set:
  // |.| <= 1 for l1, <= 1 componentwise from above for the simplex.
  auto dual_bound = [&](const Eigen::VectorXd& lambda) {
    Eigen::VectorXd nu = gram.solve(A * lambda);
    const Eigen::VectorXd s = A.transpose() * nu;
    const double scale = simplex ? std::max(1.0, s.maxCoeff()) : std::max(1.0, s.lpNorm<Eigen::Infinity>());
    return b.dot(nu) / scale;
  };

  double rho = 1.0 / std::max(1e-12, x_ls.lpNorm<Eigen::Infinity>());
  Eigen::VectorXd x = x_ls;
  Eigen::VectorXd z = simplex ? x.cwiseMax(0.0) : x;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(p);
  double gap = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    x = affine(z - u);
    const Eigen::VectorXd z_old = z;
    const Eigen::VectorXd v = x + u;
    const double t = 1.0 / rho;
    for (std::size_t j = 0; j < p; ++j) {
      const double a = v(j);
      z(j) = simplex ? std::max(0.0, a - t) : (a > t ? a - t : (a < -t ? a + t : 0.0));
    }
    u += x - z;
    const double primal = (x - z).norm();
    const double dual = rho * (z - z_old).norm();
    const double scale = std::max(1.0, x.norm());
    if (it % 10 == 9 || it + 1 == opt.max_iterations) {
      const double upper = objective(z);
      const double lower = dual_bound(rho * u);
      gap = upper - lower;
      const bool residual_ok = primal <= 1e-7 * scale;
      if (residual_ok && std::fabs(gap) <= opt.gap_tolerance * std::max(1.0, upper)) {
        out.converged = true;
        ++it;
        break;
      }
    }
    // Residual balancing keeps rho in step with the problem scale.
    if (it % 50 == 49) {
      if (primal > 10.0 * dual) {
        rho *= 2.0;
        u /= 2.0;
      } else if (dual > 10.0 * primal) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }
  out.iterations = it;

  // Final point: exact affine projection of z; nonnegativity for the simplex
  // comes from z when the iteration converged.
  Eigen::VectorXd w = affine(z);
  if (opt.polish) {
    const double tiny = 1e-7 * std::max(1e-300, z.lpNorm<Eigen::Infinity>());
    std::vector<Eigen::Index> support;
    for (std::size_t j = 0; j < p; ++j) {
      if (std::fabs(z(j)) > tiny) support.push_back(static_cast<Eigen::Index>(j));
    }
    if (!support.empty() && support.size() <= m) {
      Eigen::MatrixXd As(m, support.size());
      for (std::size_t s = 0; s < support.size(); ++s) As.col(s) = A.col(support[s]);
      const Eigen::VectorXd ws = As.colPivHouseholderQr().solve(b);
      Eigen::VectorXd cand = Eigen::VectorXd::Zero(p);
      for (std::size_t s = 0; s < support.size(); ++s) cand(support[s]) = ws(s);
      const double cand_res = (A * cand - b).lpNorm<Eigen::Infinity>();
      const bool sign_ok = !simplex || cand.minCoeff() >= 0.0;
      if (sign_ok && cand_res <= opt.residual_tolerance * std::max(1.0, b.lpNorm<Eigen::Infinity>()) &&
          objective(cand) <= objective(w) + 1e-9 * std::max(1.0, objective(w))) {
        w = cand;
        out.polished = true;
      }
    }
  }
  if (simplex && !out.polished) {
    // Nonnegativity of the affine projection is only approximate.
    if (w.minCoeff() < -1e-6 * std::max(1.0, w.lpNorm<Eigen::Infinity>())) {
      throw InfeasibleError("recover_minkowski: w_bar is not in the cone of Phi's columns");
    }
  }
  // A full-row-rank Phi makes every w_bar reachable in the l1 case.
  if (simplex && !out.converged && !out.polished) {
    const double primal = (affine(z) - z).norm();
    if (primal > 1e-4 * std::max(1.0, z.norm())) {
      throw InfeasibleError("recover_minkowski: no feasible point with finite gauge");
    }
  }
  out.w.assign(w.data(), w.data() + p);
  out.residual = (A * w - b).lpNorm<Eigen::Infinity>();
  out.duality_gap = gap;
  out.gauge = objective(w) / C.radius();
  return out;
}

}  // namespace polyldp
