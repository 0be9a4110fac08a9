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

// Dimension-reduced private ERM for generalized linear losses: players send
// Bernstein-mechanism reports of f(<Phi y_i, u>, z_i) for u on a grid over
// the bounding box of Phi C, the server minimizes the surrogate over Phi C
// and maps the minimizer back through a minimum-gauge preimage.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/parallel.hpp"
#include "polyldp/erm/constraint.hpp"
#include "polyldp/erm/erm.hpp"
#include "polyldp/erm/minimizer.hpp"
#include "polyldp/highdim/glm.hpp"
#include "polyldp/highdim/projection.hpp"
#include "polyldp/highdim/recovery.hpp"
#include "polyldp/highdim/width.hpp"
#include "polyldp/protocol/simulator.hpp"

namespace polyldp {

struct ImageProjection {
  std::vector<double> point;  // in Phi C
  std::vector<double> w;      // a preimage in C
  double distance = 0.0;
  int iterations = 0;
};

// Phi C for C an l1 ball at 0 or the simplex, i.e. the convex hull of the
// images of C's vertices. Coordinates theta in [0,1]^m map to
// u = B (2 theta - 1), where [-B, B]^m is the smallest cube holding Phi C.
class ImageSet {
 public:
  ImageSet(const ProjectionMatrix& phi, const ConstraintSet& C)
      : m_(phi.rows()), p_(phi.cols()), radius_(C.radius()),
        simplex_(C.kind() == ConstraintKind::kSimplex), phi_(&phi) {
    if (!simplex_ && C.kind() != ConstraintKind::kL1Ball) {
      throw DomainError("dr_erm: C must be an l1 ball or the simplex");
    }
    if (!simplex_) {
      for (double c : C.center()) detail::require(c == 0.0, "dr_erm: l1 ball must be centered at 0");
    }
    detail::require(static_cast<std::size_t>(C.dim()) == p_, "dr_erm: C dimension != columns of Phi");
    columns_.resize(p_);
    for (std::size_t j = 0; j < p_; ++j) {
      columns_[j] = phi.column(j);
      for (double v : columns_[j]) scale_ = std::max(scale_, radius_ * std::fabs(v));
    }
    detail::require(scale_ > 0.0, "dr_erm: Phi C is the zero set");
  }

  std::size_t dim() const { return m_; }
  double scale() const { return scale_; }

  std::vector<double> to_u(std::span<const double> theta) const {
    std::vector<double> u(theta.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = scale_ * (2.0 * theta[i] - 1.0);
    return u;
  }
  std::vector<double> to_theta(std::span<const double> u) const {
    std::vector<double> t(u.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.5 * (u[i] / scale_ + 1.0);
    return t;
  }

  // Euclidean projection onto Phi C by pairwise Frank-Wolfe over the vertex
  // images (linear convergence on polytopes).
  ImageProjection project_u(std::span<const double> u, int max_iterations = 20'000) const {
    detail::require(u.size() == m_, "ImageSet::project_u: dimension mismatch");
    // Vertex v = 2j (+r Phi e_j) or 2j+1 (-r Phi e_j); the simplex uses only even ids.
    auto vertex = [&](std::size_t id, std::vector<double>& out) {
      const double s = (id & 1) ? -radius_ : radius_;
      const auto& col = columns_[id >> 1];
      for (std::size_t i = 0; i < m_; ++i) out[i] = s * col[i];
    };
    auto score = [&](std::size_t id, std::span<const double> g) {
      const double s = (id & 1) ? -radius_ : radius_;
      double d = 0.0;
      for (std::size_t i = 0; i < m_; ++i) d += columns_[id >> 1][i] * g[i];
      return s * d;
    };
    const std::size_t ids = 2 * p_;
    auto allowed = [&](std::size_t id) { return !simplex_ || (id & 1) == 0; };

    std::vector<double> x(m_), g(m_), vs(m_), va(m_), d(m_);
    std::map<std::size_t, double> active;
    {
      std::vector<double> neg(u.begin(), u.end());
      for (auto& v : neg) v = -v;
      std::size_t best = 0;
      double bs = std::numeric_limits<double>::infinity();
      for (std::size_t id = 0; id < ids; ++id) {
        if (!allowed(id)) continue;
        const double sc = score(id, neg);
        if (sc < bs) {
          bs = sc;
          best = id;
        }
      }
      active[best] = 1.0;
      vertex(best, x);
    }
    const double tol = 1e-13 * scale_ * scale_;
    ImageProjection out;
    int it = 0;
    for (; it < max_iterations; ++it) {
      for (std::size_t i = 0; i < m_; ++i) g[i] = x[i] - u[i];
      std::size_t s_id = 0;
      double s_score = std::numeric_limits<double>::infinity();
      for (std::size_t id = 0; id < ids; ++id) {
        if (!allowed(id)) continue;
        const double sc = score(id, g);
        if (sc < s_score) {
          s_score = sc;
          s_id = id;
        }
      }
      double xg = 0.0;
      for (std::size_t i = 0; i < m_; ++i) xg += x[i] * g[i];
      if (xg - s_score <= tol) break;
      std::size_t a_id = active.begin()->first;
      double a_score = -std::numeric_limits<double>::infinity();
      for (const auto& [id, wgt] : active) {
        const double sc = score(id, g);
        if (sc > a_score) {
          a_score = sc;
          a_id = id;
        }
      }
      vertex(s_id, vs);
      vertex(a_id, va);
      double dg = 0.0, dd = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        d[i] = vs[i] - va[i];
        dg += d[i] * g[i];
        dd += d[i] * d[i];
      }
      if (dd == 0.0 || dg >= 0.0) break;
      const double max_step = active[a_id];
      const double step = std::min(max_step, -dg / dd);
      for (std::size_t i = 0; i < m_; ++i) x[i] += step * d[i];
      active[s_id] += step;
      if (step >= max_step) {
        active.erase(a_id);
      } else {
        active[a_id] -= step;
      }
    }
    out.iterations = it;
    out.w.assign(p_, 0.0);
    for (const auto& [id, wgt] : active) {
      out.w[id >> 1] += ((id & 1) ? -radius_ : radius_) * wgt;
    }
    // Recompute the point from the weights to drop accumulated drift.
    out.point = phi_->apply(out.w);
    double dist = 0.0;
    for (std::size_t i = 0; i < m_; ++i) dist += (out.point[i] - u[i]) * (out.point[i] - u[i]);
    out.distance = std::sqrt(dist);
    return out;
  }

  // ProjectableSet interface in theta coordinates.
  std::vector<double> project(std::span<const double> theta) const {
    return to_theta(project_u(to_u(theta)).point);
  }
  bool contains(std::span<const double> theta, double tol = 1e-9) const {
    return project_u(to_u(theta)).distance <= tol * scale_;
  }
  std::vector<double> lower() const { return std::vector<double>(m_, 0.0); }
  std::vector<double> upper() const { return std::vector<double>(m_, 1.0); }

 private:
  std::size_t m_;
  std::size_t p_;
  double radius_;
  bool simplex_;
  const ProjectionMatrix* phi_;
  std::vector<std::vector<double>> columns_;
  double scale_ = 0.0;
};

struct DrErmConfig {
  std::optional<std::size_t> m;  // nullopt: the auto rule
  ProjectionTag tag = ProjectionTag::kGaussian;
  Mechanism mechanism = Mechanism::kFullGrid;
  int k = 0;  // 0: auto_granularity at dimension m
  int h = 2;
  std::optional<double> gamma;  // nullopt: default_distortion
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t width_trials = 10'000;
  std::size_t grid_cap = kDefaultGridCap;
  MinimizerOptions minimizer{.starts = 8, .max_iterations = 400};
  bool evaluate = true;
};

struct HighDimResult {
  std::vector<double> w_priv;
  std::vector<double> w_bar;  // in Phi C
  std::size_t m = 0;
  std::size_t p = 0;
  int k = 0;
  int h = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  ProjectionTag tag = ProjectionTag::kGaussian;
  std::string mechanism;
  std::string low_dim_method = "bernstein";
  std::string minimizer;
  double box_scale = 0.0;  // B
  WidthEstimate width;
  double gamma = 0.0;
  JlCheckResult distortion;
  double lipschitz_fraction = 0.0;  // records with ||Phi y_i|| <= 2
  bool recovery_fallback = false;
  bool recovery_converged = false;
  double recovery_residual = 0.0;
  double gauge = 0.0;
  CommStats comm;
  std::size_t missing_grid_points = 0;
  // Filled when DrErmConfig::evaluate is set.
  std::optional<double> excess_risk;
  std::optional<double> zero_excess_risk;
  std::optional<double> projected_excess_risk;
  std::optional<double> empirical_minimum;
};

// m = ceil(risk_projection_dimension) clamped to [1, p]; a zero gamma
// (the noiseless limit) gives p.
inline std::size_t auto_projection_dimension(double width, std::size_t n, std::size_t p,
                                             double beta, double gamma) {
  if (!(gamma > 0.0)) return p;
  const double m = std::ceil(risk_projection_dimension(width, n, beta, gamma));
  if (!(m < static_cast<double>(p))) return p;
  return std::max<std::size_t>(1, static_cast<std::size_t>(m));
}

inline HighDimResult dr_erm(std::span<const GLMRecord> dataset, const GLMLoss& loss,
                            const ConstraintSet& C, const PrivacyParams& privacy,
                            const DrErmConfig& config) {
  privacy.validate();
  if (C.kind() != ConstraintKind::kL1Ball && C.kind() != ConstraintKind::kSimplex) {
    throw DomainError("dr_erm: C must be an l1 ball or the simplex");
  }
  const std::size_t p = static_cast<std::size_t>(C.dim());
  check_glm_records(dataset, p);
  const std::size_t n = dataset.size();

  HighDimResult out;
  out.p = p;
  out.epsilon = privacy.epsilon;
  out.seed = config.seed;
  out.tag = config.tag;
  out.mechanism = std::string(mechanism_name(config.mechanism));
  out.width = gaussian_width_mc(C, config.width_trials, config.seed, config.threads);
  out.gamma = config.gamma.value_or(
      privacy.noiseless() ? 0.0
                          : default_distortion(out.width.value, n, privacy.epsilon, privacy.beta));
  out.m = config.m.value_or(
      auto_projection_dimension(out.width.value, n, p, privacy.beta, out.gamma));
  const ProjectionMatrix phi = gen_projection(out.m, p, config.tag, config.seed);
  const ImageSet image(phi, C);
  out.box_scale = image.scale();
  const int m = static_cast<int>(out.m);

  // Each player projects her own record.
  std::vector<Record> projected(n);
  parallel_for(n, config.threads, [&](std::size_t i) {
    projected[i].x = phi.apply(dataset[i].y);
    projected[i].y = dataset[i].z;
  });
  std::size_t lipschitz_ok = 0;
  for (const auto& r : projected) {
    double sq = 0.0;
    for (double v : r.x) sq += v * v;
    lipschitz_ok += sq <= 4.0 ? 1 : 0;
  }
  out.lipschitz_fraction = static_cast<double>(lipschitz_ok) / static_cast<double>(n);

  const double B = image.scale();
  LossSpec low;
  low.name = "projected-" + loss.name;
  low.p = m;
  low.convex = loss.convex;
  low.lipschitz = 2.0 * B * loss.lipschitz;
  low.evaluate = [&loss, B](std::span<const double> theta, const Record& r) {
    double margin = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) margin += r.x[i] * B * (2.0 * theta[i] - 1.0);
    return loss(margin, r.y);
  };

  out.h = config.h;
  out.k = config.k > 0 ? config.k : auto_granularity(n, m, config.h, privacy.epsilon, privacy.beta);
  ProtocolConfig pc;
  pc.mechanism = config.mechanism;
  pc.privacy = privacy;
  pc.surrogate = SurrogateConfig{.k = out.k, .h = config.h, .p = m};
  pc.seed = config.seed;
  pc.threads = config.threads;
  pc.grid_cap = config.grid_cap;
  ProtocolOutput proto = run_protocol(projected, low, pc);
  for (bool miss : proto.missing) out.missing_grid_points += miss ? 1 : 0;
  out.comm = comm_stats(proto.transcript);
  const BernsteinSurrogate surrogate(pc.surrogate, std::move(proto.grid_estimates));

  MinimizerOptions mo = config.minimizer;
  mo.seed = config.seed;
  mo.threads = config.threads;
  const MinimizeResult min = minimize_surrogate(surrogate, image, 0.0, mo);
  out.minimizer = min.method;
  const ImageProjection bar = image.project_u(image.to_u(min.theta));
  out.w_bar = bar.point;

  try {
    const RecoveryResult rec = recover_minkowski(out.w_bar, phi, C);
    out.w_priv = rec.w;
    out.recovery_converged = rec.converged;
  } catch (const InfeasibleError&) {
    // Minimum-norm least-squares preimage.
    const Eigen::MatrixXd A = detail::to_eigen(phi);
    Eigen::VectorXd b(out.m);
    for (std::size_t i = 0; i < out.m; ++i) b(i) = out.w_bar[i];
    const Eigen::VectorXd w = A.transpose() * (A * A.transpose()).ldlt().solve(b);
    out.w_priv.assign(w.data(), w.data() + p);
    out.recovery_fallback = true;
  }
  {
    const auto back = phi.apply(out.w_priv);
    for (std::size_t i = 0; i < out.m; ++i) {
      out.recovery_residual = std::max(out.recovery_residual, std::fabs(back[i] - out.w_bar[i]));
    }
  }
  out.gauge = C.gauge(out.w_priv);

  std::vector<std::vector<double>> probe;
  for (std::size_t i = 0; i < std::min<std::size_t>(n, 256); ++i) probe.push_back(dataset[i].y);
  probe.push_back(out.w_priv);
  out.distortion = jl_check(phi, probe, out.gamma);

  if (config.evaluate) {
    const GLMMinimum best = glm_oracle(loss, dataset, C);
    out.empirical_minimum = best.value;
    out.excess_risk = glm_risk(loss, dataset, out.w_priv) - best.value;
    const std::vector<double> zero(p, 0.0);
    out.zero_excess_risk = glm_risk(loss, dataset, zero) - best.value;
    // min over w in C of (1/n) sum f(<Phi y_i, Phi w>, z_i), via features Phi^T Phi y_i.
    std::vector<GLMRecord> lifted(n);
    parallel_for(n, config.threads, [&](std::size_t i) {
      lifted[i].y = phi.apply_transpose(projected[i].x);
      lifted[i].z = dataset[i].z;
    });
    const GLMMinimum proj_best = glm_oracle(loss, lifted, C);
    detail::CompensatedSum acc;
    for (const auto& r : projected) acc.add(loss(detail::dot(r.x, out.w_bar, false), r.y));
    out.projected_excess_risk = acc.value() / static_cast<double>(n) - proj_best.value;
  }
  return out;
}

}  // namespace polyldp
