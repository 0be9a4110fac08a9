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

// Seeded sweeps over (n, epsilon, seed). One run per point; rows come back in
// config order whatever order the worker pool finishes them in.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/parallel.hpp"
#include "polyldp/erm/erm.hpp"
#include "polyldp/experiment/config.hpp"
#include "polyldp/experiment/datasets.hpp"
#include "polyldp/highdim/dr_erm.hpp"
#include "polyldp/io/json.hpp"
#include "polyldp/query/marginals.hpp"
#include "polyldp/query/smooth.hpp"

namespace polyldp {

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr const char* kCsvColumns =
    "seed,n,epsilon,k,h,p,mechanism,sup_grid_error,err_empirical,err_population,total_bits,error";

struct SweepRow {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  double epsilon = 0.0;
  int k = 0;
  int h = 0;
  int p = 0;
  std::string mechanism;
  std::optional<double> sup_grid_error;
  std::optional<double> err_empirical;
  std::optional<double> err_population;
  std::optional<std::uint64_t> total_bits;
  std::string error;  // empty on success
};

struct PointResult {
  SweepRow row;
  Json detail;  // the full result document
};

// Constraint sets inside [0,1]^p for the ERM commands.
inline ConstraintSet erm_constraint(const std::string& kind, int p) {
  const std::vector<double> mid(p, 0.5);
  switch (parse_constraint_kind(kind)) {
    case ConstraintKind::kBox:
      return ConstraintSet::unit_box(p);
    case ConstraintKind::kL2Ball:
      return ConstraintSet::l2_ball(mid, 0.5);
    case ConstraintKind::kL1Ball:
      return ConstraintSet::l1_ball(mid, 0.5);
    case ConstraintKind::kSimplex:
      return ConstraintSet::simplex(p, 1.0);
  }
  throw DomainError("unsupported constraint '" + kind + "'");
}

// Gaussian kernels exp(-||x - c 1||^2 / (2 sigma^2)) for c in {-0.5, 0, 0.5}
// and five bandwidths.
inline std::vector<SmoothQuery> smooth_query_family(int p) {
  std::vector<SmoothQuery> out;
  for (double sigma : {0.6, 0.8, 1.0, 1.5, 2.0}) {
    for (double c : {-0.5, 0.0, 0.5}) {
      out.push_back(smooth_queries::gaussian_kernel(std::vector<double>(p, c), sigma));
    }
  }
  return out;
}

namespace detail {

// Runs the configured ERM command on `data` and fills Err_P from fresh draws
// of `dataset` when eval_n > 0.
inline ERMResult erm_on_data(const ExperimentConfig& c, std::span<const Record> data,
                             const std::string& dataset, double eps, std::uint64_t seed) {
  const LossSpec loss = losses::by_name(c.loss, c.p);
  const ConstraintSet C = erm_constraint(c.constraint, c.p);
  ProtocolConfig pc;
  pc.mechanism = c.command == "erm-onebit" ? Mechanism::kPartitionedOneBit : c.mechanism;
  pc.privacy.epsilon = eps;
  pc.privacy.beta = c.beta;
  pc.surrogate.k = c.k > 0 ? c.k : auto_granularity(data.size(), c.p, c.h, eps, c.beta);
  pc.surrogate.h = c.h;
  pc.surrogate.p = c.p;
  pc.seed = seed;
  pc.threads = c.threads;
  ErmOptions options;
  options.minimizer.threads = c.threads;
  options.oracle.threads = c.threads;
  ERMResult r = c.regularized ? private_erm_regularized(data, loss, C, pc, c.mu, options)
                              : private_erm(data, loss, C, pc, options);
  if (c.eval_n > 0 && !dataset.empty()) {
    r.err_population = excess_population_risk(r.theta_priv, datasets::erm_sampler(dataset, c.p),
                                              loss, C, c.eval_n, seed);
  }
  return r;
}

inline PointResult erm_point(const ExperimentConfig& c, std::size_t n, double eps,
                             std::uint64_t seed) {
  PointResult out;
  const std::string name = c.dataset.empty() ? datasets::default_erm_dataset(c.loss) : c.dataset;
  const auto data = datasets::erm_dataset(name, n, c.p, seed);
  const ERMResult r = erm_on_data(c, data, name, eps, seed);
  out.row.k = r.k;
  out.row.h = r.h;
  out.row.mechanism = r.mechanism;
  out.row.sup_grid_error = r.sup_grid_error;
  out.row.err_empirical = r.err_empirical;
  if (r.err_population) out.row.err_population = r.err_population->value;
  out.row.total_bits = r.comm.total_bits;
  out.detail = erm_result_to_json(r);
  out.detail["dataset"] = name;
  out.detail["loss"] = c.loss;
  out.detail["constraint"] = c.constraint;
  return out;
}

// Each LDP-AVG player sends one coordinate index and one double.
inline std::uint64_t summary_bits(std::size_t n, std::size_t dim) {
  return static_cast<std::uint64_t>(n) * (64 + static_cast<std::uint64_t>(bits_for(dim)));
}

inline PointResult marginals_point(const ExperimentConfig& c, std::size_t n, double eps,
                                   std::uint64_t seed) {
  PointResult out;
  const int width = c.k > 0 ? c.k : 2;
  const auto data = datasets::bit_dataset(n, c.p, seed);
  PrivacyParams privacy{.epsilon = eps, .beta = c.beta, .alpha = c.alpha};
  const CoefficientSummary s = release_marginals(data, c.p, width, privacy, seed);
  privacy.epsilon = std::numeric_limits<double>::infinity();
  const CoefficientSummary exact = release_marginals(data, c.p, width, privacy, seed);
  double err = 0.0, approx = 0.0;
  Json answers = Json::array();
  for (const auto& y : enumerate_queries(c.p, width)) {
    const double truth = oracle_marginal(data, y);
    const double a = answer_marginal(s, y);
    err = std::max(err, std::fabs(a - truth));
    approx = std::max(approx, std::fabs(answer_marginal(exact, y) - truth));
    std::string bits;
    for (auto b : y) bits.push_back(b ? '1' : '0');
    answers.push_back({{"query", bits}, {"answer", io::number(a)}, {"exact", io::number(truth)}});
  }
  out.row.k = width;
  out.row.h = s.degree;
  out.row.mechanism = "ldp-avg-chebyshev";
  out.row.sup_grid_error = approx;
  out.row.err_empirical = err;
  out.row.total_bits = summary_bits(n, s.coeffs.size());
  out.detail = {{"summary", summary_to_json(s)}, {"answers", answers},
                {"max_error", io::number(err)}, {"noiseless_max_error", io::number(approx)}};
  return out;
}

inline PointResult smooth_point(const ExperimentConfig& c, std::size_t n, double eps,
                                std::uint64_t seed) {
  PointResult out;
  const auto data = datasets::smooth_dataset(n, c.p, seed);
  PrivacyParams privacy{.epsilon = eps, .beta = c.beta, .alpha = std::nullopt};
  const CoefficientSummary s = release_smooth(data, c.t, privacy, seed);
  privacy.epsilon = std::numeric_limits<double>::infinity();
  const CoefficientSummary exact = release_smooth(data, c.t, privacy, seed);
  double err = 0.0, approx = 0.0;
  for (const auto& q : smooth_query_family(c.p)) {
    const double truth = oracle_smooth(data, q);
    err = std::max(err, std::fabs(answer_smooth(s, q) - truth));
    approx = std::max(approx, std::fabs(answer_smooth(exact, q) - truth));
  }
  out.row.k = c.t;
  out.row.h = 0;
  out.row.mechanism = "ldp-avg-trig";
  out.row.sup_grid_error = approx;
  out.row.err_empirical = err;
  out.row.total_bits = summary_bits(n, s.coeffs.size());
  out.detail = {{"summary", summary_to_json(s)}, {"max_error", io::number(err)},
                {"noiseless_max_error", io::number(approx)}};
  return out;
}

inline PointResult highdim_point(const ExperimentConfig& c, std::size_t n, double eps,
                                 std::uint64_t seed) {
  PointResult out;
  const auto kind = parse_constraint_kind(c.constraint);
  detail::require(kind == ConstraintKind::kL1Ball || kind == ConstraintKind::kSimplex,
                  "highdim: constraint must be l1 or simplex");
  const std::size_t p = static_cast<std::size_t>(c.p);
  const bool simplex = kind == ConstraintKind::kSimplex;
  const auto planted = datasets::planted_glm(n, p, std::min(c.sparsity, p), c.loss, seed, simplex);
  const ConstraintSet C = simplex ? ConstraintSet::simplex(c.p, 1.0)
                                  : ConstraintSet::l1_ball(std::vector<double>(p, 0.0), 1.0);
  DrErmConfig dc;
  dc.m = c.m;
  dc.mechanism = c.mechanism;
  dc.k = c.k > 0 ? c.k : 4;
  dc.h = c.h;
  dc.seed = seed;
  dc.width_trials = 2000;
  PrivacyParams privacy{.epsilon = eps, .beta = c.beta, .alpha = std::nullopt};
  const HighDimResult r = dr_erm(planted.data, glm_losses::by_name(c.loss), C, privacy, dc);
  out.row.k = r.k;
  out.row.h = r.h;
  out.row.mechanism = r.mechanism;
  out.row.err_empirical = r.excess_risk;
  out.row.total_bits = r.comm.total_bits;
  out.detail = highdim_result_to_json(r);
  out.detail["w0"] = io::numbers(planted.w0);
  return out;
}

}  // namespace detail

// One configured run; failures come back as a row with the error column set.
inline PointResult run_point(const ExperimentConfig& c, std::size_t n, double eps,
                             std::uint64_t seed) {
  PointResult out;
  try {
    if (c.command == "erm" || c.command == "erm-onebit") {
      out = detail::erm_point(c, n, eps, seed);
    } else if (c.command == "release-marginals") {
      out = detail::marginals_point(c, n, eps, seed);
    } else if (c.command == "release-smooth") {
      out = detail::smooth_point(c, n, eps, seed);
    } else if (c.command == "highdim") {
      out = detail::highdim_point(c, n, eps, seed);
    } else {
      throw DomainError("unknown command '" + c.command + "'");
    }
  } catch (const std::exception& e) {
    out = PointResult{};
    out.row.error = e.what();
    out.row.mechanism = c.command == "erm-onebit" ? "partitioned-one-bit"
                                                  : std::string(mechanism_name(c.mechanism));
    out.detail = {{"error", e.what()}};
  }
  out.row.seed = seed;
  out.row.n = n;
  out.row.epsilon = eps;
  out.row.p = c.p;
  return out;
}

// Cross product in config order: n outermost, then epsilon, then seed.
inline std::vector<SweepRow> run_sweep(const ExperimentConfig& c) {
  c.validate();
  struct Point {
    std::size_t n;
    double eps;
    std::uint64_t seed;
  };
  std::vector<Point> points;
  for (auto n : c.n) {
    for (double e : c.epsilon) {
      for (auto s : c.seeds) points.push_back({n, e, s});
    }
  }
  // Parallelism is across points; each run is single-threaded.
  ExperimentConfig inner = c;
  inner.threads = 1;
  std::vector<SweepRow> rows(points.size());
  parallel_for(points.size(), c.threads, [&](std::size_t i) {
    rows[i] = run_point(inner, points[i].n, points[i].eps, points[i].seed).row;
  });
  return rows;
}

namespace detail {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch == '\n' || ch == '\r' ? ' ' : ch);
  }
  out.push_back('"');
  return out;
}

}  // namespace detail

inline void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "# polyldp sweep csv schema_version=" << kCsvSchemaVersion << "\n";
  out << kCsvColumns << "\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? detail::format_double(*v) : std::string();
  };
  for (const auto& r : rows) {
    out << r.seed << ',' << r.n << ',' << detail::format_double(r.epsilon) << ',' << r.k << ','
        << r.h << ',' << r.p << ',' << detail::csv_field(r.mechanism) << ','
        << opt(r.sup_grid_error) << ',' << opt(r.err_empirical) << ',' << opt(r.err_population)
        << ',' << (r.total_bits ? std::to_string(*r.total_bits) : std::string()) << ','
        << detail::csv_field(r.error) << "\n";
  }
}

inline Json sweep_manifest(const ExperimentConfig& c, std::span<const SweepRow> rows,
                           const std::string& csv_path) {
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.error.empty() ? 0 : 1;
  return {{"schema_version", kCsvSchemaVersion},
          {"library_version", kLibraryVersion},
          {"config", c.to_json()},
          {"config_hash", config_hash(c)},
          {"csv", csv_path},
          {"rows", rows.size()},
          {"failed_rows", failed}};
}

// Writes `csv_path` and `csv_path + ".manifest.json"`. The CSV file is opened
// before any run so an unwritable path fails fast. Returns the rows.
inline std::vector<SweepRow> run_sweep_to_files(const ExperimentConfig& c,
                                                const std::string& csv_path) {
  c.validate();
  std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
  if (!csv) throw DomainError("sweep: cannot write '" + csv_path + "'");
  const std::string manifest_path = csv_path + ".manifest.json";
  std::ofstream manifest(manifest_path, std::ios::binary | std::ios::trunc);
  if (!manifest) throw DomainError("sweep: cannot write '" + manifest_path + "'");
  const auto rows = run_sweep(c);
  write_sweep_csv(csv, rows);
  manifest << sweep_manifest(c, rows, csv_path).dump(2) << "\n";
  return rows;
}

}  // namespace polyldp
