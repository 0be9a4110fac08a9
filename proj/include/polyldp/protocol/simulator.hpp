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

// One non-interactive round of the grid mechanisms.
//
// Player functions take their own record, public parameters and their own
// random stream, and nothing else; the server functions only see messages
// and public data.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/parallel.hpp"
#include "polyldp/core/random.hpp"
#include "polyldp/core/tensor.hpp"
#include "polyldp/erm/loss.hpp"
#include "polyldp/ldp/discretized.hpp"
#include "polyldp/ldp/laplace.hpp"
#include "polyldp/ldp/one_bit.hpp"
#include "polyldp/poly/bernstein.hpp"
#include "polyldp/protocol/partition.hpp"
#include "polyldp/protocol/transcript.hpp"

namespace polyldp {

enum class Mechanism { kFullGrid, kPartitionedOneBit, kDiscretized };

inline std::string_view mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::kFullGrid:
      return "full-grid";
    case Mechanism::kPartitionedOneBit:
      return "partitioned-one-bit";
    case Mechanism::kDiscretized:
      return "discretized";
  }
  return "unknown";
}

inline Mechanism parse_mechanism(std::string_view name) {
  if (name == "full-grid") return Mechanism::kFullGrid;
  if (name == "partitioned-one-bit" || name == "one-bit") return Mechanism::kPartitionedOneBit;
  if (name == "discretized") return Mechanism::kDiscretized;
  throw DomainError("unknown mechanism '" + std::string(name) + "'");
}

struct ProtocolConfig {
  Mechanism mechanism = Mechanism::kFullGrid;
  PrivacyParams privacy;
  SurrogateConfig surrogate;
  std::uint64_t seed = 0;
  std::optional<double> grid_step;  // discretized only; default from n, d, eps
  unsigned threads = 1;
  std::size_t grid_cap = kDefaultGridCap;

  // Full-grid players split eps evenly over their (k+1)^p reports.
  double per_report_epsilon() const {
    if (mechanism != Mechanism::kFullGrid) return privacy.epsilon;
    return privacy.epsilon / static_cast<double>(surrogate.grid_size(grid_cap));
  }
};

struct ProtocolOutput {
  Transcript transcript;
  std::vector<double> grid_estimates;
  std::vector<bool> missing;  // grid points with no reports, filled from neighbors
  std::optional<PartitionAssignment> partition;
};

namespace detail {

inline double checked_loss(const LossSpec& loss, std::span<const double> theta,
                           const Record& record, std::size_t player) {
  const double v = loss(theta, record);
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ContractViolation("loss '" + loss.name + "' returned " + std::to_string(v) +
                                " outside [0, 1]",
                            player);
  }
  return v;
}

inline int bits_for(std::uint64_t cardinality) {
  return cardinality <= 2 ? 1 : static_cast<int>(std::bit_width(cardinality - 1));
}

}  // namespace detail

// Full-grid player: one noisy loss value per grid point (flattened points,
// p coordinates each), each with budget `report_epsilon`.
inline MessageRecord full_grid_player(std::size_t player, const Record& record,
                                      const LossSpec& loss,
                                      std::span<const double> grid_points,
                                      double report_epsilon, Stream& rng) {
  const std::size_t p = static_cast<std::size_t>(loss.p);
  const std::size_t d = grid_points.size() / p;
  std::vector<double> reports(d);
  for (std::size_t g = 0; g < d; ++g) {
    reports[g] = detail::checked_loss(loss, grid_points.subspan(g * p, p), record, player) +
                 laplace_noise(1.0, report_epsilon, rng);
  }
  return {player, pack_doubles(reports), static_cast<std::uint32_t>(64 * d)};
}

// One-bit player: loss at its assigned grid point against its public string.
inline MessageRecord one_bit_player(std::size_t player, const Record& record,
                                    const LossSpec& loss, std::span<const double> point,
                                    double public_string, double epsilon, Stream& rng) {
  const double v = detail::checked_loss(loss, point, record, player);
  return {player, {one_bit_randomize(v, public_string, epsilon, rng)}, 1};
}

// Discretized player: rounded noisy loss at its assigned grid point plus the
// subset index.
inline MessageRecord discretized_player(std::size_t player, const Record& record,
                                        const LossSpec& loss, std::span<const double> point,
                                        std::uint32_t subset, std::uint64_t subset_count,
                                        double epsilon, const DiscreteGrid& grid,
                                        Stream& rng) {
  const double v = detail::checked_loss(loss, point, record, player);
  const std::uint64_t index = discretized_randomize(v, epsilon, grid, rng);
  const int value_bits = grid.bits();
  const int subset_bits = detail::bits_for(subset_count);
  detail::BitWriter w;
  w.write(pack_uint(index, value_bits), static_cast<std::uint32_t>(value_bits));
  w.write(pack_uint(subset, subset_bits), static_cast<std::uint32_t>(subset_bits));
  return {player, w.bytes(), static_cast<std::uint32_t>(value_bits + subset_bits)};
}

// Replaces missing grid values by the mean of filled axis neighbors, sweeping
// until every point is filled. Each sweep reads only the previous sweep.
inline void fill_missing(std::vector<double>& values, std::vector<bool> missing, int k, int p) {
  const std::size_t n = static_cast<std::size_t>(k) + 1;
  std::vector<std::size_t> idx(p);
  bool any_filled = false;
  for (bool m : missing) any_filled |= !m;
  if (!any_filled) throw DegenerateInputError("fill_missing: no grid point has reports");
  while (true) {
    std::vector<std::pair<std::size_t, double>> updates;
    for (std::size_t g = 0; g < values.size(); ++g) {
      if (!missing[g]) continue;
      detail::unflatten(g, n, idx);
      double sum = 0.0;
      int count = 0;
      std::size_t stride = 1;
      for (int axis = p - 1; axis >= 0; --axis) {
        if (idx[axis] > 0 && !missing[g - stride]) {
          sum += values[g - stride];
          ++count;
        }
        if (idx[axis] + 1 < n && !missing[g + stride]) {
          sum += values[g + stride];
          ++count;
        }
        stride *= n;
      }
      if (count > 0) updates.emplace_back(g, sum / count);
    }
    if (updates.empty()) break;
    for (const auto& [g, v] : updates) {
      values[g] = v;
      missing[g] = false;
    }
  }
}

inline ProtocolOutput run_protocol(std::span<const Record> dataset, const LossSpec& loss,
                                   const ProtocolConfig& config) {
  detail::require(!dataset.empty(), "run_protocol: empty dataset");
  config.privacy.validate();
  config.surrogate.validate();
  detail::require(loss.p == config.surrogate.p, "run_protocol: loss dimension != surrogate p");
  const std::size_t n = dataset.size();
  const int k = config.surrogate.k;
  const int p = config.surrogate.p;
  const std::size_t d = config.surrogate.grid_size(config.grid_cap);
  const auto grid = build_grid(k, p, config.grid_cap);
  std::vector<double> flat_grid;
  flat_grid.reserve(d * p);
  for (const auto& g : grid) flat_grid.insert(flat_grid.end(), g.begin(), g.end());
  auto point = [&](std::size_t g) {
    return std::span<const double>(flat_grid).subspan(g * p, p);
  };

  ProtocolOutput out;
  out.transcript.tag = std::string(mechanism_name(config.mechanism));
  std::vector<MessageRecord> messages(n);
  auto player_stream = [&](std::size_t i) {
    return Stream::derive(config.seed, StreamPurpose::kPlayer, i);
  };

  switch (config.mechanism) {
    case Mechanism::kFullGrid: {
      const double eps = config.per_report_epsilon();
      parallel_for(n, config.threads, [&](std::size_t i) {
        Stream rng = player_stream(i);
        messages[i] = full_grid_player(i, dataset[i], loss, flat_grid, eps, rng);
      });
      std::vector<detail::CompensatedSum> sums(d);
      for (const auto& m : messages) {
        const auto reports = unpack_doubles(m.payload);
        for (std::size_t g = 0; g < d; ++g) sums[g].add(reports[g]);
      }
      out.grid_estimates.resize(d);
      for (std::size_t g = 0; g < d; ++g) out.grid_estimates[g] = sums[g].value() / n;
      out.missing.assign(d, false);
      break;
    }
    case Mechanism::kPartitionedOneBit: {
      const double eps = config.privacy.epsilon;
      detail::require(eps > 0.0 && eps <= kOneBitMaxEpsilon,
                      "run_protocol: one-bit mechanism needs epsilon in (0, ln 2]");
      out.partition = partition_players(n, d, config.seed);
      const PublicStrings publics(config.seed, n, eps);
      const auto& assign = out.partition->assignment;
      parallel_for(n, config.threads, [&](std::size_t i) {
        Stream rng = player_stream(i);
        messages[i] = one_bit_player(i, dataset[i], loss, point(assign[i]), publics[i], eps, rng);
      });
      std::vector<std::vector<OneBitReport>> by_subset(d);
      for (std::size_t i = 0; i < n; ++i) {
        by_subset[assign[i]].push_back({messages[i].payload[0], i, i});
      }
      out.grid_estimates.assign(d, 0.0);
      out.missing.assign(d, false);
      for (std::size_t g = 0; g < d; ++g) {
        if (by_subset[g].empty()) {
          out.missing[g] = true;
        } else {
          out.grid_estimates[g] = one_bit_estimate(by_subset[g], publics);
        }
      }
      break;
    }
    case Mechanism::kDiscretized: {
      const double eps = config.privacy.epsilon;
      detail::require(std::isfinite(eps), "run_protocol: discretized mechanism needs finite epsilon");
      const double step = config.grid_step.value_or(
          default_grid_step(n, d, eps, config.privacy.beta));
      const DiscreteGrid dgrid = make_discrete_grid(step, default_clamp_pad(eps, n));
      out.partition = partition_players(n, d, config.seed);
      const auto& assign = out.partition->assignment;
      parallel_for(n, config.threads, [&](std::size_t i) {
        Stream rng = player_stream(i);
        messages[i] = discretized_player(i, dataset[i], loss, point(assign[i]), assign[i], d,
                                         eps, dgrid, rng);
      });
      // The server reads the subset index from the message itself.
      const int value_bits = dgrid.bits();
      const int subset_bits = detail::bits_for(d);
      std::vector<detail::CompensatedSum> sums(d);
      std::vector<std::size_t> counts(d, 0);
      for (const auto& m : messages) {
        detail::BitReader r(m.payload);
        const auto index = unpack_uint(r.read(value_bits), value_bits);
        const auto subset = unpack_uint(r.read(subset_bits), subset_bits);
        sums[subset].add(dgrid.value(index));
        ++counts[subset];
      }
      out.grid_estimates.assign(d, 0.0);
      out.missing.assign(d, false);
      for (std::size_t g = 0; g < d; ++g) {
        if (counts[g] == 0) {
          out.missing[g] = true;
        } else {
          out.grid_estimates[g] = sums[g].value() / static_cast<double>(counts[g]);
        }
      }
      break;
    }
  }
  fill_missing(out.grid_estimates, out.missing, k, p);
  for (auto& m : messages) out.transcript.add(std::move(m));
  return out;
}

// Exact mean losses at every grid point (the noiseless target).
inline std::vector<double> exact_grid_means(std::span<const Record> dataset,
                                            const LossSpec& loss, int k,
                                            std::size_t cap = kDefaultGridCap,
                                            unsigned threads = 1) {
  const auto grid = build_grid(k, loss.p, cap);
  std::vector<double> out(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t g) {
    detail::CompensatedSum s;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      s.add(detail::checked_loss(loss, grid[g], dataset[i], i));
    }
    out[g] = s.value() / static_cast<double>(dataset.size());
  });
  return out;
}

// Expected one-bit estimates given the partition: each subset's exact mean.
inline std::vector<double> expected_one_bit_estimates(std::span<const Record> dataset,
                                                      const LossSpec& loss, int k,
                                                      const PartitionAssignment& partition) {
  const auto grid = build_grid(k, loss.p);
  std::vector<detail::CompensatedSum> sums(grid.size());
  std::vector<std::size_t> counts(grid.size(), 0);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto g = partition.assignment[i];
    sums[g].add(detail::checked_loss(loss, grid[g], dataset[i], i));
    ++counts[g];
  }
  std::vector<double> out(grid.size());
  std::vector<bool> missing(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    missing[g] = counts[g] == 0;
    out[g] = missing[g] ? 0.0 : sums[g].value() / static_cast<double>(counts[g]);
  }
  fill_missing(out, missing, k, loss.p);
  return out;
}

}  // namespace polyldp
