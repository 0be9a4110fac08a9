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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/random.hpp"

namespace polyldp {

// Public assignment of players to grid points. Generated by the server before
// the round, so subset sizes are known to everyone.
struct PartitionAssignment {
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> assignment;

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> out(d, 0);
    for (auto s : assignment) ++out[s];
    return out;
  }

  bool has_empty_subset() const {
    for (auto s : sizes()) {
      if (s == 0) return true;
    }
    return false;
  }

  // n >= d log d, the regime where every subset is nonempty with high
  // probability.
  bool coverage_regime() const {
    const double dd = static_cast<double>(d);
    return d <= 1 || static_cast<double>(n) >= dd * std::log(dd);
  }
};

// Each player joins a uniformly random subset, independently.
inline PartitionAssignment partition_players(std::size_t n, std::size_t d,
                                             std::uint64_t seed) {
  detail::require(d >= 1, "partition_players: d must be >= 1");
  detail::require(n >= d, "partition_players: need n >= d");
  PartitionAssignment out;
  out.n = n;
  out.d = d;
  out.seed = seed;
  out.assignment.resize(n);
  Stream rng = Stream::derive(seed, StreamPurpose::kPartition);
  for (auto& a : out.assignment) a = static_cast<std::uint32_t>(rng.below(d));
  return out;
}

}  // namespace polyldp
