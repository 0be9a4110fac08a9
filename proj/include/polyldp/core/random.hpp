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

#include <atomic>
#include <cstdint>
#include <limits>

namespace polyldp {

// Counts every privacy-noise draw (Laplace samples and randomized-response
// coins). Oracle code paths are checked against this counter.
inline std::atomic<std::uint64_t>& noise_draw_counter() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}

inline std::uint64_t noise_draws() {
  return noise_draw_counter().load(std::memory_order_relaxed);
}

inline void count_noise_draw() {
  noise_draw_counter().fetch_add(1, std::memory_order_relaxed);
}

// SplitMix64 finalizer; used to expand seeds and derive substream keys.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Purpose tags keep substreams for different roles disjoint.
enum class StreamPurpose : std::uint64_t {
  kPlayer = 1,
  kPublicStrings = 2,
  kPartition = 3,
  kServer = 4,
  kProjection = 5,
  kMinimizer = 6,
  kData = 7,
  kWidth = 8,
};

// xoshiro256++ generator. Satisfies UniformRandomBitGenerator, is cheap to
// seed, and gives every player an independent stream keyed by
// (master seed, purpose, index) so results do not depend on scheduling.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed = 0) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
      s = mix64(s);
      word = s;
    }
  }

  static Stream derive(std::uint64_t master, StreamPurpose purpose,
                       std::uint64_t index = 0) {
    std::uint64_t key = mix64(master ^ mix64(static_cast<std::uint64_t>(purpose)));
    key = mix64(key ^ mix64(index + 0x632be59bd9b4e019ULL));
    return Stream(key);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace polyldp
