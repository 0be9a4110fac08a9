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

// Seeded synthetic datasets. Every generator draws from the kData substream
// of its seed, so a (name, n, p, seed) tuple names one dataset.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/core/random.hpp"
#include "polyldp/erm/loss.hpp"
#include "polyldp/highdim/glm.hpp"
#include "polyldp/query/marginals.hpp"

namespace polyldp::datasets {

using Sampler = std::function<Record(Stream&)>;

// "linear": x ~ U[0,1]^p, y = 0.5 mean(x) + U(-0.05, 0.05), so the squared
// loss is minimized near theta = 0.5.
// "logistic": x ~ U[-1,1]^p, y = +1 with probability sigmoid(2 sum_j 0.5 x_j).
// "clusters": x near 0.25 (weight 0.35) or 0.7 (weight 0.65) per coordinate,
// a two-well landscape for the sigmoid-well loss.
inline Sampler erm_sampler(const std::string& name, int p) {
  detail::require(p >= 1, "erm_sampler: p must be >= 1");
  if (name == "linear") {
    return [p](Stream& rng) {
      Record r;
      r.x.resize(p);
      double mean = 0.0;
      for (auto& v : r.x) {
        v = rng.uniform();
        mean += v;
      }
      mean /= p;
      r.y = std::clamp(0.5 * mean + 0.1 * (rng.uniform() - 0.5), 0.0, 1.0);
      return r;
    };
  }
  if (name == "logistic") {
    return [p](Stream& rng) {
      Record r;
      r.x.resize(p);
      double m = 0.0;
      for (auto& v : r.x) {
        v = 2.0 * rng.uniform() - 1.0;
        m += 0.5 * v;
      }
      r.y = rng.uniform() < 1.0 / (1.0 + std::exp(-2.0 * m)) ? 1.0 : -1.0;
      return r;
    };
  }
  if (name == "clusters") {
    return [p](Stream& rng) {
      Record r;
      const double center = rng.uniform() < 0.35 ? 0.25 : 0.7;
      r.x.resize(p);
      for (auto& v : r.x) v = std::clamp(center + 0.1 * (rng.uniform() - 0.5), 0.0, 1.0);
      return r;
    };
  }
  throw DomainError("unknown ERM dataset '" + name + "'");
}

inline std::string default_erm_dataset(const std::string& loss) {
  if (loss == "squared") return "linear";
  if (loss == "logistic") return "logistic";
  if (loss == "sigmoid_well") return "clusters";
  throw DomainError("no default dataset for loss '" + loss + "'");
}

inline std::vector<Record> erm_dataset(const std::string& name, std::size_t n, int p,
                                       std::uint64_t seed) {
  const Sampler sample = erm_sampler(name, p);
  Stream rng = Stream::derive(seed, StreamPurpose::kData);
  std::vector<Record> out(n);
  for (auto& r : out) r = sample(rng);
  return out;
}

// Bit vectors with a latent class: x_j ~ Bern(q_j) or Bern(q_j / 2), with
// q_j rising from 0.1 to 0.7 across attributes.
inline std::vector<BitVector> bit_dataset(std::size_t n, int p, std::uint64_t seed) {
  detail::require(p >= 1, "bit_dataset: p must be >= 1");
  Stream rng = Stream::derive(seed, StreamPurpose::kData);
  std::vector<BitVector> out(n, BitVector(p));
  for (auto& x : out) {
    const bool latent = rng.uniform() < 0.5;
    for (int j = 0; j < p; ++j) {
      const double q = 0.1 + (p > 1 ? 0.6 * j / (p - 1) : 0.3);
      x[j] = rng.uniform() < (latent ? q : 0.5 * q) ? 1 : 0;
    }
  }
  return out;
}

// Points in [-1,1]^p: half N(0.3, 0.2^2) per coordinate (clamped), half
// uniform.
inline std::vector<std::vector<double>> smooth_dataset(std::size_t n, int p, std::uint64_t seed) {
  detail::require(p >= 1, "smooth_dataset: p must be >= 1");
  Stream rng = Stream::derive(seed, StreamPurpose::kData);
  std::normal_distribution<double> normal(0.3, 0.2);
  std::vector<std::vector<double>> out(n, std::vector<double>(p));
  for (auto& x : out) {
    const bool bump = rng.uniform() < 0.5;
    for (auto& v : x) v = bump ? std::clamp(normal(rng), -1.0, 1.0) : 2.0 * rng.uniform() - 1.0;
  }
  return out;
}

struct PlantedGLM {
  std::vector<GLMRecord> data;
  std::vector<double> w0;  // s-sparse with ||w0||_1 = 1
};

// s-sparse w0 on the first s coordinates of a seeded permutation, with
// alternating signs (nonnegative when `nonnegative`). Features put 80% of
// their norm on the support; labels are <w0, y> plus N(0, 0.05^2) noise for
// the squared link, or a +-1 coin with P(+1) = sigmoid(4 <w0, y>) otherwise.
inline PlantedGLM planted_glm(std::size_t n, std::size_t p, std::size_t s, const std::string& link,
                              std::uint64_t seed, bool nonnegative = false) {
  detail::require(s >= 1 && s <= p, "planted_glm: need 1 <= s <= p");
  Stream rng = Stream::derive(seed, StreamPurpose::kData);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::size_t> perm(p);
  for (std::size_t j = 0; j < p; ++j) perm[j] = j;
  for (std::size_t j = p - 1; j > 0; --j) std::swap(perm[j], perm[rng() % (j + 1)]);
  PlantedGLM out;
  out.w0.assign(p, 0.0);
  for (std::size_t t = 0; t < s; ++t) {
    const double sign = nonnegative || t % 2 == 0 ? 1.0 : -1.0;
    out.w0[perm[t]] = sign / static_cast<double>(s);
  }
  const double conc = 0.8;
  out.data.resize(n);
  for (auto& r : out.data) {
    r.y.assign(p, 0.0);
    double sq = 0.0;
    for (auto& v : r.y) {
      v = normal(rng);
      sq += v * v;
    }
    for (auto& v : r.y) v *= std::sqrt(1.0 - conc * conc) / std::sqrt(sq);
    std::vector<double> g(s);
    double gs = 0.0;
    for (auto& v : g) {
      v = normal(rng);
      gs += v * v;
    }
    for (std::size_t t = 0; t < s; ++t) r.y[perm[t]] += conc * g[t] / std::sqrt(gs);
    double norm = 0.0;
    for (double v : r.y) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 1.0) {
      for (auto& v : r.y) v /= norm;
    }
    double a = 0.0;
    for (std::size_t j = 0; j < p; ++j) a += out.w0[j] * r.y[j];
    if (link == "squared") {
      r.z = std::clamp(a + 0.05 * normal(rng), -1.0, 1.0);
    } else if (link == "logistic") {
      r.z = rng.uniform() < 1.0 / (1.0 + std::exp(-4.0 * a)) ? 1.0 : -1.0;
    } else {
      throw DomainError("planted_glm: unknown link '" + link + "'");
    }
  }
  return out;
}

}  // namespace polyldp::datasets
