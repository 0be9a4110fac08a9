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

// Small helpers for dense tensors stored as flat arrays in lexicographic
// multi-index order (first axis most significant).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "polyldp/core/error.hpp"

namespace polyldp::detail {

// base^exp, or throws ResourceError once the product passes `cap`.
inline std::size_t checked_power(std::size_t base, int exp, std::size_t cap,
                                 const char* what) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && out > cap / base) {
      throw ResourceError(std::string(what) + " exceeds the configured cap of " +
                          std::to_string(cap));
    }
    out *= base;
  }
  if (out > cap) {
    throw ResourceError(std::string(what) + " exceeds the configured cap of " +
                        std::to_string(cap));
  }
  return out;
}

// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double dot(std::span<const double> a, std::span<const double> b,
                  bool compensated) {
  if (compensated) {
    CompensatedSum s;
    for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
    return s.value();
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Contracts the last axis of a tensor with extent `n` against `weights`.
// Input has rows*n entries, output has `rows` entries.
inline std::vector<double> contract_last(std::span<const double> tensor,
                                         std::span<const double> weights,
                                         bool compensated) {
  const std::size_t n = weights.size();
  const std::size_t rows = tensor.size() / n;
  std::vector<double> out(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] = dot(tensor.subspan(r * n, n), weights, compensated);
  }
  return out;
}

// Applies the n_out x n_in row-major matrix along `axis` of a tensor whose
// every axis has extent n_in (axes before `axis` may already have extent
// n_out). `extents` is updated in place.
inline std::vector<double> mode_product(std::span<const double> tensor,
                                        std::vector<std::size_t>& extents,
                                        std::size_t axis,
                                        std::span<const double> matrix,
                                        std::size_t n_out) {
  const std::size_t n_in = extents[axis];
  std::size_t outer = 1;
  for (std::size_t i = 0; i < axis; ++i) outer *= extents[i];
  std::size_t inner = 1;
  for (std::size_t i = axis + 1; i < extents.size(); ++i) inner *= extents[i];
  std::vector<double> out(outer * n_out * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t r = 0; r < n_out; ++r) {
      double* dst = out.data() + (o * n_out + r) * inner;
      for (std::size_t c = 0; c < n_in; ++c) {
        const double w = matrix[r * n_in + c];
        if (w == 0.0) continue;
        const double* src = tensor.data() + (o * n_in + c) * inner;
        for (std::size_t s = 0; s < inner; ++s) dst[s] += w * src[s];
      }
    }
  }
  extents[axis] = n_out;
  return out;
}

// Decodes a flat index into a multi-index with equal extent per axis.
inline void unflatten(std::size_t flat, std::size_t extent,
                      std::span<std::size_t> out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = flat % extent;
    flat /= extent;
  }
}

}  // namespace polyldp::detail
