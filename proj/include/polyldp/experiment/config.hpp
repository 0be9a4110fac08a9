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

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "polyldp/core/error.hpp"
#include "polyldp/erm/constraint.hpp"
#include "polyldp/io/config.hpp"
#include "polyldp/io/json.hpp"
#include "polyldp/protocol/simulator.hpp"

namespace polyldp {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct ExperimentConfig {
  // erm | erm-onebit | release-marginals | release-smooth | highdim
  std::string command = "erm";
  Mechanism mechanism = Mechanism::kFullGrid;
  std::vector<std::size_t> n;
  std::vector<double> epsilon;
  std::vector<std::uint64_t> seeds;
  int k = 0;  // 0: auto (ERM granularity) or the command default
  int h = 2;
  int p = 1;
  double beta = 0.05;
  std::string loss = "squared";
  std::string dataset;  // empty: the loss's default
  std::string constraint = "box";
  bool regularized = false;
  std::optional<double> mu;  // nullopt with regularized: n^{-1/12}
  std::size_t eval_n = 0;    // fresh samples for Err_P; 0 skips it
  double alpha = 0.2;        // marginals
  int t = 8;                 // smooth queries
  std::size_t m = 3;         // highdim projection dimension
  std::size_t sparsity = 3;  // highdim planted model
  unsigned threads = 1;
  std::string output;

  void validate() const {
    const bool known = command == "erm" || command == "erm-onebit" ||
                       command == "release-marginals" || command == "release-smooth" ||
                       command == "highdim";
    detail::require(known, "config: unknown command '" + command + "'");
    detail::require(!n.empty(), "config: n list is empty");
    detail::require(!epsilon.empty(), "config: epsilon list is empty");
    detail::require(!seeds.empty(), "config: seeds list is empty");
    for (auto v : n) detail::require(v >= 1, "config: n must be >= 1");
    for (auto e : epsilon) detail::require(e > 0.0, "config: epsilon must be positive");
    detail::require(k >= 0, "config: k must be >= 0");
    detail::require(h >= 1, "config: h must be >= 1");
    detail::require(p >= 1, "config: p must be >= 1");
    detail::require(beta > 0.0 && beta < 1.0, "config: beta must lie in (0, 1)");
    detail::require(threads >= 1, "config: threads must be >= 1");
    parse_constraint_kind(constraint);
  }

  Json to_json() const {
    Json eps = Json::array();
    for (double e : epsilon) eps.push_back(io::number(e));
    Json j = {{"command", command},
              {"mechanism", std::string(mechanism_name(mechanism))},
              {"n", n},
              {"epsilon", eps},
              {"seeds", seeds},
              {"k", k},
              {"h", h},
              {"p", p},
              {"beta", io::number(beta)},
              {"loss", loss},
              {"dataset", dataset},
              {"constraint", constraint},
              {"regularized", regularized},
              {"mu", mu ? io::number(*mu) : Json("auto")},
              {"eval_n", eval_n},
              {"alpha", io::number(alpha)},
              {"t", t},
              {"m", m},
              {"sparsity", sparsity},
              {"threads", threads},
              {"output", output}};
    return j;
  }
};

namespace detail {

template <class T>
std::vector<T> scalar_or_list(const Json& j, const char* key) {
  const Json& v = io::field(j, key);
  std::vector<T> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(x.get<T>());
  } else {
    out.push_back(v.get<T>());
  }
  return out;
}

}  // namespace detail

// Accepts the keys written by ExperimentConfig::to_json; n, epsilon and
// seeds may be scalars or lists. Unknown keys are rejected.
inline ExperimentConfig experiment_config_from_json(const Json& j) {
  static const char* const kKeys[] = {"command", "mechanism", "n", "epsilon", "seeds", "k", "h",
                                      "p", "beta", "loss", "dataset", "constraint", "regularized",
                                      "mu", "eval_n", "alpha", "t", "m", "sparsity", "threads",
                                      "output", "seed"};
  detail::require(j.is_object(), "config: top level must be a table/object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : kKeys) ok = ok || key == k;
    detail::require(ok, "config: unknown key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    c.command = j.value("command", c.command);
    if (j.contains("mechanism")) c.mechanism = parse_mechanism(j.at("mechanism").get<std::string>());
    if (c.command == "erm-onebit") c.mechanism = Mechanism::kPartitionedOneBit;
    c.n = detail::scalar_or_list<std::size_t>(j, "n");
    const Json& eps = io::field(j, "epsilon");
    if (eps.is_array()) {
      for (const auto& e : eps) c.epsilon.push_back(io::to_number(e));
    } else {
      c.epsilon.push_back(io::to_number(eps));
    }
    if (j.contains("seeds")) {
      c.seeds = detail::scalar_or_list<std::uint64_t>(j, "seeds");
    } else {
      c.seeds = detail::scalar_or_list<std::uint64_t>(j, "seed");
    }
    c.k = j.value("k", c.k);
    c.h = j.value("h", c.h);
    c.p = j.value("p", c.p);
    if (j.contains("beta")) c.beta = io::to_number(j.at("beta"));
    c.loss = j.value("loss", c.loss);
    c.dataset = j.value("dataset", c.dataset);
    c.constraint = j.value("constraint", c.constraint);
    c.regularized = j.value("regularized", c.regularized);
    if (j.contains("mu") && !(j.at("mu").is_string() && j.at("mu").get<std::string>() == "auto")) {
      c.mu = io::to_number(j.at("mu"));
    }
    c.eval_n = j.value("eval_n", c.eval_n);
    if (j.contains("alpha")) c.alpha = io::to_number(j.at("alpha"));
    c.t = j.value("t", c.t);
    c.m = j.value("m", c.m);
    c.sparsity = j.value("sparsity", c.sparsity);
    c.threads = j.value("threads", c.threads);
    c.output = j.value("output", c.output);
  } catch (const Json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  return experiment_config_from_json(load_config(path));
}

// FNV-1a 64 of the canonical (sorted-key) JSON dump without the fields that
// cannot change results (output path, thread count), as 16 hex digits.
inline std::string config_hash(const ExperimentConfig& c) {
  Json j = c.to_json();
  j.erase("output");
  j.erase("threads");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace polyldp
