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

// Configuration documents: TOML or JSON, both loaded into a JSON tree.

#include <toml.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "polyldp/core/error.hpp"
#include "polyldp/io/json.hpp"
#include "polyldp/protocol/simulator.hpp"

namespace polyldp {

namespace io {

inline Json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    Json out = Json::object();
    for (const auto& [key, value] : *t) out[std::string(key.str())] = toml_to_json(value);
    return out;
  }
  if (const auto* a = node.as_array()) {
    Json out = Json::array();
    for (const auto& value : *a) out.push_back(toml_to_json(value));
    return out;
  }
  if (const auto* v = node.as_string()) return v->get();
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return number(v->get());
  if (const auto* v = node.as_boolean()) return v->get();
  throw DomainError("config: unsupported TOML value (dates and times are not accepted)");
}

inline bool looks_like_json(std::string_view text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return c == '{';
  }
  return false;
}

}  // namespace io

// Parses `text` as JSON if it starts with '{', as TOML otherwise.
inline Json parse_config_text(const std::string& text, const std::string& source = "<string>") {
  if (io::looks_like_json(text)) {
    try {
      return Json::parse(text);
    } catch (const Json::exception& e) {
      throw DomainError(source + ": invalid JSON: " + e.what());
    }
  }
  try {
    return io::toml_to_json(toml::parse(text, std::string_view(source)));
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ": invalid TOML: " << e.description() << " at line "
        << e.source().begin.line;
    throw DomainError(msg.str());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json load_config(const std::string& path) {
  return parse_config_text(read_text_file(path), path);
}

// {mechanism, epsilon, beta, k, h, p, seed, grid_step?, threads?}
inline ProtocolConfig protocol_config_from_json(const Json& j) {
  ProtocolConfig c;
  if (j.contains("mechanism")) c.mechanism = parse_mechanism(j.at("mechanism").get<std::string>());
  c.privacy.epsilon = io::to_number(io::field(j, "epsilon"));
  if (j.contains("beta")) c.privacy.beta = io::to_number(j.at("beta"));
  c.surrogate.k = io::field(j, "k").get<int>();
  c.surrogate.h = j.value("h", 1);
  c.surrogate.p = j.value("p", 1);
  if (j.contains("T")) c.surrogate.smoothness_T = io::to_number(j.at("T"));
  c.seed = io::field(j, "seed").get<std::uint64_t>();
  if (j.contains("grid_step")) c.grid_step = io::to_number(j.at("grid_step"));
  c.threads = j.value("threads", 1u);
  c.privacy.validate();
  c.surrogate.validate();
  return c;
}

inline Json protocol_config_to_json(const ProtocolConfig& c) {
  Json j = {{"mechanism", std::string(mechanism_name(c.mechanism))},
            {"epsilon", io::number(c.privacy.epsilon)},
            {"beta", io::number(c.privacy.beta)},
            {"k", c.surrogate.k},
            {"h", c.surrogate.h},
            {"p", c.surrogate.p},
            {"T", io::number(c.surrogate.smoothness_T)},
            {"seed", c.seed},
            {"threads", c.threads}};
  if (c.grid_step) j["grid_step"] = io::number(*c.grid_step);
  return j;
}

}  // namespace polyldp
