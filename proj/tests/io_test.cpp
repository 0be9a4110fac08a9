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


#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "polyldp/experiment/config.hpp"
#include "polyldp/experiment/datasets.hpp"
#include "polyldp/io/config.hpp"
#include "polyldp/io/json.hpp"
#include "polyldp/query/marginals.hpp"

namespace polyldp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Numbers, NonFiniteRoundTrip) {
  EXPECT_EQ(io::number(kInf), Json("inf"));
  EXPECT_EQ(io::number(-kInf), Json("-inf"));
  EXPECT_TRUE(std::isnan(io::to_number(io::number(std::nan("")))));
  EXPECT_EQ(io::to_number(Json("inf")), kInf);
  EXPECT_EQ(io::to_number(Json(0.25)), 0.25);
  EXPECT_THROW(io::to_number(Json("many")), DomainError);
  EXPECT_THROW(io::to_number(Json::array()), DomainError);
}

TEST(Surrogate, RoundTripIsExact) {
  SurrogateConfig c;
  c.k = 4;
  c.h = 2;
  c.p = 2;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> values(25);
  for (auto& v : values) v = u(rng);
  const BernsteinSurrogate s(c, values);
  const Json j = surrogate_to_json(s);
  const BernsteinSurrogate back = surrogate_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.config().k, 4);
  EXPECT_EQ(back.config().h, 2);
  EXPECT_EQ(back.config().p, 2);
  const auto a = s.grid_values();
  const auto b = back.grid_values();
  EXPECT_EQ(std::vector<double>(a.begin(), a.end()), std::vector<double>(b.begin(), b.end()));
  const std::vector<double> theta{0.3, 0.8};
  EXPECT_EQ(eval_surrogate(s, theta), eval_surrogate(back, theta));
}

TEST(Surrogate, RejectsBadDocuments) {
  SurrogateConfig c;
  c.k = 2;
  const BernsteinSurrogate s(c, std::vector<double>{0.0, 0.5, 1.0});
  Json j = surrogate_to_json(s);
  Json wrong_version = j;
  wrong_version["schema_version"] = 99;
  EXPECT_THROW(surrogate_from_json(wrong_version), DomainError);
  Json short_values = j;
  short_values["values"] = Json::array({0.0, 1.0});
  EXPECT_ANY_THROW(surrogate_from_json(short_values));
  Json missing = j;
  missing.erase("config");
  EXPECT_THROW(surrogate_from_json(missing), DomainError);
}

TEST(PublicStringsJson, RegeneratesSameValues) {
  const PublicStrings s(42, 100, std::log(2.0));
  const PublicStrings back = public_strings_from_json(Json::parse(public_strings_to_json(s).dump()));
  ASSERT_EQ(back.size(), 100u);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(s[i], back[i]);
}

TEST(ProjectionJson, RegeneratesSameMatrix) {
  const auto phi = gen_projection(5, 30, ProjectionTag::kRademacher, 11);
  const auto back = projection_from_json(Json::parse(projection_to_json(phi).dump()));
  EXPECT_EQ(back.tag(), ProjectionTag::kRademacher);
  const auto a = phi.data();
  const auto b = back.data();
  EXPECT_EQ(std::vector<double>(a.begin(), a.end()), std::vector<double>(b.begin(), b.end()));
}

TEST(PrivacyJson, RoundTripWithInfinity) {
  PrivacyParams p;
  p.epsilon = kInf;
  p.beta = 0.1;
  p.alpha = 0.2;
  const auto back = privacy_from_json(Json::parse(privacy_to_json(p).dump()));
  EXPECT_EQ(back.epsilon, kInf);
  EXPECT_EQ(back.beta, 0.1);
  ASSERT_TRUE(back.alpha);
  EXPECT_EQ(*back.alpha, 0.2);
  EXPECT_ANY_THROW(privacy_from_json(Json{{"epsilon", -1.0}}));
}

TEST(SummaryJson, RoundTripAnswersIdentically) {
  const auto data = datasets::bit_dataset(2000, 4, 5);
  PrivacyParams privacy;
  privacy.epsilon = 2.0;
  privacy.alpha = 0.2;
  const auto s = release_marginals(data, 4, 2, privacy, 9);
  const auto back = summary_from_json(Json::parse(summary_to_json(s).dump()));
  EXPECT_EQ(back.coeffs, s.coeffs);
  EXPECT_EQ(back.poly_coeffs, s.poly_coeffs);
  EXPECT_EQ(back.family, s.family);
  for (const auto& y : enumerate_queries(4, 2)) {
    EXPECT_EQ(answer_marginal(back, y), answer_marginal(s, y));
  }
}

TEST(CommJson, Fields) {
  CommStats c;
  c.total_bits = 10;
  c.max_player_bits = 1;
  c.messages = 10;
  const Json j = comm_to_json(c);
  EXPECT_EQ(j.at("total_bits").get<std::uint64_t>(), 10u);
  EXPECT_EQ(j.at("max_player_bits").get<std::uint64_t>(), 1u);
  EXPECT_EQ(j.at("messages").get<std::uint64_t>(), 10u);
}

TEST(ConfigText, TomlAndJsonAgree) {
  const Json a = parse_config_text(
      "command = \"erm\"\nn = [100, 200]\nepsilon = 2.0\nseeds = [1, 2]\nk = 4\n");
  const Json b = parse_config_text(
      R"({"command": "erm", "n": [100, 200], "epsilon": 2.0, "seeds": [1, 2], "k": 4})");
  const auto ca = experiment_config_from_json(a);
  const auto cb = experiment_config_from_json(b);
  EXPECT_EQ(ca.n, (std::vector<std::size_t>{100, 200}));
  EXPECT_EQ(ca.epsilon, std::vector<double>{2.0});
  EXPECT_EQ(ca.seeds, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(config_hash(ca), config_hash(cb));
}

TEST(ConfigText, InvalidInputNamesTheSource) {
  try {
    parse_config_text("n = [1,", "bad.toml");
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.toml"), std::string::npos);
  }
  EXPECT_THROW(parse_config_text("{\"n\": ", "bad.json"), DomainError);
}

TEST(ExperimentConfig, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(experiment_config_from_json(parse_config_text("n = 10\nepsilon = 1.0\nseed = 1\nepsilom = 2.0\n")),
               DomainError);
  EXPECT_THROW(experiment_config_from_json(parse_config_text("n = 10\nepsilon = -1.0\nseed = 1\n")),
               DomainError);
  EXPECT_THROW(experiment_config_from_json(parse_config_text("n = 10\nepsilon = 1.0\n")), DomainError);
  EXPECT_THROW(experiment_config_from_json(parse_config_text("command = \"fly\"\nn = 10\nepsilon = 1.0\nseed = 1\n")),
               DomainError);
}

TEST(ExperimentConfig, ToJsonRoundTripAndInfEpsilon) {
  ExperimentConfig c;
  c.command = "release-smooth";
  c.n = {1000};
  c.epsilon = {kInf, 2.0};
  c.seeds = {7};
  c.t = 6;
  c.mu = 0.5;
  const auto back = experiment_config_from_json(Json::parse(c.to_json().dump()));
  EXPECT_EQ(back.epsilon[0], kInf);
  EXPECT_EQ(back.t, 6);
  ASSERT_TRUE(back.mu);
  EXPECT_EQ(*back.mu, 0.5);
  EXPECT_EQ(config_hash(back), config_hash(c));
}

TEST(ExperimentConfig, HashIgnoresOutputAndThreads) {
  ExperimentConfig c;
  c.n = {100};
  c.epsilon = {1.0};
  c.seeds = {1};
  const std::string h = config_hash(c);
  EXPECT_EQ(h.size(), 16u);
  c.output = "elsewhere.csv";
  c.threads = 8;
  EXPECT_EQ(config_hash(c), h);
  c.seeds = {2};
  EXPECT_NE(config_hash(c), h);
}

TEST(ProtocolConfigJson, RoundTrip) {
  ProtocolConfig c;
  c.mechanism = Mechanism::kDiscretized;
  c.privacy.epsilon = 1.5;
  c.surrogate.k = 6;
  c.surrogate.h = 2;
  c.seed = 99;
  c.grid_step = 1.0 / 512;
  const auto back = protocol_config_from_json(Json::parse(protocol_config_to_json(c).dump()));
  EXPECT_EQ(back.mechanism, Mechanism::kDiscretized);
  EXPECT_EQ(back.privacy.epsilon, 1.5);
  EXPECT_EQ(back.surrogate.k, 6);
  EXPECT_EQ(back.seed, 99u);
  ASSERT_TRUE(back.grid_step);
  EXPECT_EQ(*back.grid_step, 1.0 / 512);
}

}  // namespace
}  // namespace polyldp
