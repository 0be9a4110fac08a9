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


#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "polyldp/core/random.hpp"
#include "polyldp/experiment/config.hpp"
#include "polyldp/experiment/datasets.hpp"
#include "polyldp/experiment/oracle.hpp"
#include "polyldp/experiment/sweep.hpp"
#include "polyldp/io/config.hpp"

namespace polyldp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ExperimentConfig small_erm() {
  ExperimentConfig c;
  c.command = "erm";
  c.n = {300, 600};
  c.epsilon = {1.0, 4.0};
  c.seeds = {1, 2, 3};
  c.k = 4;
  return c;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("polyldp_experiment_" + name)).string();
}

TEST(Sweep, RowCountAndConfigOrder) {
  const auto c = small_erm();
  const auto rows = run_sweep(c);
  ASSERT_EQ(rows.size(), 2u * 2u * 3u);
  std::size_t i = 0;
  for (auto n : c.n) {
    for (double e : c.epsilon) {
      for (auto s : c.seeds) {
        EXPECT_EQ(rows[i].n, n);
        EXPECT_EQ(rows[i].epsilon, e);
        EXPECT_EQ(rows[i].seed, s);
        EXPECT_TRUE(rows[i].error.empty()) << rows[i].error;
        ++i;
      }
    }
  }
}

TEST(Sweep, PointEqualsDirectCall) {
  const auto c = small_erm();
  const auto rows = run_sweep(c);
  const auto data = datasets::erm_dataset("linear", 600, 1, 2);
  ProtocolConfig pc;
  pc.privacy.epsilon = 4.0;
  pc.surrogate.k = 4;
  pc.surrogate.h = 2;
  pc.seed = 2;
  const ERMResult r = private_erm(data, losses::by_name("squared", 1), ConstraintSet::unit_box(1), pc);
  const SweepRow& row = rows[3 * 3 + 1];
  ASSERT_EQ(row.n, 600u);
  ASSERT_EQ(row.epsilon, 4.0);
  ASSERT_EQ(row.seed, 2u);
  ASSERT_TRUE(row.err_empirical && r.err_empirical);
  EXPECT_EQ(*row.err_empirical, *r.err_empirical);
  EXPECT_EQ(*row.sup_grid_error, *r.sup_grid_error);
  EXPECT_EQ(*row.total_bits, r.comm.total_bits);
}

TEST(Sweep, ThreadCountDoesNotChangeRows) {
  auto c = small_erm();
  std::ostringstream a, b;
  write_sweep_csv(a, run_sweep(c));
  c.threads = 3;
  write_sweep_csv(b, run_sweep(c));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, FailedPointBecomesErrorRow) {
  ExperimentConfig c;
  c.command = "highdim";
  c.n = {50};
  c.epsilon = {1.0};
  c.seeds = {1};
  c.p = 10;
  c.constraint = "box";
  const auto rows = run_sweep(c);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].error.empty());
  EXPECT_FALSE(rows[0].err_empirical);
  const Json m = sweep_manifest(c, rows, "x.csv");
  EXPECT_EQ(m.at("failed_rows").get<std::size_t>(), 1u);
}

TEST(Sweep, EveryCommandProducesRows) {
  for (const std::string cmd : {"erm-onebit", "release-marginals", "release-smooth", "highdim"}) {
    ExperimentConfig c;
    c.command = cmd;
    c.mechanism = cmd == "erm-onebit" ? Mechanism::kPartitionedOneBit : Mechanism::kFullGrid;
    c.n = {cmd == "erm-onebit" ? std::size_t{20000} : std::size_t{400}};
    c.epsilon = {cmd == "erm-onebit" ? 0.5 : 2.0};
    c.seeds = {4};
    c.k = cmd == "erm-onebit" ? 3 : 0;
    c.p = cmd == "release-marginals" ? 4 : cmd == "highdim" ? 20 : 1;
    if (cmd == "highdim") {
      c.constraint = "l1";
      c.m = 2;
    }
    const auto rows = run_sweep(c);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_TRUE(rows[0].error.empty()) << cmd << ": " << rows[0].error;
    EXPECT_TRUE(rows[0].err_empirical) << cmd;
    EXPECT_TRUE(rows[0].total_bits) << cmd;
  }
}

TEST(Sweep, OneBitRowCountsOneBitPerPlayer) {
  ExperimentConfig c;
  c.command = "erm-onebit";
  c.mechanism = Mechanism::kPartitionedOneBit;
  c.n = {20000};
  c.epsilon = {0.5};
  c.seeds = {1};
  c.k = 3;
  const auto rows = run_sweep(c);
  ASSERT_TRUE(rows[0].error.empty()) << rows[0].error;
  EXPECT_EQ(*rows[0].total_bits, 20000u);
}

TEST(Csv, SchemaHeaderAndColumns) {
  const auto rows = run_sweep(small_erm());
  std::ostringstream out;
  write_sweep_csv(out, rows);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# polyldp sweep csv schema_version=1");
  std::getline(in, line);
  EXPECT_EQ(line, kCsvColumns);
  std::size_t count = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 11) << line;
    ++count;
  }
  EXPECT_EQ(count, rows.size());
}

TEST(Csv, QuotesErrorText) {
  SweepRow r;
  r.error = "bad, \"quoted\"";
  r.mechanism = "full-grid";
  std::ostringstream out;
  write_sweep_csv(out, std::vector<SweepRow>{r});
  EXPECT_NE(out.str().find("\"bad, \"\"quoted\"\"\""), std::string::npos);
}

TEST(Files, ManifestAndByteIdenticalRerun) {
  const auto c = small_erm();
  const std::string a = temp_path("a.csv");
  const std::string b = temp_path("b.csv");
  run_sweep_to_files(c, a);
  run_sweep_to_files(c, b);
  EXPECT_EQ(read_text_file(a), read_text_file(b));
  const Json m = Json::parse(read_text_file(a + ".manifest.json"));
  EXPECT_EQ(m.at("csv").get<std::string>(), a);
  EXPECT_EQ(m.at("rows").get<std::size_t>(), 12u);
  EXPECT_EQ(m.at("failed_rows").get<std::size_t>(), 0u);
  EXPECT_EQ(m.at("config_hash").get<std::string>(), config_hash(c));
  EXPECT_EQ(m.at("schema_version").get<int>(), kCsvSchemaVersion);
  EXPECT_EQ(experiment_config_from_json(m.at("config")).n, c.n);
  for (const auto& p : {a, b}) {
    std::remove(p.c_str());
    std::remove((p + ".manifest.json").c_str());
  }
}

TEST(Files, UnwritablePathFailsBeforeRunning) {
  EXPECT_THROW(run_sweep_to_files(small_erm(), "/nonexistent-dir/out.csv"), DomainError);
}

TEST(Oracle, NeverDrawsNoise) {
  ExperimentConfig c;
  c.n = {1};
  c.epsilon = {1.0};
  c.seeds = {1};
  for (const std::string kind : {"erm", "marginals", "smooth", "highdim"}) {
    ExperimentConfig k = c;
    k.p = kind == "marginals" ? 5 : kind == "highdim" ? 30 : 1;
    if (kind == "highdim") k.constraint = "l1";
    const std::uint64_t before = noise_draws();
    const Json out = run_oracle(kind, k, 500, 3);
    EXPECT_EQ(out.at("noise_draws").get<std::uint64_t>(), 0u) << kind;
    EXPECT_EQ(noise_draws(), before) << kind;
  }
}

TEST(Oracle, ErmMatchesNoiselessRunAnswer) {
  ExperimentConfig c;
  c.n = {1};
  c.epsilon = {1.0};
  c.seeds = {1};
  const Json out = run_oracle("erm", c, 2000, 8);
  const auto data = datasets::erm_dataset("linear", 2000, 1, 8);
  const EmpiricalOracle oracle(data, losses::by_name("squared", 1), ConstraintSet::unit_box(1));
  const auto best = oracle.argmin();
  EXPECT_EQ(io::to_numbers(out.at("theta_star")), std::vector<double>(best.begin(), best.end()));
}

TEST(Oracle, MarginalAnswersAreExactFrequencies) {
  ExperimentConfig c;
  c.p = 3;
  c.k = 1;
  const Json out = run_oracle("marginals", c, 100, 2);
  const auto data = datasets::bit_dataset(100, 3, 2);
  const auto& answers = out.at("answers");
  ASSERT_EQ(answers.size(), enumerate_queries(3, 1).size());
  for (const auto& a : answers) {
    const std::string q = a.at("query").get<std::string>();
    std::vector<std::uint8_t> y(q.begin(), q.end());
    for (auto& b : y) b = b == '1';
    double count = 0.0;
    for (const auto& x : data) {
      bool hit = false;
      for (int j = 0; j < 3; ++j) hit = hit || (y[j] && x[j]);
      count += hit;
    }
    EXPECT_DOUBLE_EQ(io::to_number(a.at("exact")), count / 100.0);
  }
}

TEST(Oracle, Caps) {
  ExperimentConfig c;
  EXPECT_THROW(run_oracle("erm", c, kOracleMaxRecords + 1, 1), ResourceError);
  c.p = kOracleMaxDim + 1;
  EXPECT_THROW(run_oracle("erm", c, 10, 1), ResourceError);
  EXPECT_THROW(run_oracle("nothing", ExperimentConfig{}, 10, 1), DomainError);
}

TEST(Datasets, DeterministicAndInRange) {
  for (const std::string name : {"linear", "logistic", "clusters"}) {
    const auto a = datasets::erm_dataset(name, 200, 2, 5);
    const auto b = datasets::erm_dataset(name, 200, 2, 5);
    ASSERT_EQ(a.size(), 200u);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].x, b[i].x) << name;
      EXPECT_EQ(a[i].y, b[i].y) << name;
    }
  }
  const auto bits = datasets::bit_dataset(100, 6, 1);
  for (const auto& x : bits) {
    ASSERT_EQ(x.size(), 6u);
    for (auto v : x) EXPECT_TRUE(v == 0 || v == 1);
  }
  for (const auto& x : datasets::smooth_dataset(100, 2, 1)) {
    for (double v : x) {
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Datasets, InfiniteEpsilonSweepIsNoiseless) {
  ExperimentConfig c;
  c.command = "release-smooth";
  c.n = {1000};
  c.epsilon = {kInf};
  c.seeds = {1};
  const std::uint64_t before = noise_draws();
  const auto rows = run_sweep(c);
  EXPECT_EQ(noise_draws(), before);
  ASSERT_TRUE(rows[0].err_empirical && rows[0].sup_grid_error);
  EXPECT_EQ(*rows[0].err_empirical, *rows[0].sup_grid_error);
}

}  // namespace
}  // namespace polyldp
