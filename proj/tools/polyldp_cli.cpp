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

// polyldp: command-line driver for the LDP mechanisms, query release,
// high-dimensional ERM, brute-force oracles and seeded sweeps.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "polyldp/polyldp.hpp"

namespace {

using polyldp::ExperimentConfig;
using polyldp::Json;

double parse_epsilon(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw polyldp::DomainError("bad epsilon '" + s + "'");
  return v;
}

// Flags shared by the single-run commands. Values that were given on the
// command line override the --config document.
struct RunFlags {
  std::string config;
  std::string mechanism;
  std::size_t n = 0;
  std::string epsilon;
  std::uint64_t seed = 0;
  int k = -1;
  int h = -1;
  int p = -1;
  double beta = -1.0;
  std::string loss;
  std::string dataset;
  std::string constraint;
  bool regularized = false;
  std::string mu;
  std::size_t eval_n = 0;
  double alpha = -1.0;
  int t = -1;
  std::size_t m = 0;
  std::size_t sparsity = 0;
  unsigned threads = 0;
  std::string out;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, const std::string& name) {
  cmd->add_option("--config", f.config, "TOML or JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "master seed")->required();
  cmd->add_option("-n,--n", f.n, "number of players");
  cmd->add_option("--epsilon", f.epsilon, "privacy budget (a number or inf)");
  cmd->add_option("--p", f.p, "dimension");
  cmd->add_option("--beta", f.beta, "failure probability");
  cmd->add_option("--threads", f.threads, "worker threads");
  cmd->add_option("--out", f.out, "result JSON path (default: stdout)");
  if (name == "erm" || name == "erm-onebit" || name == "highdim") {
    cmd->add_option("--k", f.k, "grid granularity (0: auto)");
    cmd->add_option("--h", f.h, "iterated Bernstein order");
    cmd->add_option("--loss", f.loss, "loss name");
  }
  if (name == "erm") {
    cmd->add_option("--mechanism", f.mechanism, "full-grid | partitioned-one-bit | discretized");
  }
  if (name == "highdim") {
    cmd->add_option("--mechanism", f.mechanism, "low-dimensional mechanism");
    cmd->add_option("--m", f.m, "projection dimension");
    cmd->add_option("--sparsity", f.sparsity, "planted model sparsity");
  }
  if (name == "erm" || name == "erm-onebit" || name == "highdim") {
    cmd->add_option("--constraint", f.constraint, "box | l2 | l1 | simplex");
  }
  if (name == "erm" || name == "erm-onebit") {
    cmd->add_option("--dataset", f.dataset, "linear | logistic | clusters");
    cmd->add_flag("--regularized", f.regularized, "add the ridge term (convex losses)");
    cmd->add_option("--mu", f.mu, "ridge weight or auto");
    cmd->add_option("--eval-n", f.eval_n, "fresh samples for the population excess risk");
  }
  if (name == "release-marginals") {
    cmd->add_option("--k", f.k, "disjunction width");
    cmd->add_option("--alpha", f.alpha, "target accuracy (gamma = alpha/2)");
  }
  if (name == "release-smooth") cmd->add_option("--t", f.t, "basis degree per axis");
}

ExperimentConfig resolve(const RunFlags& f, const std::string& command) {
  Json j = f.config.empty() ? Json::object() : polyldp::load_config(f.config);
  j["command"] = command;
  j["seeds"] = Json::array({f.seed});
  j.erase("seed");
  if (f.n) j["n"] = f.n;
  if (!f.epsilon.empty()) j["epsilon"] = polyldp::io::number(parse_epsilon(f.epsilon));
  if (!f.mechanism.empty()) j["mechanism"] = f.mechanism;
  if (f.k >= 0) j["k"] = f.k;
  if (f.h >= 0) j["h"] = f.h;
  if (f.p >= 0) j["p"] = f.p;
  if (f.beta >= 0) j["beta"] = f.beta;
  if (!f.loss.empty()) j["loss"] = f.loss;
  if (!f.dataset.empty()) j["dataset"] = f.dataset;
  if (!f.constraint.empty()) j["constraint"] = f.constraint;
  if (f.regularized) j["regularized"] = true;
  if (!f.mu.empty()) j["mu"] = f.mu == "auto" ? Json("auto") : Json(std::stod(f.mu));
  if (f.eval_n) j["eval_n"] = f.eval_n;
  if (f.alpha >= 0) j["alpha"] = f.alpha;
  if (f.t >= 0) j["t"] = f.t;
  if (f.m) j["m"] = f.m;
  if (f.sparsity) j["sparsity"] = f.sparsity;
  if (f.threads) j["threads"] = f.threads;
  if (!j.contains("n")) throw polyldp::DomainError("--n is required");
  if (!j.contains("epsilon")) throw polyldp::DomainError("--epsilon is required");
  if (command == "highdim" && !j.contains("constraint")) j["constraint"] = "l1";
  ExperimentConfig c = polyldp::experiment_config_from_json(j);
  if (c.n.size() != 1 || c.epsilon.size() != 1) {
    throw polyldp::DomainError(command + ": a single n and epsilon are required (use sweep)");
  }
  return c;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw polyldp::DomainError("cannot write '" + path + "'");
  out << text;
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// CSV rows "x_1,...,x_p,y".
std::vector<polyldp::Record> read_records(const std::string& path, int p) {
  std::ifstream in(path);
  if (!in) throw polyldp::DomainError("cannot open '" + path + "'");
  std::vector<polyldp::Record> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line, ',');
    if (cells.size() != static_cast<std::size_t>(p) + 1) {
      throw polyldp::DomainError(path + ":" + std::to_string(lineno) + ": expected " +
                                 std::to_string(p + 1) + " values");
    }
    polyldp::Record r;
    for (int j = 0; j < p; ++j) r.x.push_back(std::stod(cells[j]));
    r.y = std::stod(cells[p]);
    out.push_back(std::move(r));
  }
  if (out.empty()) throw polyldp::DomainError(path + ": no records");
  return out;
}

polyldp::BitVector parse_bits(const std::string& s, std::size_t lineno) {
  polyldp::BitVector y;
  for (char ch : s) {
    if (ch != '0' && ch != '1') {
      throw polyldp::DomainError("line " + std::to_string(lineno) + ": '" + s +
                                 "' is not a bit vector");
    }
    y.push_back(ch == '1' ? 1 : 0);
  }
  return y;
}

// "gaussian center=0.1,0.2 sigma=0.5", "constant c=1" or "coordinate j=0".
polyldp::SmoothQuery parse_smooth_query(const std::string& line, int p, std::size_t lineno) {
  std::istringstream in(line);
  std::string name;
  in >> name;
  std::map<std::string, std::string> kv;
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) {
      throw polyldp::DomainError("line " + std::to_string(lineno) + ": expected key=value, got '" +
                                 tok + "'");
    }
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  auto need = [&](const char* key) {
    if (!kv.count(key)) {
      throw polyldp::DomainError("line " + std::to_string(lineno) + ": missing " + key);
    }
    return kv[key];
  };
  if (name == "gaussian") {
    std::vector<double> center;
    for (const auto& c : split(need("center"), ',')) center.push_back(std::stod(c));
    if (center.size() == 1 && p > 1) center.assign(p, center[0]);
    return polyldp::smooth_queries::gaussian_kernel(center, std::stod(need("sigma")));
  }
  if (name == "constant") return polyldp::smooth_queries::constant(p, std::stod(need("c")));
  if (name == "coordinate") return polyldp::smooth_queries::coordinate(p, std::stoi(need("j")));
  throw polyldp::DomainError("line " + std::to_string(lineno) + ": unknown query '" + name + "'");
}

std::string fmt(double v) { return polyldp::detail::format_double(v); }

int cmd_erm(const RunFlags& f, const std::string& command, const std::string& input,
            const std::string& transcript_path, const std::string& transcript_json,
            const std::string& surrogate_out, const std::string& publics_out) {
  const ExperimentConfig c = resolve(f, command);
  const std::uint64_t seed = c.seeds.front();
  const double eps = c.epsilon.front();
  std::vector<polyldp::Record> data;
  std::string name;
  if (input.empty()) {
    name = c.dataset.empty() ? polyldp::datasets::default_erm_dataset(c.loss) : c.dataset;
    data = polyldp::datasets::erm_dataset(name, c.n.front(), c.p, seed);
  } else {
    data = read_records(input, c.p);
  }
  const polyldp::ERMResult r = polyldp::detail::erm_on_data(c, data, name, eps, seed);
  Json out = polyldp::erm_result_to_json(r);
  out["dataset"] = input.empty() ? name : input;
  out["loss"] = c.loss;
  out["constraint"] = c.constraint;
  write_json(f.out, out);
  if (!transcript_path.empty()) {
    const auto bytes = polyldp::encode_transcript(*r.transcript);
    write_text(transcript_path, std::string(bytes.begin(), bytes.end()));
  }
  if (!transcript_json.empty()) write_json(transcript_json, polyldp::transcript_to_json(*r.transcript));
  if (!surrogate_out.empty()) write_json(surrogate_out, polyldp::surrogate_to_json(*r.surrogate));
  if (!publics_out.empty()) {
    if (r.mechanism != "partitioned-one-bit") {
      throw polyldp::DomainError("--public-strings-out needs the one-bit mechanism");
    }
    write_json(publics_out, polyldp::public_strings_to_json(polyldp::PublicStrings(seed, data.size(), eps)));
  }
  return 0;
}

int cmd_release(const RunFlags& f, const std::string& command, const std::string& input,
                const std::string& summary_out) {
  const ExperimentConfig c = resolve(f, command);
  const std::uint64_t seed = c.seeds.front();
  polyldp::PrivacyParams privacy{.epsilon = c.epsilon.front(), .beta = c.beta, .alpha = std::nullopt};
  Json out;
  if (input.empty()) {
    const polyldp::PointResult r = polyldp::run_point(c, c.n.front(), c.epsilon.front(), seed);
    if (!r.row.error.empty()) throw polyldp::Error(r.row.error);
    out = r.detail;
  } else if (command == "release-marginals") {
    std::ifstream in(input);
    if (!in) throw polyldp::DomainError("cannot open '" + input + "'");
    std::vector<polyldp::BitVector> data;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      line = trim(line);
      if (!line.empty() && line[0] != '#') data.push_back(parse_bits(line, lineno));
    }
    privacy.alpha = c.alpha;
    out["summary"] = polyldp::summary_to_json(polyldp::release_marginals(
        data, c.p, c.k > 0 ? c.k : 2, privacy, seed, c.threads));
  } else {
    std::ifstream in(input);
    if (!in) throw polyldp::DomainError("cannot open '" + input + "'");
    std::vector<std::vector<double>> data;
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      std::vector<double> x;
      for (const auto& cell : split(line, ',')) x.push_back(std::stod(cell));
      data.push_back(std::move(x));
    }
    out["summary"] = polyldp::summary_to_json(polyldp::release_smooth(data, c.t, privacy, seed, c.threads));
  }
  write_json(f.out, out);
  if (!summary_out.empty()) write_json(summary_out, out.at("summary"));
  return 0;
}

int cmd_answer(const std::string& summary_path, const std::string& queries_path,
               const std::string& out_path) {
  const auto summary = polyldp::summary_from_json(Json::parse(polyldp::read_text_file(summary_path)));
  std::ifstream in(queries_path);
  if (!in) throw polyldp::DomainError("cannot open '" + queries_path + "'");
  std::ostringstream out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    double a = 0.0;
    if (summary.family == polyldp::SummaryFamily::kChebyshevMarginal) {
      a = polyldp::answer_marginal(summary, parse_bits(line, lineno));
    } else {
      a = polyldp::answer_smooth(summary, parse_smooth_query(line, summary.p, lineno));
    }
    out << line << '\t' << fmt(a) << '\n';
  }
  write_text(out_path, out.str());
  return 0;
}

int cmd_highdim(const RunFlags& f, const std::string& projection_out) {
  const ExperimentConfig c = resolve(f, "highdim");
  const polyldp::PointResult r = polyldp::run_point(c, c.n.front(), c.epsilon.front(), c.seeds.front());
  if (!r.row.error.empty()) throw polyldp::Error(r.row.error);
  write_json(f.out, r.detail);
  if (!projection_out.empty()) write_json(projection_out, r.detail.at("projection"));
  return 0;
}

int cmd_oracle(const RunFlags& f, const std::string& kind) {
  Json j = f.config.empty() ? Json::object() : polyldp::load_config(f.config);
  RunFlags g = f;
  if (g.epsilon.empty() && !j.contains("epsilon")) g.epsilon = "inf";
  const std::string command = kind == "erm"         ? "erm"
                              : kind == "marginals" ? "release-marginals"
                              : kind == "smooth"    ? "release-smooth"
                                                    : "highdim";
  const ExperimentConfig c = resolve(g, command);
  write_json(f.out, polyldp::run_oracle(kind, c, c.n.front(), c.seeds.front()));
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override, unsigned threads) {
  ExperimentConfig c = polyldp::load_experiment_config(config_path);
  if (!out_override.empty()) c.output = out_override;
  if (threads) c.threads = threads;
  if (c.output.empty()) throw polyldp::DomainError("sweep: no output path (set output or --out)");
  const auto rows = polyldp::run_sweep_to_files(c, c.output);
  std::size_t failed = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      ++failed;
      std::cerr << "run failed (n=" << r.n << ", epsilon=" << fmt(r.epsilon) << ", seed=" << r.seed
                << "): " << r.error << "\n";
    }
  }
  std::cerr << rows.size() << " runs, " << failed << " failed; wrote " << c.output << "\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyldp: non-interactive LDP ERM, query release and sweeps"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", polyldp::kLibraryVersion);

  RunFlags erm_f, onebit_f, marg_f, smooth_f, hd_f, oracle_f;
  std::string erm_input, erm_transcript, erm_transcript_json, erm_surrogate, erm_publics;
  std::string ob_input, ob_transcript, ob_transcript_json, ob_surrogate, ob_publics;
  std::string marg_input, marg_summary, smooth_input, smooth_summary;
  std::string answer_summary, answer_queries, answer_out;
  std::string hd_projection, oracle_kind = "erm";
  std::string sweep_config, sweep_out;
  unsigned sweep_threads = 0;

  auto* erm = app.add_subcommand("erm", "private ERM with a Bernstein-surrogate mechanism");
  add_run_flags(erm, erm_f, "erm");
  erm->add_option("--input", erm_input, "CSV records x_1..x_p,y (default: synthetic dataset)");
  erm->add_option("--transcript", erm_transcript, "write the binary transcript");
  erm->add_option("--transcript-json", erm_transcript_json, "write the JSON transcript");
  erm->add_option("--surrogate-out", erm_surrogate, "write the surrogate JSON");

  auto* onebit = app.add_subcommand("erm-onebit", "private ERM with one bit per player");
  add_run_flags(onebit, onebit_f, "erm-onebit");
  onebit->add_option("--input", ob_input, "CSV records x_1..x_p,y");
  onebit->add_option("--transcript", ob_transcript, "write the binary transcript");
  onebit->add_option("--transcript-json", ob_transcript_json, "write the JSON transcript");
  onebit->add_option("--surrogate-out", ob_surrogate, "write the surrogate JSON");
  onebit->add_option("--public-strings-out", ob_publics, "write the public-string spec");

  auto* marg = app.add_subcommand("release-marginals", "release k-way disjunction answers");
  add_run_flags(marg, marg_f, "release-marginals");
  marg->add_option("--input", marg_input, "bit-vector records, one per line");
  marg->add_option("--summary-out", marg_summary, "write the summary JSON");

  auto* smooth = app.add_subcommand("release-smooth", "release smooth-query answers");
  add_run_flags(smooth, smooth_f, "release-smooth");
  smooth->add_option("--input", smooth_input, "CSV points in [-1,1]^p");
  smooth->add_option("--summary-out", smooth_summary, "write the summary JSON");

  auto* answer = app.add_subcommand("answer", "answer queries from a released summary");
  answer->add_option("--summary", answer_summary, "summary JSON")->required()->check(CLI::ExistingFile);
  answer->add_option("--queries", answer_queries, "one bit vector or function spec per line")
      ->required()
      ->check(CLI::ExistingFile);
  answer->add_option("--out", answer_out, "output path (default: stdout)");

  auto* hd = app.add_subcommand("highdim", "dimension-reduced ERM on a planted sparse GLM");
  add_run_flags(hd, hd_f, "highdim");
  hd->add_option("--projection-out", hd_projection, "write the projection spec");

  auto* oracle = app.add_subcommand("oracle", "exact non-private answers");
  add_run_flags(oracle, oracle_f, "erm");
  oracle->add_option("--kind", oracle_kind, "erm | marginals | smooth | highdim");
  oracle->add_option("--t", oracle_f.t, "smooth basis degree");
  oracle->add_option("--sparsity", oracle_f.sparsity, "highdim planted sparsity");

  auto* sweep = app.add_subcommand("sweep", "seeded sweep to CSV plus manifest");
  sweep->add_option("--config", sweep_config, "TOML or JSON experiment config")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_out, "CSV path (overrides the config)");
  sweep->add_option("--threads", sweep_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (erm->parsed()) {
      return cmd_erm(erm_f, "erm", erm_input, erm_transcript, erm_transcript_json, erm_surrogate,
                     erm_publics);
    }
    if (onebit->parsed()) {
      return cmd_erm(onebit_f, "erm-onebit", ob_input, ob_transcript, ob_transcript_json,
                     ob_surrogate, ob_publics);
    }
    if (marg->parsed()) return cmd_release(marg_f, "release-marginals", marg_input, marg_summary);
    if (smooth->parsed()) return cmd_release(smooth_f, "release-smooth", smooth_input, smooth_summary);
    if (answer->parsed()) return cmd_answer(answer_summary, answer_queries, answer_out);
    if (hd->parsed()) return cmd_highdim(hd_f, hd_projection);
    if (oracle->parsed()) return cmd_oracle(oracle_f, oracle_kind);
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out, sweep_threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
