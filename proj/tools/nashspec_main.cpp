// Copyright 2026 The nashspec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command line front end: compile-spec, search, verify, run, bench, list.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nashspec/abstract_graph.hpp"
#include "nashspec/automata.hpp"
#include "nashspec/benchmarks.hpp"
#include "nashspec/experiment.hpp"
#include "nashspec/parser.hpp"
#include "nashspec/verification.hpp"

using namespace nashspec;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// One spec per non-empty line; '#' starts a comment.
std::vector<std::string> spec_lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(line);
  }
  return out;
}

class FreeAtoms : public FactoredGame {
 public:
  explicit FreeAtoms(const std::vector<std::string>& atoms) {
    set_actions({1});
    for (std::size_t k = 0; k < atoms.size(); ++k)
      predicates_.add(atoms[k], [this, k](StateId s) { return (vars(s)[0] >> k) & 1; });
    set_initial(intern({0}));
  }

 protected:
  std::vector<std::pair<Vars, double>> successors(const Vars& x, const std::vector<int>&) const override {
    return {{x, 1.0}};
  }
};

int compile_spec(const std::string& file, const std::string& benchmark, const std::string& config_path,
                 const std::string& atoms, const std::vector<int>& coalition, bool no_automaton) {
  std::unique_ptr<MarkovGame> game;
  if (!benchmark.empty()) {
    game = make_environment(find_benchmark(benchmark).env);
  } else if (!config_path.empty()) {
    game = make_environment(load_config(config_path, false).environment);
  } else {
    std::vector<std::string> names;
    std::stringstream ss(atoms);
    std::string a;
    while (std::getline(ss, a, ','))
      if (!a.empty()) names.push_back(a);
    if (names.empty()) throw std::runtime_error("give --benchmark, --config or --atoms for the predicate names");
    game = std::make_unique<FreeAtoms>(names);
  }
  const auto& table = game->predicates();
  auto lines = spec_lines(slurp(file));
  std::vector<std::shared_ptr<const AbstractGraph>> graphs;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    Spec phi = parse_spec(lines[i], table);
    std::cout << "# spec " << i << ": " << to_string(phi, &table) << "\n";
    if (!no_automaton) {
      auto dfa = spec_to_dfa(phi);
      std::cout << "# automaton\n" << automaton_to_json(dfa, &table) << "\n";
    }
    auto g = std::make_shared<const AbstractGraph>(spec_to_abstract_graph(phi));
    std::cout << "# abstract graph\n" << to_text(*g, &table);
    graphs.push_back(g);
  }
  if (!coalition.empty()) {
    for (int a : coalition)
      if (a < 0 || a >= static_cast<int>(graphs.size())) throw std::runtime_error("coalition member out of range");
    auto pg = product(graphs, coalition);
    std::cout << "# product graph\n" << to_text(pg, &table);
  }
  return 0;
}

json candidate_line(const Candidate& c, int rank, int verdict) {
  json j;
  j["rank"] = rank;
  j["coalition"] = c.coalition;
  j["path"] = c.path;
  j["welfare"] = c.score.welfare;
  j["J"] = c.score.J;
  j["verdict"] = verdict < 0 ? "unchecked" : (verdict ? "accepted" : "rejected");
  return j;
}

int search(const std::string& config_path, const std::string& report, const std::string& policy_out) {
  ExperimentConfig cfg = load_config(config_path);
  auto art = run_experiment(cfg, Algorithm::kHighNashSearch, cfg.seed);
  const auto& sr = *art.search;
  std::ofstream rep;
  if (!report.empty()) rep.open(report);
  std::ostream& out = report.empty() ? std::cout : rep;
  for (std::size_t k = 0; k < sr.ranked.size(); ++k)
    out << candidate_line(sr.ranked[k], static_cast<int>(k), sr.verdicts[k]).dump() << "\n";
  std::cout << to_json_line(art.result) << "\n";
  if (!policy_out.empty()) {
    if (!sr.found) throw std::runtime_error("no equilibrium found; nothing to write");
    auto* fg = dynamic_cast<const FactoredGame*>(art.game.get());
    std::ofstream po(policy_out);
    po << save_candidate(*fg, sr.candidate) << "\n";
  }
  return sr.found ? 0 : 2;
}

int verify(const std::string& config_path, const std::string& policy_path) {
  ExperimentConfig cfg = load_config(config_path);
  auto game = make_environment(cfg.environment);
  std::vector<CompiledSpec> specs;
  for (const auto& s : cfg.specs) specs.emplace_back(parse_spec(s, game->predicates()));
  if (static_cast<int>(specs.size()) != game->num_agents()) throw std::runtime_error("one spec per agent expected");
  auto* fg = dynamic_cast<const FactoredGame*>(game.get());
  Candidate c = load_candidate(*fg, specs, slurp(policy_path));
  Rng rng(cfg.seed);
  auto model = bfs_estimate(*game, cfg.search.verify.samples_per_pair, rng);
  auto report = verify_nash(*game, c.policy, specs, model, cfg.search.verify, rng);
  std::cout << "agent  J        dev      margin\n";
  for (std::size_t i = 0; i < report.J.size(); ++i) {
    std::cout << std::left << std::setw(7) << i << std::fixed << std::setprecision(4) << std::setw(9)
              << report.J[i];
    if (i < report.deviation.size())
      std::cout << std::setw(9) << report.deviation[i] << report.margin[i];
    else
      std::cout << "(not checked)";
    std::cout << "\n";
  }
  std::cout << "verdict: " << (report.is_nash ? "epsilon-Nash" : "not verified") << "\n";
  return report.is_nash ? 0 : 2;
}

int run(const std::string& config_path) {
  ExperimentConfig cfg = load_config(config_path);
  int code = 0;
  for (Algorithm a : cfg.algorithms) {
    for (int k = 0; k < cfg.runs; ++k) {
      auto art = run_experiment(cfg, a, cfg.seed + static_cast<std::uint64_t>(k));
      std::cout << to_json_line(art.result) << std::endl;
    }
  }
  return code;
}

int bench(const std::string& suite, const std::string& config_path) {
  ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path, false);
  if (config_path.empty()) {
    if (const char* env = std::getenv("NASHSPEC_SEED")) cfg.seed = std::stoull(env);
  }
  auto runs = run_benchmark(resolve_suite(suite), cfg, true, &std::cerr);
  write_csv(std::cout, summarize(runs));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium search for multi-agent specifications"};
  app.require_subcommand(1);

  std::string file, benchmark, config, atoms, report, policy_out, policy, suite;
  std::vector<int> coalition;
  bool no_automaton = false;

  auto* cs = app.add_subcommand("compile-spec", "Compile specs (one per line) and print automata and graphs");
  cs->add_option("file", file, "spec file")->required();
  cs->add_option("--benchmark", benchmark, "take predicates from a built-in benchmark environment");
  cs->add_option("--config", config, "take predicates from the environment of a config file");
  cs->add_option("--atoms", atoms, "comma-separated free atom names");
  cs->add_option("--product", coalition, "also print the product graph of these agents");
  cs->add_flag("--no-automaton", no_automaton, "skip the automaton dump");

  auto* se = app.add_subcommand("search", "Run the equilibrium search and print the ranked candidates");
  se->add_option("config", config, "experiment config")->required();
  se->add_option("--report", report, "write the candidate JSON lines here instead of stdout");
  se->add_option("--policy-out", policy_out, "write the accepted candidate policy");

  auto* ve = app.add_subcommand("verify", "Verify a saved candidate policy");
  ve->add_option("config", config, "experiment config")->required();
  ve->add_option("policy", policy, "policy file written by search")->required();

  auto* ru = app.add_subcommand("run", "Run the configured algorithm(s) and print one JSON line per run");
  ru->add_option("config", config, "experiment config")->required();

  auto* be = app.add_subcommand("bench", "Run a benchmark suite and print the summary CSV");
  be->add_option("suite", suite, "all, an environment id, or comma-separated benchmark names")->required();
  be->add_option("config", config, "hyperparameter config");

  auto* li = app.add_subcommand("list", "List the built-in benchmarks");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*cs) return compile_spec(file, benchmark, config, atoms, coalition, no_automaton);
    if (*se) return search(config, report, policy_out);
    if (*ve) return verify(config, policy);
    if (*ru) return run(config);
    if (*be) return bench(suite, config);
    if (*li) {
      for (const auto& b : benchmark_registry()) {
        std::cout << b.name << "  H=" << b.env.horizon;
        for (std::size_t i = 0; i < b.specs.size(); ++i) std::cout << "\n  " << i << ": " << b.specs[i];
        std::cout << "\n";
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
