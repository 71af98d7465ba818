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

#include "nashspec/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "nashspec/abstract_graph.hpp"
#include "nashspec/parser.hpp"

namespace nashspec {

using nlohmann::json;

Algorithm parse_algorithm(const std::string& s) {
  if (s == "highnashsearch") return Algorithm::kHighNashSearch;
  if (s == "nvi") return Algorithm::kNvi;
  if (s == "maqrm") return Algorithm::kMaqrm;
  throw ConfigError("unknown algorithm '" + s + "'");
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kHighNashSearch:
      return "highnashsearch";
    case Algorithm::kNvi:
      return "nvi";
    case Algorithm::kMaqrm:
      return "maqrm";
  }
  return "?";
}

void ExperimentConfig::validate(bool run_ready) const {
  const auto& v = search.verify;
  const auto& e = search.enumeration;
  if (run_ready && specs.empty()) throw ConfigError("no specs given");
  if (run_ready && environment.horizon <= 0) throw ConfigError("environment.horizon must be positive");
  if (environment.failure < 0.0 || environment.failure > 1.0) throw ConfigError("failure must be in [0, 1]");
  if (!(v.epsilon > 0.0) || !(v.delta > 0.0)) throw ConfigError("epsilon and delta must be positive");
  if (!(v.delta < v.epsilon)) throw ConfigError("delta must be smaller than epsilon");
  if (v.samples_per_pair == 0 && !v.formula_k) throw ConfigError("samples_per_pair must be positive");
  if (e.edge_budget == 0) throw ConfigError("edge_budget must be positive");
  if (e.welfare_samples <= 0 || e.reach_samples <= 0 || v.score_samples <= 0)
    throw ConfigError("sample counts must be positive");
  if (runs <= 0) throw ConfigError("runs must be positive");
  if (algorithms.empty()) throw ConfigError("no algorithm selected");
  if (!(timeout_seconds > 0.0)) throw ConfigError("timeout_seconds must be positive");
  auto check_q = [](const QLearningParams& q) {
    if (q.epsilon < 0 || q.epsilon > 1 || q.learning_rate <= 0 || q.learning_rate > 1 || q.discount < 0 ||
        q.discount > 1)
      throw ConfigError("Q-learning parameters out of range");
  };
  check_q(e.q);
  check_q(maqrm_q);
  check_q(epsmin.q);
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

QLearningParams read_q(const json& j, QLearningParams q) {
  check_keys(j, {"epsilon", "learning_rate", "discount"}, "q_learning");
  read(j, "epsilon", q.epsilon);
  read(j, "learning_rate", q.learning_rate);
  read(j, "discount", q.discount);
  return q;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, bool run_ready) {
  json j;
  try {
    j = json::parse(json_text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j,
             {"benchmark", "environment", "specs", "algorithm", "algorithms", "seed", "runs", "epsilon", "delta",
              "samples_per_pair", "formula_k", "failure_prob", "edge_budget", "welfare_samples", "reach_samples",
              "score_samples", "q_learning", "maqrm_steps", "maqrm_q_learning", "epsmin", "timeout_seconds",
              "output", "max_candidates"},
             "config");
  ExperimentConfig c;
  try {
    if (j.contains("benchmark")) {
      const auto& b = find_benchmark(j.at("benchmark").get<std::string>());
      c.benchmark = b.name;
      c.environment = b.env;
      c.specs = b.specs;
      c.search.enumeration.edge_budget = b.edge_budget;
    }
    if (j.contains("environment")) {
      const json& e = j.at("environment");
      check_keys(e, {"id", "horizon", "failure", "cars", "agents", "length", "independent_failures", "size"},
                 "environment");
      auto& p = c.environment;
      read(e, "id", p.id);
      read(e, "horizon", p.horizon);
      read(e, "failure", p.failure);
      read(e, "cars", p.cars);
      read(e, "agents", p.agents);
      read(e, "length", p.length);
      read(e, "independent_failures", p.independent_failures);
      read(e, "size", p.size);
    }
    read(j, "specs", c.specs);
    if (j.contains("algorithm")) c.algorithms = {parse_algorithm(j.at("algorithm").get<std::string>())};
    if (j.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& a : j.at("algorithms")) c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    read(j, "seed", c.seed);
    read(j, "runs", c.runs);
    auto& v = c.search.verify;
    auto& en = c.search.enumeration;
    read(j, "epsilon", v.epsilon);
    read(j, "delta", v.delta);
    read(j, "samples_per_pair", v.samples_per_pair);
    read(j, "formula_k", v.formula_k);
    read(j, "failure_prob", v.failure_prob);
    read(j, "score_samples", v.score_samples);
    read(j, "edge_budget", en.edge_budget);
    read(j, "welfare_samples", en.welfare_samples);
    read(j, "reach_samples", en.reach_samples);
    read(j, "max_candidates", c.search.max_candidates);
    if (j.contains("q_learning")) en.q = read_q(j.at("q_learning"), en.q);
    if (j.contains("maqrm_q_learning")) c.maqrm_q = read_q(j.at("maqrm_q_learning"), c.maqrm_q);
    read(j, "maqrm_steps", c.maqrm_steps);
    if (j.contains("epsmin")) {
      const json& e = j.at("epsmin");
      check_keys(e, {"enabled", "episodes", "eval_samples", "q_learning"}, "epsmin");
      read(e, "enabled", c.compute_epsmin);
      read(e, "episodes", c.epsmin.episodes);
      read(e, "eval_samples", c.epsmin.eval_samples);
      if (e.contains("q_learning")) c.epsmin.q = read_q(e.at("q_learning"), c.epsmin.q);
    }
    read(j, "timeout_seconds", c.timeout_seconds);
    read(j, "output", c.output);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (const char* env = std::getenv("NASHSPEC_SEED")) {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("NASHSPEC_SEED is not an unsigned integer");
    }
  }
  c.validate(run_ready);
  return c;
}

ExperimentConfig load_config(const std::string& path, bool run_ready) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), run_ready);
}

ExperimentConfig config_for(const Benchmark& b, const ExperimentConfig& base) {
  ExperimentConfig c = base;
  c.benchmark = b.name;
  c.environment = b.env;
  c.specs = b.specs;
  c.search.enumeration.edge_budget = b.edge_budget;
  return c;
}

namespace {

Rng run_rng(const std::string& name, Algorithm a, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(std::hash<std::string>{}(name)), static_cast<std::uint32_t>(a)};
  return Rng(seq);
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& config, Algorithm algorithm, std::uint64_t seed) {
  config.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  RunArtifacts art;
  RunResult& r = art.result;
  r.spec = config.benchmark.value_or("custom");
  r.algorithm = algorithm;
  r.seed = seed;
  art.game = make_environment(config.environment);
  MarkovGame& game = *art.game;
  if (static_cast<int>(config.specs.size()) != game.num_agents())
    throw ConfigError("expected " + std::to_string(game.num_agents()) + " specs, got " +
                      std::to_string(config.specs.size()));
  for (const auto& src : config.specs) art.specs.emplace_back(parse_spec(src, game.predicates()));
  std::vector<RewardMachine> rms;
  for (const auto& s : art.specs) rms.push_back(s.rm);

  Rng rng = run_rng(r.spec, algorithm, seed);
  switch (algorithm) {
    case Algorithm::kHighNashSearch: {
      SearchConfig sc = config.search;
      sc.cancelled = [&] { return elapsed() > config.timeout_seconds; };
      SearchResult sr = high_nash_search(game, art.specs, sc, rng);
      r.steps = game.samples_drawn();
      r.enumeration_steps = sr.enumeration.sample_steps;
      r.estimation_steps = sr.estimation_steps;
      r.verification_steps = sr.verification_steps;
      r.candidates_checked = sr.candidates_checked;
      r.found = sr.found;
      for (const auto& w : sr.enumeration.warnings)
        if (w.find("not achieved") == std::string::npos) r.notes.push_back(w);
      if (sr.enumeration.edges_skipped > 0)
        r.notes.push_back(std::to_string(sr.enumeration.edges_skipped) + " product edges never achieved");
      if (sr.cancelled) r.terminated = false;
      if (sr.found) {
        r.J = sr.report.J;
        r.coalition = sr.candidate.coalition;
        art.policy = sr.policy;
      }
      art.search = std::move(sr);
      break;
    }
    case Algorithm::kNvi: {
      const auto model = bfs_estimate(game, config.search.verify.samples_per_pair, rng);
      r.estimation_steps = model.total_samples;
      auto product = std::make_shared<RmProduct>(rm_product(model, game, rms));
      auto sol = std::make_shared<NviSolution>(nash_value_iteration(product, game.horizon()));
      r.steps = game.samples_drawn();
      if (sol->scoped) r.notes.push_back("scoped solver");
      if (sol->unsolved)
        r.notes.push_back(std::to_string(sol->unsolved) + " of " + std::to_string(sol->stage_games) +
                          " stage games without a certified equilibrium");
      art.policy = std::make_shared<NviPolicy>(game, sol, rms);
      break;
    }
    case Algorithm::kMaqrm: {
      MaqrmConfig mc;
      mc.total_steps = config.maqrm_steps;
      mc.q = config.maqrm_q;
      auto trained = train_maqrm(game, rms, mc, rng);
      r.steps = trained.steps;
      std::vector<std::shared_ptr<const QTable>> tables(trained.q.begin(), trained.q.end());
      art.policy = std::make_shared<MaqrmPolicy>(game, std::move(tables), rms);
      break;
    }
  }

  if (art.policy && r.J.empty()) {
    auto p = art.policy->clone();
    r.J = estimate_scores(game, *p, art.specs, config.search.verify.score_samples, rng).J;
  }
  if (!r.J.empty()) r.welfare = mean(r.J);
  if (elapsed() > config.timeout_seconds) r.terminated = false;
  if (art.policy && r.terminated && config.compute_epsmin) {
    auto em = epsilon_min(game, *art.policy, art.specs, config.epsmin, rng);
    r.epsilon_min = em.epsilon_min;
    r.gains = em.gain;
    r.epsmin_steps = em.steps;
  }
  r.wall_seconds = elapsed();
  return art;
}

std::string to_json_line(const RunResult& r) {
  json j;
  j["spec"] = r.spec;
  j["algorithm"] = to_string(r.algorithm);
  j["seed"] = r.seed;
  j["terminated"] = r.terminated;
  j["found"] = r.found;
  j["welfare"] = r.welfare;
  j["epsilon_min"] = r.epsilon_min ? json(*r.epsilon_min) : json(nullptr);
  j["J"] = r.J;
  j["gains"] = r.gains;
  j["steps"] = r.steps;
  j["enumeration_steps"] = r.enumeration_steps;
  j["estimation_steps"] = r.estimation_steps;
  j["verification_steps"] = r.verification_steps;
  j["epsmin_steps"] = r.epsmin_steps;
  j["wall_seconds"] = r.wall_seconds;
  j["candidates_checked"] = r.candidates_checked;
  j["coalition"] = r.coalition;
  j["notes"] = r.notes;
  return j.dump();
}

std::string save_candidate(const FactoredGame& game, const Candidate& c) {
  json j;
  j["coalition"] = c.coalition;
  j["path"] = c.path;
  j["welfare"] = c.score.welfare;
  j["J"] = c.score.J;
  json edges = json::array();
  for (const auto& ep : c.edge_policies) {
    json e;
    e["edge"] = ep->edge;
    e["reachable"] = ep->reachable;
    e["achieve_prob"] = ep->achieve_prob;
    json entries = json::array();
    for (const auto& [key, _] : ep->q.index()) {
      const auto s = static_cast<StateId>(key.hi);
      entries.push_back({{"state", game.vars(s)}, {"status", key.lo}, {"action", ep->q.greedy(key)}});
    }
    e["entries"] = std::move(entries);
    edges.push_back(std::move(e));
  }
  j["edge_policies"] = std::move(edges);
  return j.dump();
}

Candidate load_candidate(const FactoredGame& game, const std::vector<CompiledSpec>& specs, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("policy is not valid JSON: ") + e.what());
  }
  try {
    Candidate c;
    c.coalition = j.at("coalition").get<std::vector<int>>();
    c.path = j.at("path").get<std::vector<int>>();
    if (j.contains("welfare")) c.score.welfare = j["welfare"].get<double>();
    if (j.contains("J")) c.score.J = j["J"].get<std::vector<double>>();
    if (!c.coalition.empty()) {
      std::vector<std::shared_ptr<const AbstractGraph>> graphs;
      for (const auto& s : specs) graphs.push_back(std::make_shared<const AbstractGraph>(spec_to_abstract_graph(s.spec)));
      for (int a : c.coalition)
        if (a < 0 || a >= static_cast<int>(specs.size())) throw ConfigError("coalition member out of range");
      c.graph = std::make_shared<const ProductGraph>(product(graphs, c.coalition));
      for (int e : c.path)
        if (e < 0 || e >= static_cast<int>(c.graph->edges.size())) throw ConfigError("path edge out of range");
    }
    for (const auto& e : j.at("edge_policies")) {
      auto ep = std::make_shared<EdgePolicy>();
      ep->edge = e.at("edge").get<int>();
      ep->reachable = e.value("reachable", true);
      ep->achieve_prob = e.value("achieve_prob", 0.0);
      ep->q = QTable(game.num_joint_actions());
      for (const auto& x : e.at("entries")) {
        const StateId s = game.intern(x.at("state").get<std::vector<int>>());
        const int a = x.at("action").get<int>();
        if (a < 0 || a >= game.num_joint_actions()) throw ConfigError("joint action out of range");
        ep->q.row(EdgePolicy::key(s, x.at("status").get<std::uint32_t>()))[a] = 1.0;
      }
      c.edge_policies.push_back(std::move(ep));
    }
    if (c.edge_policies.size() != c.path.size()) throw ConfigError("one edge policy per path edge expected");
    // path_to_policy looks policies up by edge id.
    std::vector<std::shared_ptr<const EdgePolicy>> by_edge(c.graph ? c.graph->edges.size() : 0);
    for (std::size_t k = 0; k < c.path.size(); ++k) {
      if (c.edge_policies[k]->edge != c.path[k]) throw ConfigError("edge policies do not follow the path");
      by_edge[c.path[k]] = c.edge_policies[k];
    }
    c.policy = path_to_policy(game, c.graph, c.path, by_edge);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad policy file: ") + e.what());
  }
}

std::vector<SummaryRow> summarize(const std::vector<RunResult>& runs) {
  std::vector<std::pair<std::string, Algorithm>> order;
  std::map<std::pair<std::string, Algorithm>, std::vector<const RunResult*>> groups;
  for (const auto& r : runs) {
    auto key = std::make_pair(r.spec, r.algorithm);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (const auto& key : order) {
    SummaryRow row;
    row.spec = key.first;
    row.algorithm = key.second;
    std::vector<double> w, e, steps;
    for (const RunResult* r : groups[key]) {
      if (!r->terminated) continue;
      ++row.terminated;
      steps.push_back(static_cast<double>(r->steps));
      if (r->found) w.push_back(r->welfare);
      if (r->epsilon_min) e.push_back(*r->epsilon_min);
    }
    row.welfare_mean = mean(w);
    row.welfare_std = stddev(w);
    row.epsmin_mean = mean(e);
    row.epsmin_std = stddev(e);
    row.steps_mean = mean(steps);
    rows.push_back(row);
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "spec,algorithm,welfare_mean,welfare_std,epsmin_mean,epsmin_std,terminated,steps_mean\n";
  for (const auto& r : rows) {
    os << r.spec << ',' << to_string(r.algorithm) << ',' << r.welfare_mean << ',' << r.welfare_std << ','
       << r.epsmin_mean << ',' << r.epsmin_std << ',' << r.terminated << ',' << r.steps_mean << '\n';
  }
}

std::vector<RunResult> run_benchmark(const std::vector<Benchmark>& suite, const ExperimentConfig& config, bool write,
                                     std::ostream* log) {
  std::vector<RunResult> runs;
  std::ofstream jsonl;
  if (write) {
    jsonl.open(config.output + ".jsonl");
    if (!jsonl) throw ConfigError("cannot write " + config.output + ".jsonl");
  }
  for (const auto& b : suite) {
    ExperimentConfig c = config_for(b, config);
    for (Algorithm a : config.algorithms) {
      for (int k = 0; k < config.runs; ++k) {
        RunResult r = run_experiment(c, a, config.seed + static_cast<std::uint64_t>(k)).result;
        if (write) jsonl << to_json_line(r) << '\n' << std::flush;
        if (log) *log << to_json_line(r) << '\n' << std::flush;
        runs.push_back(std::move(r));
      }
    }
  }
  if (write) {
    std::ofstream csv(config.output + ".csv");
    if (!csv) throw ConfigError("cannot write " + config.output + ".csv");
    write_csv(csv, summarize(runs));
  }
  return runs;
}

}  // namespace nashspec
