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

#ifndef NASHSPEC_EXPERIMENT_HPP_
#define NASHSPEC_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nashspec/baselines.hpp"
#include "nashspec/benchmarks.hpp"
#include "nashspec/epsilon_min.hpp"
#include "nashspec/verification.hpp"

namespace nashspec {

enum class Algorithm { kHighNashSearch, kNvi, kMaqrm };

Algorithm parse_algorithm(const std::string& s);
std::string to_string(Algorithm a);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON schema (every key optional unless noted):
//
//   benchmark        registry name; fills environment and specs
//   environment      {id, horizon, failure, cars, agents, length,
//                     independent_failures, size}
//   specs            per-agent spec sources (required without benchmark)
//   algorithm        highnashsearch | nvi | maqrm
//   algorithms       list form, used by bench
//   seed             base seed; NASHSPEC_SEED overrides it
//   runs             runs per (spec, algorithm) in bench
//   epsilon, delta, samples_per_pair, formula_k, failure_prob
//   edge_budget, welfare_samples, reach_samples, score_samples
//   q_learning       {epsilon, learning_rate, discount}
//   maqrm_steps      MAQRM training budget in sample steps
//   epsmin           {enabled, episodes, eval_samples}
//   timeout_seconds  per run
//   output           path prefix for bench results (.csv and .jsonl)
struct ExperimentConfig {
  std::optional<std::string> benchmark;
  EnvironmentParams environment;
  std::vector<std::string> specs;
  std::vector<Algorithm> algorithms{Algorithm::kHighNashSearch};
  std::uint64_t seed = 0;
  int runs = 1;

  SearchConfig search;
  std::uint64_t maqrm_steps = 2000000;
  QLearningParams maqrm_q{0.15, 0.1, 0.9};
  bool compute_epsmin = true;
  BestResponseConfig epsmin;
  double timeout_seconds = 7200.0;
  std::string output = "results";

  // Environment and specs are skipped when `run_ready` is false, for suite
  // configs that only carry hyperparameters.
  void validate(bool run_ready = true) const;
};

// Parses and validates, applying NASHSPEC_SEED when set. A named benchmark
// fills environment and specs; explicit keys override it.
ExperimentConfig parse_config(const std::string& json_text, bool run_ready = true);
ExperimentConfig load_config(const std::string& path, bool run_ready = true);
ExperimentConfig config_for(const Benchmark& b, const ExperimentConfig& base);

struct RunResult {
  std::string spec;  // benchmark name or "custom"
  Algorithm algorithm = Algorithm::kHighNashSearch;
  std::uint64_t seed = 0;
  bool terminated = true;
  bool found = true;  // false when the search returned no policy
  double welfare = 0.0;
  std::optional<double> epsilon_min;
  std::vector<double> J;
  std::vector<double> gains;
  std::uint64_t steps = 0;  // simulator steps spent by the algorithm
  std::uint64_t enumeration_steps = 0;
  std::uint64_t estimation_steps = 0;
  std::uint64_t verification_steps = 0;
  std::uint64_t epsmin_steps = 0;
  double wall_seconds = 0.0;
  int candidates_checked = 0;
  std::vector<int> coalition;
  std::vector<std::string> notes;
};

struct RunArtifacts {
  RunResult result;
  std::unique_ptr<MarkovGame> game;
  std::vector<CompiledSpec> specs;
  std::shared_ptr<JointPolicy> policy;  // null when none was returned
  std::optional<SearchResult> search;
};

RunArtifacts run_experiment(const ExperimentConfig& config, Algorithm algorithm, std::uint64_t seed);

std::string to_json_line(const RunResult& r);

// JSON form of a candidate path policy. States are written as their
// variable vectors so the file is independent of state id assignment; each
// edge policy keeps only its greedy action per visited key.
std::string save_candidate(const FactoredGame& game, const Candidate& c);
Candidate load_candidate(const FactoredGame& game, const std::vector<CompiledSpec>& specs, const std::string& text);

struct SummaryRow {
  std::string spec;
  Algorithm algorithm;
  double welfare_mean = 0.0, welfare_std = 0.0;
  double epsmin_mean = 0.0, epsmin_std = 0.0;
  int terminated = 0;
  double steps_mean = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<RunResult>& runs);
void write_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

// Runs every (benchmark, algorithm, seed) triple; seeds are base + run index.
// Writes <output>.csv and <output>.jsonl when `write` is set.
std::vector<RunResult> run_benchmark(const std::vector<Benchmark>& suite, const ExperimentConfig& config,
                                     bool write = true, std::ostream* log = nullptr);

}  // namespace nashspec

#endif  // NASHSPEC_EXPERIMENT_HPP_
