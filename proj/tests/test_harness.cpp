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


#include <gtest/gtest.h>

#include <cstdlib>
#include <memory>
#include <sstream>

#include "nashspec/baselines.hpp"
#include "nashspec/benchmarks.hpp"
#include "nashspec/epsilon_min.hpp"
#include "nashspec/experiment.hpp"
#include "nashspec/parser.hpp"
#include "test_util.hpp"

namespace nashspec {
namespace {

std::unique_ptr<testing::TabularGame> push_game(int horizon) {
  std::vector<Distribution> from0{{{0, 1.0}}, {{0, 0.5}, {1, 0.5}}, {{0, 0.5}, {1, 0.5}}, {{1, 1.0}}};
  std::vector<Distribution> from1(4, Distribution{{1, 1.0}});
  auto g = std::make_unique<testing::TabularGame>(std::vector<int>{2, 2},
                                                  std::vector<std::vector<Distribution>>{from0, from1}, horizon);
  g->add_atom("g", {1});
  return g;
}

std::vector<CompiledSpec> compile(const MarkovGame& g, const std::vector<std::string>& texts) {
  std::vector<CompiledSpec> out;
  for (const auto& t : texts) out.emplace_back(parse_spec(t, g.predicates()));
  return out;
}

TEST(EpsilonMinTest, IdlePolicyGainMatchesBestDeviation) {
  auto g = push_game(3);
  auto specs = compile(*g, {"achieve g", "achieve g"});
  ConstantPolicy idle(0);
  BestResponseConfig cfg;
  cfg.episodes = 5000;
  cfg.eval_samples = 20000;
  Rng rng(1);
  EpsilonMinReport r = epsilon_min(*g, idle, specs, cfg, rng);
  // Pushing alone for three steps: 1 - 0.5^3.
  const double best = 0.875;
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(r.J[i], 0.0);
    EXPECT_NEAR(r.J_br[i], best, 0.015);
  }
  EXPECT_NEAR(r.epsilon_min, best, 0.015);
  EXPECT_GT(r.steps, 0u);
}

TEST(EpsilonMinTest, EquilibriumHasNoGain) {
  auto g = push_game(3);
  auto specs = compile(*g, {"achieve g", "achieve g"});
  ConstantPolicy push(3);
  BestResponseConfig cfg;
  cfg.episodes = 2000;
  cfg.eval_samples = 2000;
  Rng rng(2);
  EpsilonMinReport r = epsilon_min(*g, push, specs, cfg, rng);
  EXPECT_EQ(r.epsilon_min, 0.0);
  EXPECT_EQ(r.J[0], 1.0);
}

TEST(EpsilonMinTest, KnownScoresAreReused) {
  auto g = push_game(2);
  auto specs = compile(*g, {"achieve g", "achieve g"});
  ConstantPolicy idle(0);
  BestResponseConfig cfg;
  cfg.episodes = 1000;
  cfg.eval_samples = 1000;
  Rng rng(3);
  std::vector<double> known{0.4, 0.4};
  EpsilonMinReport r = epsilon_min(*g, idle, specs, cfg, rng, &known);
  EXPECT_EQ(r.J, known);
}

TEST(NviTest, SingleAgentEqualsValueIteration) {
  SingleLaneGame g(1, 2, 3, 0.05);
  auto specs = compile(g, {"achieve goal_0"});
  auto prod = std::make_shared<const RmProduct>(rm_product(testing::exact_model(g), g, {specs[0].rm}));
  NviSolution sol = nash_value_iteration(prod, g.horizon());
  // Two successes in three tries.
  const double f = 0.05;
  const double expect = 1.0 - (f * f * f + 3 * (1 - f) * f * f);
  EXPECT_NEAR(sol.values[0][0][0], expect, 1e-12);
  EXPECT_EQ(sol.stages, 4);
  EXPECT_EQ(sol.unsolved, 0u);
}

TEST(NviTest, CooperativePushIsFound) {
  auto g = push_game(2);
  auto specs = compile(*g, {"achieve g", "achieve g"});
  auto prod = std::make_shared<const RmProduct>(rm_product(testing::exact_model(*g), *g, {specs[0].rm, specs[1].rm}));
  auto sol = std::make_shared<const NviSolution>(nash_value_iteration(prod, g->horizon()));
  EXPECT_NEAR(sol->values[0][0][0], 1.0, 1e-12);
  EXPECT_NEAR(sol->values[0][0][1], 1.0, 1e-12);
  EXPECT_FALSE(sol->scoped);
  NviPolicy pol(*g, sol, {specs[0].rm, specs[1].rm});
  Rng rng(4);
  ScoreReport r = estimate_scores(*g, pol, specs, 500, rng);
  EXPECT_DOUBLE_EQ(r.welfare, 1.0);
  EXPECT_EQ(pol.fallbacks(), 0u);
}

TEST(NviTest, ProductNodeReadsLabelBeforeStep) {
  auto g = push_game(2);
  auto specs = compile(*g, {"achieve g", "achieve g"});
  RmProduct prod = rm_product(testing::exact_model(*g), *g, {specs[0].rm, specs[1].rm});
  ASSERT_FALSE(prod.nodes.empty());
  EXPECT_EQ(prod.nodes[0].s, 0);
  EXPECT_EQ(prod.reward[0], (std::vector<double>{0.0, 0.0}));
  auto at_goal = prod.find(1, {specs[0].rm.initial(), specs[1].rm.initial()});
  ASSERT_TRUE(at_goal.has_value());
  EXPECT_EQ(prod.reward[*at_goal], (std::vector<double>{1.0, 1.0}));
}

TEST(MaqrmTest, SingleAgentLearnsToMove) {
  SingleLaneGame g(1, 2, 4, 0.05);
  auto specs = compile(g, {"achieve goal_0"});
  MaqrmConfig cfg;
  cfg.total_steps = 20000;
  Rng rng(5);
  MaqrmResult res = train_maqrm(g, {specs[0].rm}, cfg, rng);
  EXPECT_LE(res.steps, cfg.total_steps);
  EXPECT_GT(res.episodes, 0u);
  MaqrmPolicy pol(g, {res.q[0]}, {specs[0].rm});
  ScoreReport r = estimate_scores(g, pol, specs, 2000, rng);
  EXPECT_GT(r.J[0], 0.98);
}

TEST(MaqrmTest, PackedStatesAreDistinct) {
  EXPECT_NE(pack_rm_states({1, 2}), pack_rm_states({2, 1}));
  EXPECT_EQ(maqrm_key(3, {1, 2}), maqrm_key(3, {1, 2}));
  EXPECT_FALSE(maqrm_key(3, {1, 2}) == maqrm_key(4, {1, 2}));
}

TEST(ConfigTest, UnknownKeysAndValuesRejected) {
  EXPECT_THROW(parse_config(R"({"benchmark": "single_lane/phi1", "sed": 1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"benchmark": "single_lane/phi1", "algorithm": "qlearn"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"benchmark": "single_lane/phi1", "epsilon": 0.01, "delta": 0.02})"), ConfigError);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
  EXPECT_THROW(parse_config(R"({"environment": {"id": "single_lane", "horizon": 5}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"benchmark": "single_lane/phi1", "epsmin": {"episode": 3}})"), ConfigError);
}

TEST(ConfigTest, BenchmarkDefaults) {
  ExperimentConfig c = parse_config(R"({"benchmark": "gridworld/phi1", "seed": 9, "algorithms": ["nvi", "maqrm"]})");
  EXPECT_EQ(c.environment.id, "gridworld");
  EXPECT_EQ(c.specs.size(), 2u);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.algorithms, (std::vector<Algorithm>{Algorithm::kNvi, Algorithm::kMaqrm}));
  EXPECT_EQ(c.search.enumeration.edge_budget, find_benchmark("gridworld/phi1").edge_budget);
}

TEST(ConfigTest, SeedOverrideFromEnvironment) {
  setenv("NASHSPEC_SEED", "1234", 1);
  ExperimentConfig c = parse_config(R"({"benchmark": "single_lane/phi1", "seed": 1})");
  unsetenv("NASHSPEC_SEED");
  EXPECT_EQ(c.seed, 1234u);
  setenv("NASHSPEC_SEED", "abc", 1);
  EXPECT_THROW(parse_config(R"({"benchmark": "single_lane/phi1"})"), ConfigError);
  unsetenv("NASHSPEC_SEED");
}

TEST(ConfigTest, AlgorithmNames) {
  for (Algorithm a : {Algorithm::kHighNashSearch, Algorithm::kNvi, Algorithm::kMaqrm})
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
}

ExperimentConfig small_lane() {
  return parse_config(R"({
    "environment": {"id": "single_lane", "agents": 2, "length": 2, "horizon": 6},
    "specs": ["achieve goal_0", "achieve goal_1"],
    "score_samples": 1000, "welfare_samples": 300, "reach_samples": 300,
    "maqrm_steps": 20000,
    "epsmin": {"episodes": 1000, "eval_samples": 1000}
  })");
}

TEST(ExperimentTest, RunsAreSeedDeterministic) {
  ExperimentConfig c = small_lane();
  for (Algorithm a : {Algorithm::kHighNashSearch, Algorithm::kNvi, Algorithm::kMaqrm}) {
    RunResult r1 = run_experiment(c, a, 3).result;
    RunResult r2 = run_experiment(c, a, 3).result;
    EXPECT_EQ(r1.J, r2.J) << to_string(a);
    EXPECT_EQ(r1.steps, r2.steps) << to_string(a);
    EXPECT_EQ(r1.epsilon_min, r2.epsilon_min) << to_string(a);
    ASSERT_TRUE(r1.terminated);
    double mean = 0.0;
    for (double j : r1.J) mean += j / r1.J.size();
    EXPECT_NEAR(r1.welfare, mean, 1e-12);
    EXPECT_EQ(r1.spec, "custom");
  }
}

TEST(ExperimentTest, HighNashSearchStepSplit) {
  RunResult r = run_experiment(small_lane(), Algorithm::kHighNashSearch, 4).result;
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.steps, r.enumeration_steps + r.estimation_steps + r.verification_steps);
  ASSERT_TRUE(r.epsilon_min.has_value());
  EXPECT_LE(*r.epsilon_min, 0.11);
}

TEST(ExperimentTest, TimeoutMarksRunNotTerminated) {
  ExperimentConfig c = small_lane();
  c.timeout_seconds = 1e-9;
  RunResult r = run_experiment(c, Algorithm::kHighNashSearch, 1).result;
  EXPECT_FALSE(r.terminated);
}

TEST(ExperimentTest, JsonLineHasRequiredFields) {
  RunResult r;
  r.spec = "x/phi1";
  r.J = {0.5, 1.0};
  r.welfare = 0.75;
  r.epsilon_min = 0.01;
  std::string line = to_json_line(r);
  for (const char* key : {"\"spec\"", "\"algorithm\"", "\"seed\"", "\"welfare\"", "\"epsilon_min\"", "\"J\"",
                          "\"steps\"", "\"terminated\""})
    EXPECT_NE(line.find(key), std::string::npos) << key;
  EXPECT_EQ(line.find('\n'), std::string::npos);
}

TEST(SummaryTest, PopulationStdAndTerminatedOnly) {
  std::vector<RunResult> runs(3);
  for (auto& r : runs) r.spec = "a/phi1";
  runs[0].welfare = 1.0;
  runs[0].epsilon_min = 0.0;
  runs[1].welfare = 0.0;
  runs[1].epsilon_min = 0.2;
  runs[2].welfare = 0.5;
  runs[2].terminated = false;
  auto rows = summarize(runs);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_DOUBLE_EQ(rows[0].welfare_mean, 0.5);
  EXPECT_DOUBLE_EQ(rows[0].welfare_std, 0.5);
  EXPECT_DOUBLE_EQ(rows[0].epsmin_mean, 0.1);
  EXPECT_EQ(rows[0].terminated, 2);
}

TEST(SummaryTest, EmptySuiteGivesHeaderOnly) {
  std::ostringstream os;
  write_csv(os, summarize({}));
  EXPECT_EQ(os.str(), "spec,algorithm,welfare_mean,welfare_std,epsmin_mean,epsmin_std,terminated,steps_mean\n");
  EXPECT_TRUE(run_benchmark({}, small_lane(), false).empty());
}

TEST(CandidateIoTest, SaveAndLoadRoundTrip) {
  ExperimentConfig c = small_lane();
  RunArtifacts art = run_experiment(c, Algorithm::kHighNashSearch, 5);
  ASSERT_TRUE(art.search.has_value() && art.search->found);
  const auto& game = dynamic_cast<const FactoredGame&>(*art.game);
  std::string text = save_candidate(game, art.search->candidate);
  Candidate back = load_candidate(game, art.specs, text);
  EXPECT_EQ(back.coalition, art.search->candidate.coalition);
  FsmJointPolicy a(art.search->candidate.policy), b(back.policy);
  Rng r1(6), r2(6);
  EXPECT_EQ(estimate_scores(game, a, art.specs, 500, r1).J, estimate_scores(game, b, art.specs, 500, r2).J);
  EXPECT_THROW(load_candidate(game, art.specs, "{}"), std::exception);
}

}  // namespace
}  // namespace nashspec
