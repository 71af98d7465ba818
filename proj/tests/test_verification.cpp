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

#include <cmath>
#include <memory>

#include "nashspec/markov_game.hpp"
#include "nashspec/parser.hpp"
#include "nashspec/policy.hpp"
#include "nashspec/verification.hpp"
#include "test_util.hpp"

namespace nashspec {
namespace {

class FixedPolicy : public FiniteStatePolicy {
 public:
  explicit FixedPolicy(int joint) : joint_(joint) {}
  int initial_memory() const override { return 0; }
  int action(StateId, int) const override { return joint_; }
  int update(StateId, int, int) const override { return 0; }
  int num_memory_states() const override { return 1; }

 private:
  int joint_;
};

// Two states, two agents, two actions each. Action 1 pushes toward state 1:
// both pushing gets there surely, one pusher half the time. State 1 absorbs.
std::unique_ptr<testing::TabularGame> push_game(int horizon) {
  std::vector<Distribution> from0{{{0, 1.0}}, {{0, 0.5}, {1, 0.5}}, {{0, 0.5}, {1, 0.5}}, {{1, 1.0}}};
  std::vector<Distribution> from1(4, Distribution{{1, 1.0}});
  auto g = std::make_unique<testing::TabularGame>(std::vector<int>{2, 2}, std::vector<std::vector<Distribution>>{from0, from1},
                                                  horizon);
  g->add_atom("g", {1});
  return g;
}

EstimatedModel exact_model(const MarkovGame& g, int num_states) {
  EstimatedModel m;
  m.num_joint = g.num_joint_actions();
  for (int s = 0; s < num_states; ++s) {
    m.index[s] = s;
    m.states.push_back(s);
    std::vector<Distribution> rows;
    for (int a = 0; a < m.num_joint; ++a) rows.push_back(g.transition(s, a));
    m.transitions.push_back(rows);
  }
  return m;
}

TEST(SampleCountTest, FormulaPinned) {
  // 2 * 4 / 0.25 * ln(2 * 4 / 0.5) = 32 ln 16 = 88.72
  EXPECT_EQ(bfs_sample_count(2, 1, 1, 1, 1, 0.5, 0.5), 89u);
  // Defaults of the formula mode on a 10-state toy: 2*100*4*9*16/1e-4*ln(2*100*4/0.1).
  const double k = 2.0 * 100 * 4 * 9 * 16 / 1e-4 * std::log(8000.0);
  EXPECT_EQ(bfs_sample_count(10, 2, 3, 2, 4, 0.01, 0.1), static_cast<std::uint64_t>(std::ceil(k)));
  EXPECT_THROW(bfs_sample_count(2, 1, 1, 1, 1, 0.0, 0.5), std::invalid_argument);
  EXPECT_THROW(bfs_sample_count(1e6, 1e3, 1e3, 100, 10, 1e-3, 0.1), std::overflow_error);
}

TEST(BfsEstimateTest, DeterministicGameIsExact) {
  SingleLaneGame g(2, 3, 6, 0.0);
  Rng rng(1);
  EstimatedModel m = bfs_estimate(g, 50, rng);
  EXPECT_EQ(m.states.size(), 16u);
  EXPECT_EQ(m.states[0], g.initial_state());
  for (const auto& rows : m.transitions)
    for (const auto& d : rows) {
      ASSERT_EQ(d.size(), 1u);
      EXPECT_EQ(d[0].second, 1.0);
    }
  EXPECT_EQ(m.total_samples, 16u * 4u * 50u);
}

TEST(BfsEstimateTest, StochasticGameIsClose) {
  auto g = push_game(3);
  Rng rng(2);
  EstimatedModel m = bfs_estimate(*g, 20000, rng);
  ASSERT_EQ(m.states.size(), 2u);
  for (int a = 1; a <= 2; ++a)
    for (const auto& [s, p] : m.next(0, a)) EXPECT_NEAR(p, 0.5, 0.015);
}

TEST(BfsEstimateTest, StateCap) {
  SingleLaneGame g(3, 4, 6);
  Rng rng(3);
  EXPECT_THROW(bfs_estimate(g, 10, rng, 5), StateBudgetError);
}

TEST(PunishmentGameTest, HandBuiltTensor) {
  auto g = push_game(2);
  EstimatedModel m = exact_model(*g, 2);
  RewardMachine rm = spec_to_rm(parse_spec("achieve g", g->predicates()));
  FixedPolicy idle(0);
  PunishmentGame pg = construct_game(m, *g, 0, rm, idle);
  EXPECT_EQ(pg.stages, 3);
  EXPECT_EQ(pg.dev_actions, 2);
  EXPECT_EQ(pg.pun_actions, 2);
  ASSERT_EQ(pg.nodes.size(), 4u);

  const int q0 = rm.initial();
  const int q1 = rm.next(1, q0);
  const int start = *pg.find(0, 0, q0, false);
  const int a = *pg.find(1, 0, q0, true);  // memory is collapsed after a deviation
  const int b = *pg.find(0, -1, q0, true);
  const int c = *pg.find(1, -1, q1, true);
  EXPECT_EQ(start, 0);
  EXPECT_EQ(pg.reward[start], 0.0);
  EXPECT_EQ(pg.reward[a], 1.0);
  EXPECT_EQ(pg.reward[b], 0.0);
  EXPECT_EQ(pg.reward[c], 0.0);

  using Row = std::vector<std::pair<int, double>>;
  auto sorted = [](Row r) {
    std::sort(r.begin(), r.end());
    return r;
  };
  // Before a deviation the rows depend only on the deviator.
  ASSERT_EQ(pg.trans[start].size(), 2u);
  EXPECT_EQ(sorted(pg.trans[start][0]), (Row{{start, 1.0}}));
  EXPECT_EQ(sorted(pg.trans[start][1]), sorted(Row{{a, 0.5}, {b, 0.5}}));
  // After it, rows are indexed by a_dev * pun_actions + a_pun.
  ASSERT_EQ(pg.trans[b].size(), 4u);
  EXPECT_EQ(sorted(pg.trans[b][0]), (Row{{b, 1.0}}));
  EXPECT_EQ(sorted(pg.trans[b][1]), sorted(Row{{a, 0.5}, {b, 0.5}}));
  EXPECT_EQ(sorted(pg.trans[b][2]), sorted(Row{{a, 0.5}, {b, 0.5}}));
  EXPECT_EQ(sorted(pg.trans[b][3]), (Row{{a, 1.0}}));
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(pg.trans[a][k], (Row{{c, 1.0}}));
    EXPECT_EQ(pg.trans[c][k], (Row{{c, 1.0}}));
  }

  auto sol = punishment_value(std::make_shared<const PunishmentGame>(pg));
  // Deviate at once: half the time done, otherwise one more try against a
  // punisher who holds still.
  EXPECT_NEAR(sol.value, 0.75, 1e-12);
  EXPECT_NEAR(sol.values[1][b], 0.5, 1e-12);
  ASSERT_EQ(sol.min_policy[1][b].size(), 2u);
  EXPECT_NEAR(sol.min_policy[1][b][0], 1.0, 1e-12);
}

TEST(PunishmentGameTest, ZeroSumViewAgrees) {
  auto g = push_game(3);
  EstimatedModel m = exact_model(*g, 2);
  RewardMachine rm = spec_to_rm(parse_spec("achieve g", g->predicates()));
  FixedPolicy idle(0);
  auto pg = std::make_shared<const PunishmentGame>(construct_game(m, *g, 1, rm, idle));
  ZeroSumGame z = pg->to_zero_sum();
  for (std::size_t x = 0; x < pg->nodes.size(); ++x) {
    if (pg->nodes[x].deviated) continue;
    for (int a = 0; a < pg->dev_actions; ++a)
      for (int b = 1; b < pg->pun_actions; ++b)
        EXPECT_EQ(z.transitions[x][a * pg->pun_actions + b], z.transitions[x][a * pg->pun_actions]);
  }
  // The zero-sum solver sees the same value up to the pre-deviation max.
  EXPECT_NEAR(minmax_value_iteration(z).value(), punishment_value(pg).value, 1e-12);
}

TEST(PunishmentGameTest, JointActionCoding) {
  auto g = push_game(2);
  EstimatedModel m = exact_model(*g, 2);
  RewardMachine rm = spec_to_rm(parse_spec("achieve g", g->predicates()));
  FixedPolicy idle(0);
  PunishmentGame pg = construct_game(m, *g, 1, rm, idle);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      int j = pg.joint_action(a, b);
      EXPECT_EQ(g->component(j, 1), a);
      EXPECT_EQ(g->component(j, 0), b);
      EXPECT_EQ(pg.punisher_index(j), b);
      EXPECT_EQ(pg.decode_component(0, b), b);
    }
}

std::vector<CompiledSpec> goal_specs(const MarkovGame& g) {
  std::vector<CompiledSpec> specs;
  for (int i = 0; i < g.num_agents(); ++i)
    specs.emplace_back(parse_spec("achieve goal_" + std::to_string(i), g.predicates()));
  return specs;
}

TEST(VerifyTest, EveryoneMovingIsNash) {
  SingleLaneGame g(2, 2, 5, 0.05);
  auto specs = goal_specs(g);
  Rng rng(4);
  EstimatedModel m = bfs_estimate(g, 2000, rng);
  auto go = std::make_shared<FixedPolicy>(g.encode_joint(std::vector<int>{1, 1}));
  VerifyConfig cfg;
  cfg.score_samples = 2000;
  VerificationReport r = verify_nash(g, go, specs, m, cfg, rng);
  EXPECT_TRUE(r.is_nash);
  ASSERT_EQ(r.deviation.size(), 2u);
  for (int i = 0; i < 2; ++i) EXPECT_GT(r.margin[i], 0.0);
}

TEST(VerifyTest, NeverMovingIsRejected) {
  SingleLaneGame g(2, 2, 5, 0.05);
  auto specs = goal_specs(g);
  Rng rng(5);
  EstimatedModel m = bfs_estimate(g, 2000, rng);
  auto idle = std::make_shared<FixedPolicy>(0);
  VerifyConfig cfg;
  cfg.stop_early = false;
  VerificationReport r = verify_nash(g, idle, specs, m, cfg, rng);
  EXPECT_FALSE(r.is_nash);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(r.J[i], 0.0);
    EXPECT_GT(r.deviation[i], 0.9);
  }
}

TEST(VerifyTest, BadToleranceThrows) {
  SingleLaneGame g(1, 2, 3);
  auto specs = goal_specs(g);
  Rng rng(6);
  EstimatedModel m = bfs_estimate(g, 10, rng);
  VerifyConfig cfg;
  cfg.delta = cfg.epsilon;
  EXPECT_THROW(verify_nash(g, std::make_shared<FixedPolicy>(0), specs, m, cfg, rng), std::invalid_argument);
}

TEST(JoinedPolicyTest, UndeviatedRunMatchesBase) {
  SingleLaneGame g(2, 2, 5, 0.05);
  auto specs = goal_specs(g);
  Rng rng(7);
  EstimatedModel m = bfs_estimate(g, 1000, rng);
  auto go = std::make_shared<FixedPolicy>(g.encode_joint(std::vector<int>{1, 1}));
  VerificationReport r = verify_nash(g, go, specs, m, VerifyConfig{}, rng);
  std::vector<RewardMachine> rms{specs[0].rm, specs[1].rm};
  JoinedPolicy joined(g, go, rms, r.tau);
  FsmJointPolicy base(go);
  Rng r1(11), r2(11);
  auto a = estimate_scores(g, joined, specs, 3000, r1);
  auto b = estimate_scores(g, base, specs, 3000, r2);
  EXPECT_EQ(a.J, b.J);
  EXPECT_EQ(joined.deviator(), -1);
}

TEST(JoinedPolicyTest, DetectsEarliestDeviator) {
  auto g = push_game(3);
  EstimatedModel m = exact_model(*g, 2);
  std::vector<CompiledSpec> specs{CompiledSpec(parse_spec("achieve g", g->predicates())),
                                  CompiledSpec(parse_spec("achieve g", g->predicates()))};
  auto idle = std::make_shared<FixedPolicy>(0);
  VerifyConfig cfg;
  cfg.stop_early = false;
  Rng rng(8);
  VerificationReport r = verify_nash(*g, idle, specs, m, cfg, rng);
  JoinedPolicy joined(*g, idle, {specs[0].rm, specs[1].rm}, r.tau);
  joined.reset();
  EXPECT_EQ(joined.act(0, rng), 0);
  joined.observe(0, g->encode_joint(std::vector<int>{0, 1}));
  EXPECT_EQ(joined.deviator(), 1);
  EXPECT_EQ(joined.detection_step(), 0);
  // The punisher (agent 0) holds still: pushing would only help agent 1.
  int joint = joined.act(0, rng);
  EXPECT_EQ(g->component(joint, 0), 0);
}

TEST(SearchTest, FindsEquilibriumOnSmallLane) {
  SingleLaneGame g(2, 2, 6, 0.05);
  auto specs = goal_specs(g);
  SearchConfig cfg;
  cfg.verify.score_samples = 2000;
  Rng rng(9);
  SearchResult r = high_nash_search(g, specs, cfg, rng);
  ASSERT_TRUE(r.found);
  EXPECT_GE(r.report.J[0] + r.report.J[1], 1.9);
  EXPECT_EQ(r.candidates_checked, 1);
  EXPECT_EQ(r.verdicts[0], 1);
  EXPECT_EQ(r.ranked.size(), r.verdicts.size());
  EXPECT_GT(r.estimation_steps, 0u);
}

TEST(SearchTest, CancellationStopsBeforeChecking) {
  SingleLaneGame g(2, 2, 6, 0.05);
  auto specs = goal_specs(g);
  SearchConfig cfg;
  cfg.cancelled = [] { return true; };
  Rng rng(10);
  SearchResult r = high_nash_search(g, specs, cfg, rng);
  EXPECT_FALSE(r.found);
  EXPECT_TRUE(r.cancelled);
  EXPECT_EQ(r.candidates_checked, 0);
}

}  // namespace
}  // namespace nashspec
