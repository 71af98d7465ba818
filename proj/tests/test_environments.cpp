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
#include <map>
#include <random>

#include "nashspec/benchmarks.hpp"
#include "nashspec/markov_game.hpp"
#include "nashspec/parser.hpp"

namespace nashspec {
namespace {

int atom(const MarkovGame& g, const std::string& name) { return *g.predicates().find(name); }
bool holds(const MarkovGame& g, StateId s, const std::string& name) {
  return (g.predicates().label(s) >> atom(g, name)) & 1;
}

// Every reachable (state, joint action) distribution sums to one.
void check_stochastic(const MarkovGame& g, int depth) {
  std::vector<StateId> frontier{g.initial_state()};
  std::map<StateId, int> seen{{g.initial_state(), 0}};
  for (int d = 0; d < depth; ++d) {
    std::vector<StateId> next;
    for (StateId s : frontier)
      for (int a = 0; a < g.num_joint_actions(); ++a) {
        double total = 0.0;
        for (const auto& [s2, p] : g.transition(s, a)) {
          ASSERT_GT(p, 0.0);
          total += p;
          if (seen.emplace(s2, d + 1).second) next.push_back(s2);
        }
        ASSERT_NEAR(total, 1.0, 1e-12);
      }
    frontier.swap(next);
  }
}

TEST(JointActionTest, MixedRadixAgentZeroFirst) {
  GridworldGame g(5);
  std::vector<int> a{3, 1};
  int j = g.encode_joint(a);
  EXPECT_EQ(j, 3 + 5 * 1);
  EXPECT_EQ(g.decode_joint(j), a);
  EXPECT_EQ(g.component(j, 1), 1);
  EXPECT_EQ(g.with_component(j, 0, 4), 4 + 5);
  std::vector<int> bad{5, 0};
  EXPECT_THROW(g.encode_joint(bad), std::out_of_range);
}

TEST(IntersectionTest, DistributionsSumToOne) {
  IntersectionGame g({{IntersectionGame::Axis::kNorthSouth, 3}, {IntersectionGame::Axis::kEastWest, 2}}, 8);
  check_stochastic(g, 6);
}

TEST(IntersectionTest, MoveFailsWithFailureProbability) {
  IntersectionGame g({{IntersectionGame::Axis::kNorthSouth, 2}}, 4, 0.05);
  const auto& d = g.transition(g.initial_state(), 1);
  ASSERT_EQ(d.size(), 2u);
  std::map<int, double> by_pos;
  for (const auto& [s, p] : d) by_pos[g.vars(s)[0]] = p;
  EXPECT_NEAR(by_pos[1], 0.95, 1e-12);
  EXPECT_NEAR(by_pos[2], 0.05, 1e-12);
  const auto& stay = g.transition(g.initial_state(), 0);
  ASSERT_EQ(stay.size(), 1u);
  EXPECT_EQ(stay[0].first, g.initial_state());
}

TEST(IntersectionTest, CollisionOnlyInSharedCell) {
  IntersectionGame g({{IntersectionGame::Axis::kNorthSouth, 1}, {IntersectionGame::Axis::kEastWest, 1},
                      {IntersectionGame::Axis::kEastWest, 2}},
                     4);
  StateId s = g.initial_state();
  EXPECT_TRUE(holds(g, s, "collide_0"));
  EXPECT_TRUE(holds(g, s, "collide_1"));
  EXPECT_FALSE(holds(g, s, "collide_2"));
  EXPECT_TRUE(holds(g, s, "safe_2"));
  StateId t = g.intern({0, 1, 2});
  EXPECT_FALSE(holds(g, t, "collide_1"));
  EXPECT_TRUE(holds(g, t, "crossed_0"));
  EXPECT_TRUE(holds(g, t, "at_int_1"));
}

TEST(IntersectionTest, AheadNeedsTwoCellGap) {
  IntersectionGame g({{IntersectionGame::Axis::kNorthSouth, 1}, {IntersectionGame::Axis::kEastWest, 3}}, 4);
  EXPECT_TRUE(holds(g, g.intern({1, 3}), "ahead_0_1"));
  EXPECT_FALSE(holds(g, g.intern({1, 2}), "ahead_0_1"));
  EXPECT_TRUE(holds(g, g.intern({0, 1}), "ahead_0_1"));
  EXPECT_FALSE(holds(g, g.intern({1, 3}), "ahead_1_0"));
}

TEST(IntersectionTest, CrossedIsAbsorbing) {
  IntersectionGame g({{IntersectionGame::Axis::kNorthSouth, 1}}, 4);
  const auto& d = g.transition(g.initial_state(), 1);
  StateId crossed = -1;
  for (const auto& [s, p] : d)
    if (g.vars(s)[0] == 0) crossed = s;
  ASSERT_GE(crossed, 0);
  const auto& again = g.transition(crossed, 1);
  ASSERT_EQ(again.size(), 1u);
  EXPECT_EQ(again[0].first, crossed);
}

TEST(SingleLaneTest, SharedStallBlocksEveryone) {
  SingleLaneGame g(2, 4, 8, 0.05);
  check_stochastic(g, 6);
  const auto& d = g.transition(g.initial_state(), g.encode_joint(std::vector<int>{1, 1}));
  ASSERT_EQ(d.size(), 2u);
  for (const auto& [s, p] : d) {
    const auto& v = g.vars(s);
    EXPECT_EQ(v[0], v[1]);
    EXPECT_NEAR(p, v[0] == 1 ? 0.95 : 0.05, 1e-12);
  }
}

TEST(SingleLaneTest, IndependentFailures) {
  SingleLaneGame g(2, 4, 8, 0.05, SingleLaneGame::FailureMode::kIndependent);
  check_stochastic(g, 6);
  const auto& d = g.transition(g.initial_state(), g.encode_joint(std::vector<int>{1, 1}));
  EXPECT_EQ(d.size(), 4u);
}

TEST(SingleLaneTest, GoalAndMidpointAtoms) {
  SingleLaneGame g(2, 4, 8);
  StateId s = g.intern({4, 2});
  EXPECT_TRUE(holds(g, s, "goal_0"));
  EXPECT_FALSE(holds(g, s, "goal_1"));
  EXPECT_TRUE(holds(g, s, "mid_1"));
  EXPECT_FALSE(holds(g, g.intern({4, 1}), "mid_1"));
  const auto& d = g.transition(s, g.encode_joint(std::vector<int>{1, 0}));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].first, s);
}

TEST(GridworldTest, DistributionsAndClipping) {
  GridworldGame g(6);
  check_stochastic(g, 3);
  // South and west from the origin are clipped.
  int joint = g.encode_joint(std::vector<int>{2, 0});
  const auto& d = g.transition(g.initial_state(), joint);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].first, g.initial_state());
  joint = g.encode_joint(std::vector<int>{3, 0});
  const auto& e = g.transition(g.initial_state(), joint);
  ASSERT_EQ(e.size(), 2u);
}

TEST(GridworldTest, CollisionWhenSharingCell) {
  GridworldGame g(6);
  StateId s = g.intern({1, 2, 1, 2});
  EXPECT_TRUE(holds(g, s, "collide_0"));
  EXPECT_FALSE(holds(g, s, "safe_1"));
  EXPECT_TRUE(holds(g, s, "at_0_1_2"));
  EXPECT_TRUE(holds(g, g.initial_state(), "at_1_3_3"));
}

TEST(SimulatorTest, SampleFrequenciesMatchTransition) {
  SingleLaneGame g(1, 3, 5, 0.3);
  Rng rng(42);
  int moved = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i)
    if (g.vars(g.sample_next(g.initial_state(), 1, rng))[0] == 1) ++moved;
  EXPECT_NEAR(static_cast<double>(moved) / n, 0.7, 0.006);
  EXPECT_EQ(g.samples_drawn(), static_cast<std::uint64_t>(n));
}

TEST(ScoresTest, ConstantPolicyScores) {
  SingleLaneGame g(2, 2, 4, 0.0);
  std::vector<CompiledSpec> specs{CompiledSpec(parse_spec("achieve goal_0", g.predicates())),
                                  CompiledSpec(parse_spec("achieve goal_1", g.predicates()))};
  ConstantPolicy pol(g.encode_joint(std::vector<int>{1, 0}));
  Rng rng(1);
  ScoreReport r = estimate_scores(g, pol, specs, 200, rng);
  EXPECT_DOUBLE_EQ(r.J[0], 1.0);
  EXPECT_DOUBLE_EQ(r.J[1], 0.0);
  EXPECT_DOUBLE_EQ(r.welfare, 0.5);
}

TEST(RegistryTest, EveryBenchmarkCompiles) {
  for (const auto& b : benchmark_registry()) {
    auto g = make_environment(b.env);
    ASSERT_EQ(static_cast<int>(b.specs.size()), g->num_agents()) << b.name;
    for (const auto& s : b.specs) EXPECT_NO_THROW(CompiledSpec(parse_spec(s, g->predicates()))) << b.name;
  }
  EXPECT_EQ(resolve_suite("single_lane").size(), 6u);
  EXPECT_EQ(resolve_suite("intersection/phi1,gridworld/phi2").size(), 2u);
  EXPECT_THROW(find_benchmark("nope/phi1"), std::exception);
}

}  // namespace
}  // namespace nashspec
