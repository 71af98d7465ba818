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

#include <random>

#include "nashspec/automata.hpp"
#include "nashspec/spec.hpp"
#include "test_util.hpp"

namespace nashspec {
namespace {

TEST(DfaTest, AcceptsExactlyTheSatisfyingWords) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 120; ++i) {
    Spec phi = testing::random_spec(rng, 3, 5);
    FiniteAutomaton dfa = spec_to_dfa(phi);
    ASSERT_TRUE(is_deterministic(dfa));
    ASSERT_TRUE(is_complete(dfa));
    testing::for_each_word(8, 4, [&](std::span<const AtomMask> z) {
      ASSERT_EQ(dfa.accepts(z), testing::naive_satisfies(z, phi)) << to_string(phi);
    });
  }
}

TEST(DfaTest, NfaAndDfaAgree) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) {
    Spec phi = testing::random_spec(rng, 3, 4);
    FiniteAutomaton nfa = spec_to_nfa(phi);
    FiniteAutomaton dfa = determinize(nfa);
    testing::for_each_word(8, 4, [&](std::span<const AtomMask> z) { ASSERT_EQ(nfa.accepts(z), dfa.accepts(z)); });
  }
}

TEST(DfaTest, OverlappingGuardsGiveUniqueRuns) {
  FiniteAutomaton nfa;
  nfa.atoms = {0, 1};
  int q0 = nfa.add_state();
  int q1 = nfa.add_state(true);
  int q2 = nfa.add_state(false);
  nfa.add_edge(q0, p_atom(0), q1);
  nfa.add_edge(q0, p_or(p_atom(0), p_atom(1)), q2);
  FiniteAutomaton dfa = determinize(nfa);
  EXPECT_TRUE(is_deterministic(dfa));
  for (int q = 0; q < dfa.num_states; ++q)
    for (int a = 0; a < dfa.num_assignments(); ++a) EXPECT_LE(successor_count(dfa, q, a), 1);
  FiniteAutomaton full = complete(dfa);
  for (int q = 0; q < full.num_states; ++q)
    for (int a = 0; a < full.num_assignments(); ++a) EXPECT_EQ(successor_count(full, q, a), 1);
  testing::for_each_word(4, 3, [&](std::span<const AtomMask> z) { EXPECT_EQ(full.accepts(z), nfa.accepts(z)); });
}

TEST(DfaTest, EmptyAcceptingSetRejectsEverything) {
  FiniteAutomaton nfa;
  nfa.atoms = {0};
  int q = nfa.add_state();
  nfa.add_edge(q, p_true(), q);
  FiniteAutomaton dfa = determinize(nfa);
  testing::for_each_word(2, 4, [&](std::span<const AtomMask> z) { EXPECT_FALSE(dfa.accepts(z)); });
}

TEST(DfaTest, CompleteAddsSink) {
  FiniteAutomaton d;
  d.atoms = {0};
  int q0 = d.add_state();
  int q1 = d.add_state(true);
  d.add_edge(q0, p_atom(0), q1);
  d.add_edge(q1, p_true(), q1);
  d.deterministic = true;
  EXPECT_FALSE(is_complete(d));
  FiniteAutomaton c = complete(d);
  EXPECT_TRUE(is_complete(c));
  EXPECT_EQ(c.num_states, 3);
  std::vector<AtomMask> z{0, 1};
  EXPECT_FALSE(c.accepts(z));
  std::vector<AtomMask> w{1, 0};
  EXPECT_TRUE(c.accepts(w));
}

TEST(DfaTest, StateCapIsEnforced) {
  Spec phi = achieve(p_atom(0));
  for (int i = 0; i < 6; ++i) phi = choice(seq(phi, achieve(p_atom(1))), seq(achieve(p_atom(2)), phi));
  EXPECT_THROW(spec_to_dfa(phi, 8), AutomatonBudgetError);
}

TEST(DfaTest, GuardsStayOverSpecAtoms) {
  Spec phi = seq(achieve(p_atom(5)), achieve(p_atom(9)));
  FiniteAutomaton dfa = spec_to_dfa(phi);
  EXPECT_EQ(dfa.atoms, (std::vector<int>{5, 9}));
  EXPECT_EQ(dfa.num_assignments(), 4);
}

TEST(DnfTest, MembersRoundTrip) {
  std::vector<int> atoms{0, 2};
  std::vector<char> members{0, 1, 1, 0};
  Predicate p = assignments_to_dnf(members, atoms);
  EXPECT_FALSE(eval(p, 0b000));
  EXPECT_TRUE(eval(p, 0b001));
  EXPECT_TRUE(eval(p, 0b100));
  EXPECT_FALSE(eval(p, 0b101));
}

TEST(RewardMachineTest, NeverAcceptingGivesZero) {
  RewardMachine rm = spec_to_rm(achieve(p_atom(0)));
  std::vector<AtomMask> z{0, 0, 0, 0};
  EXPECT_EQ(rm_total_reward(rm, z), 0);
}

TEST(RewardMachineTest, EnteringOnceGivesOne) {
  RewardMachine rm = spec_to_rm(achieve(p_atom(0)));
  std::vector<AtomMask> z{0, 1, 0, 0};
  EXPECT_EQ(rm_total_reward(rm, z), 1);
  std::vector<AtomMask> last{0, 0, 0, 1};
  EXPECT_EQ(rm_total_reward(rm, last), 1);
}

TEST(RewardMachineTest, EnterAndLeaveCancel) {
  // Accepting once a is seen, rejecting for good once b shows up.
  Spec phi = ensuring(achieve(p_atom(0)), p_not(p_atom(1)));
  RewardMachine rm = spec_to_rm(phi);
  std::vector<AtomMask> z{1, 0, 2, 0};
  EXPECT_FALSE(satisfies(z, phi));
  EXPECT_EQ(rm_total_reward(rm, z), 0);
  // Step-by-step rewards: +1 on entering, -1 on leaving.
  int q = rm.initial();
  EXPECT_EQ(rm.reward(1, q), 1);
  q = rm.next(1, q);
  EXPECT_EQ(rm.reward(2, q), -1);
}

TEST(RewardMachineTest, AchieveTrueAlwaysOne) {
  RewardMachine rm = spec_to_rm(achieve(p_true()));
  testing::for_each_word(4, 4, [&](std::span<const AtomMask> z) { EXPECT_EQ(rm_total_reward(rm, z), 1); });
}

TEST(RewardMachineTest, TotalRewardIsIndicator) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    Spec phi = testing::random_spec(rng, 3, 5);
    RewardMachine rm = spec_to_rm(phi);
    EXPECT_LE(rm.num_states(), (1 << spec_to_nfa(phi).num_states) + 1);
    testing::for_each_word(8, 4, [&](std::span<const AtomMask> z) {
      ASSERT_EQ(rm_total_reward(rm, z), testing::naive_satisfies(z, phi) ? 1 : 0) << to_string(phi);
    });
  }
}

TEST(RewardMachineTest, DeadStateIsAbsorbingWithZeroReward) {
  RewardMachine rm = spec_to_rm(achieve(p_atom(0)));
  int d = rm.dead();
  EXPECT_EQ(rm.next(1, d), d);
  EXPECT_EQ(rm.reward(1, d), 0);
  EXPECT_FALSE(rm.accepting(d));
}

TEST(RewardMachineTest, AcceptingSinkDetected) {
  RewardMachine rm = spec_to_rm(achieve(p_atom(0)));
  int q = rm.next(1, rm.initial());
  EXPECT_TRUE(rm.accepting_sink(q));
  EXPECT_FALSE(rm.accepting_sink(rm.initial()));
}

}  // namespace
}  // namespace nashspec
