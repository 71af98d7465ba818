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

#ifndef NASHSPEC_BASELINES_HPP_
#define NASHSPEC_BASELINES_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "nashspec/automata.hpp"
#include "nashspec/game_solving.hpp"
#include "nashspec/markov_game.hpp"
#include "nashspec/policy.hpp"
#include "nashspec/verification.hpp"

namespace nashspec {

// Product of the estimated model with every agent's reward machine. Node
// rewards are read before the machines consume the node's label.
struct RmProduct {
  struct Node {
    StateId s;
    std::vector<int> q;
  };
  int num_agents = 0;
  int num_joint = 0;
  std::vector<int> num_actions;  // per agent
  std::vector<Node> nodes;  // nodes[0] is (s0, initial states)
  std::vector<std::vector<double>> reward;                         // [node][agent]
  std::vector<std::vector<std::vector<std::pair<int, double>>>> trans;  // [node][joint]
  std::unordered_map<QKey, int, QKeyHash> lookup;

  std::optional<int> find(StateId s, const std::vector<int>& q) const;
};

RmProduct rm_product(const EstimatedModel& model, const MarkovGame& game, const std::vector<RewardMachine>& rms,
                     std::size_t node_cap = 5000000);

struct NviSolution {
  std::shared_ptr<const RmProduct> product;
  int stages = 0;  // horizon + 1
  // [stage][node]: per-agent mixed strategy of the selected stage equilibrium.
  std::vector<std::vector<std::vector<std::vector<double>>>> strategies;
  std::vector<std::vector<std::vector<double>>> values;  // [stage][node][agent]
  std::uint64_t stage_games = 0;
  std::uint64_t unsolved = 0;  // stage games without a certified equilibrium
  std::uint64_t inexact = 0;   // certified only up to the scoped search
  bool scoped = false;         // n > 2 used the bounded general-sum search
};

// Backward induction with the highest-welfare stage equilibrium.
NviSolution nash_value_iteration(std::shared_ptr<const RmProduct> product, int horizon, double tol = 1e-9);

// Plays the NVI strategies, tracking every reward machine. Unknown product
// nodes fall back to joint action 0.
class NviPolicy : public JointPolicy {
 public:
  NviPolicy(const MarkovGame& game, std::shared_ptr<const NviSolution> sol, std::vector<RewardMachine> rms);

  void reset() override;
  int act(StateId s, Rng& rng) override;
  void observe(StateId s, int joint) override;
  std::uint64_t memory_key() const override;
  std::unique_ptr<JointPolicy> clone() const override { return std::make_unique<NviPolicy>(*this); }
  std::uint64_t fallbacks() const { return fallbacks_; }

 private:
  const MarkovGame* game_;
  std::shared_ptr<const NviSolution> sol_;
  std::vector<RewardMachine> rms_;
  std::vector<int> q_;
  int t_ = 0;
  std::uint64_t fallbacks_ = 0;
};

struct MaqrmConfig {
  std::uint64_t total_steps = 2000000;
  QLearningParams q{0.15, 0.1, 0.9};
};

// One Q-table per agent over (state, all reward machine states).
struct MaqrmResult {
  std::vector<std::shared_ptr<QTable>> q;
  std::uint64_t steps = 0;
  std::uint64_t episodes = 0;
};

std::uint64_t pack_rm_states(const std::vector<int>& q);
QKey maqrm_key(StateId s, const std::vector<int>& q);

MaqrmResult train_maqrm(const MarkovGame& game, const std::vector<RewardMachine>& rms, const MaqrmConfig& config,
                        Rng& rng);

// Greedy per-agent play from the learned tables.
class MaqrmPolicy : public JointPolicy {
 public:
  MaqrmPolicy(const MarkovGame& game, std::vector<std::shared_ptr<const QTable>> q, std::vector<RewardMachine> rms);

  void reset() override;
  int act(StateId s, Rng& rng) override;
  void observe(StateId s, int joint) override;
  std::uint64_t memory_key() const override { return pack_rm_states(q_); }
  std::unique_ptr<JointPolicy> clone() const override { return std::make_unique<MaqrmPolicy>(*this); }

 private:
  const MarkovGame* game_;
  std::vector<std::shared_ptr<const QTable>> tables_;
  std::vector<RewardMachine> rms_;
  std::vector<int> q_;
};

}  // namespace nashspec

#endif  // NASHSPEC_BASELINES_HPP_
