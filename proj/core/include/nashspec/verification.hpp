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

#ifndef NASHSPEC_VERIFICATION_HPP_
#define NASHSPEC_VERIFICATION_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "nashspec/automata.hpp"
#include "nashspec/enumeration.hpp"
#include "nashspec/game_solving.hpp"
#include "nashspec/markov_game.hpp"
#include "nashspec/policy.hpp"

namespace nashspec {

class StateBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Empirical transition model over the states discovered from s0. Unseen
// successors have probability 0.
struct EstimatedModel {
  int num_joint = 0;
  std::uint64_t samples_per_pair = 0;
  std::uint64_t total_samples = 0;
  std::vector<StateId> states;  // discovery order, states[0] = s0
  std::unordered_map<StateId, int> index;
  std::vector<std::vector<Distribution>> transitions;  // [index][joint]

  bool contains(StateId s) const { return index.count(s) != 0; }
  const Distribution& next(StateId s, int joint) const { return transitions[index.at(s)][joint]; }
};

// Per-pair sample count that makes every probability estimate accurate to
// delta / (2 |S| |M| |Q| H^2) with probability 1 - p.
std::uint64_t bfs_sample_count(double num_states, double num_memory, double num_rm_states, double horizon,
                               double num_joint, double delta, double p);

// Breadth-first exploration from s0 drawing K samples per state-action pair.
EstimatedModel bfs_estimate(const MarkovGame& game, std::uint64_t samples_per_pair, Rng& rng,
                            std::size_t state_cap = 1000000);

// Two-player zero-sum product of the estimated model, the policy memory, the
// agent's reward machine and a deviation flag. The max player is agent j,
// the min player controls the joint action of everyone else, indexed in
// increasing agent order with the lowest agent least significant. While the
// flag is clear the min player's move is replaced by the policy's.
struct PunishmentGame {
  struct Node {
    StateId s;
    int m;  // -1 once deviated when memory is collapsed
    int q;
    bool deviated;
  };

  int agent = 0;
  int stages = 0;  // horizon + 1
  int dev_actions = 0;
  int pun_actions = 0;
  bool collapse_memory = true;
  std::vector<int> num_actions;  // per agent of the game
  std::vector<Node> nodes;       // nodes[0] is the initial node
  std::vector<double> reward;    // per node
  // Clear flag: one row per deviator action; set flag: dev * pun rows.
  std::vector<std::vector<std::vector<std::pair<int, double>>>> trans;

  const std::vector<std::pair<int, double>>& next(int node, int a_dev, int a_pun) const {
    const auto& t = trans[node];
    return nodes[node].deviated ? t[a_dev * pun_actions + a_pun] : t[a_dev];
  }
  int joint_action(int a_dev, int a_pun) const;
  int punisher_index(int joint) const;
  // Agent i's action inside a punisher joint index.
  int decode_component(int i, int a_pun) const;
  std::optional<int> find(StateId s, int m, int q, bool deviated) const;

  // Dense form with the same stages, for cross-checking solvers.
  ZeroSumGame to_zero_sum() const;

  std::unordered_map<std::uint64_t, int> lookup;
};

PunishmentGame construct_game(const EstimatedModel& model, const MarkovGame& game, int agent, const RewardMachine& rm,
                              const FiniteStatePolicy& policy, bool collapse_memory = true);

struct PunishmentSolution {
  std::shared_ptr<const PunishmentGame> game;
  double value = 0.0;
  std::vector<std::vector<double>> values;  // [stage][node], stage = horizon + 1 is zero
  // [stage][node] min-player mix over the punishers' joint actions; empty on
  // clear-flag nodes.
  std::vector<std::vector<std::vector<double>>> min_policy;
};

PunishmentSolution punishment_value(std::shared_ptr<const PunishmentGame> g);

// tau[j]: the punishers' joint reaction to deviator j, read at the tracked
// product node. A shared draw per step correlates their components.
class PunishmentStrategy {
 public:
  PunishmentStrategy() = default;
  explicit PunishmentStrategy(std::shared_ptr<const PunishmentSolution> sol) : sol_(std::move(sol)) {}

  int deviator() const { return sol_->game->agent; }
  const PunishmentSolution& solution() const { return *sol_; }
  // Mixed strategy at (stage, s, m, q) after deviation, or nullptr when the
  // node was never materialized.
  const std::vector<double>* lookup(int stage, StateId s, int m, int q) const;
  // Punisher joint index, uniform when untracked.
  int sample(int stage, StateId s, int m, int q, Rng& rng, bool* fallback = nullptr) const;
  // Agent i's action inside a punisher joint index.
  int component(int agent, int a_pun) const;

 private:
  std::shared_ptr<const PunishmentSolution> sol_;
};

PunishmentStrategy pun_strat(std::shared_ptr<const PunishmentSolution> sol);

// pi joined with tau: follow pi until the earliest deviation (lowest agent
// on ties), then everyone else plays tau[deviator].
class JoinedPolicy : public JointPolicy {
 public:
  JoinedPolicy(const MarkovGame& game, std::shared_ptr<const FiniteStatePolicy> base,
               std::vector<RewardMachine> rms, std::vector<PunishmentStrategy> tau);

  void reset() override;
  int act(StateId s, Rng& rng) override;
  void observe(StateId s, int joint) override;
  std::uint64_t memory_key() const override;
  std::unique_ptr<JointPolicy> clone() const override { return std::make_unique<JoinedPolicy>(*this); }

  int deviator() const { return deviator_; }
  int detection_step() const { return detected_at_; }
  std::uint64_t fallbacks() const { return fallbacks_; }

 private:
  const MarkovGame* game_;
  std::shared_ptr<const FiniteStatePolicy> base_;
  std::vector<RewardMachine> rms_;
  std::vector<PunishmentStrategy> tau_;
  int m_ = 0;
  int t_ = 0;
  std::vector<int> q_;
  int deviator_ = -1;
  int detected_at_ = -1;
  std::uint64_t fallbacks_ = 0;
};

struct VerifyConfig {
  double epsilon = 0.06;
  double delta = 0.01;
  std::uint64_t samples_per_pair = 1000;  // K
  bool formula_k = false;
  double failure_prob = 0.1;  // only used by the K formula
  int score_samples = 10000;
  bool collapse_memory = true;
  // Stop at the first agent whose check fails.
  bool stop_early = true;
};

struct VerificationReport {
  bool is_nash = false;
  std::vector<double> J;
  std::vector<double> deviation;  // estimated deviation value per agent
  std::vector<double> margin;     // J + epsilon - delta - deviation
  std::vector<PunishmentStrategy> tau;
  std::uint64_t score_steps = 0;
};

VerificationReport verify_nash(const MarkovGame& game, std::shared_ptr<const FiniteStatePolicy> policy,
                               const std::vector<CompiledSpec>& specs, const EstimatedModel& model,
                               const VerifyConfig& config, Rng& rng);

struct SearchConfig {
  EnumerationConfig enumeration;
  VerifyConfig verify;
  std::size_t max_candidates = 0;  // 0 checks all
  // Polled before each candidate; returning true abandons the search.
  std::function<bool()> cancelled;
};

struct SearchResult {
  bool found = false;
  Candidate candidate;
  VerificationReport report;
  std::shared_ptr<JoinedPolicy> policy;
  int candidates_checked = 0;
  bool cancelled = false;
  // Every enumerated candidate in rank order, with -1 unchecked, 0 rejected,
  // 1 accepted.
  std::vector<Candidate> ranked;
  std::vector<int> verdicts;
  EnumerationStats enumeration;
  std::uint64_t estimation_steps = 0;
  std::uint64_t verification_steps = 0;
};

SearchResult high_nash_search(const MarkovGame& game, const std::vector<CompiledSpec>& specs,
                              const SearchConfig& config, Rng& rng);

}  // namespace nashspec

#endif  // NASHSPEC_VERIFICATION_HPP_
