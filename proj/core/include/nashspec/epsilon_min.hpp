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

#ifndef NASHSPEC_EPSILON_MIN_HPP_
#define NASHSPEC_EPSILON_MIN_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include "nashspec/markov_game.hpp"
#include "nashspec/policy.hpp"

namespace nashspec {

struct BestResponseConfig {
  std::uint64_t episodes = 20000;
  // Undiscounted: the observation carries the step index.
  QLearningParams q{0.15, 0.1, 1.0};
  int eval_samples = 10000;
};

// Agent i replaced by a greedy tabular learner over (state, own reward
// machine state, step, memory key of the others' policy). Unseen
// observations and ties keep the action the joint policy recommends.
class BestResponsePolicy : public JointPolicy {
 public:
  BestResponsePolicy(const MarkovGame& game, std::unique_ptr<JointPolicy> base, int agent, RewardMachine rm,
                     std::shared_ptr<const QTable> q);
  BestResponsePolicy(const BestResponsePolicy& o);

  void reset() override;
  int act(StateId s, Rng& rng) override;
  void observe(StateId s, int joint) override;
  std::uint64_t memory_key() const override { return base_->memory_key(); }
  std::unique_ptr<JointPolicy> clone() const override { return std::make_unique<BestResponsePolicy>(*this); }

  static QKey key(StateId s, int q, int t, std::uint64_t memory);

 private:
  const MarkovGame* game_;
  std::unique_ptr<JointPolicy> base_;
  int agent_;
  RewardMachine rm_;
  std::shared_ptr<const QTable> q_;
  int rm_state_ = 0;
  int t_ = 0;
};

struct EpsilonMinReport {
  double epsilon_min = 0.0;
  std::vector<double> J;     // of the joint policy
  std::vector<double> J_br;  // agent i best-responding
  std::vector<double> gain;
  std::uint64_t steps = 0;
};

// Q-learning best response of one agent against the frozen others.
std::shared_ptr<QTable> learn_best_response(const MarkovGame& game, const JointPolicy& policy, int agent,
                                            const RewardMachine& rm, const BestResponseConfig& config, Rng& rng);

// max_i (J_i(br_i, pi_-i) - J_i(pi)), floored at 0. `known_J` skips the
// estimate of J(pi) when given.
EpsilonMinReport epsilon_min(const MarkovGame& game, const JointPolicy& policy, const std::vector<CompiledSpec>& specs,
                             const BestResponseConfig& config, Rng& rng, const std::vector<double>* known_J = nullptr);

}  // namespace nashspec

#endif  // NASHSPEC_EPSILON_MIN_HPP_
