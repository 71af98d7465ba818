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

#include "nashspec/epsilon_min.hpp"

#include <algorithm>
#include <stdexcept>

namespace nashspec {

QKey BestResponsePolicy::key(StateId s, int q, int t, std::uint64_t memory) {
  return {(static_cast<std::uint64_t>(static_cast<std::uint32_t>(s)) << 32) |
              (static_cast<std::uint64_t>(q & 0xFFFF) << 16) | static_cast<std::uint64_t>(t & 0xFFFF),
          memory};
}

BestResponsePolicy::BestResponsePolicy(const MarkovGame& game, std::unique_ptr<JointPolicy> base, int agent,
                                       RewardMachine rm, std::shared_ptr<const QTable> q)
    : game_(&game), base_(std::move(base)), agent_(agent), rm_(std::move(rm)), q_(std::move(q)) {
  reset();
}

BestResponsePolicy::BestResponsePolicy(const BestResponsePolicy& o)
    : JointPolicy(o),
      game_(o.game_),
      base_(o.base_->clone()),
      agent_(o.agent_),
      rm_(o.rm_),
      q_(o.q_),
      rm_state_(o.rm_state_),
      t_(o.t_) {}

void BestResponsePolicy::reset() {
  base_->reset();
  rm_state_ = rm_.initial();
  t_ = 0;
}

int BestResponsePolicy::act(StateId s, Rng& rng) {
  int joint = base_->act(s, rng);
  int rec = game_->component(joint, agent_);
  int a = q_->greedy_or(key(s, rm_state_, t_, base_->memory_key()), rec);
  return game_->with_component(joint, agent_, a);
}

void BestResponsePolicy::observe(StateId s, int joint) {
  base_->observe(s, joint);
  rm_state_ = rm_.next(game_->predicates().label(s), rm_state_);
  ++t_;
}

std::shared_ptr<QTable> learn_best_response(const MarkovGame& game, const JointPolicy& policy, int agent,
                                            const RewardMachine& rm, const BestResponseConfig& config, Rng& rng) {
  auto q = std::make_shared<QTable>(game.num_actions(agent));
  auto base = policy.clone();
  const auto& preds = game.predicates();
  const int H = game.horizon();
  const auto& qp = config.q;
  for (std::uint64_t ep = 0; ep < config.episodes; ++ep) {
    base->reset();
    StateId s = game.initial_state();
    int u = rm.initial();
    for (int t = 0; t < H; ++t) {
      const QKey k = BestResponsePolicy::key(s, u, t, base->memory_key());
      int joint = base->act(s, rng);
      int rec = game.component(joint, agent);
      int a = uniform01(rng) < qp.epsilon ? std::uniform_int_distribution<int>(0, q->num_actions() - 1)(rng)
                                          : q->greedy_or(k, rec);
      joint = game.with_component(joint, agent, a);
      base->observe(s, joint);
      const AtomMask label = preds.label(s);
      const double r = rm.reward(label, u);
      const int u2 = rm.next(label, u);
      const StateId s2 = game.sample_next(s, joint, rng);
      double target = r;
      if (t + 1 < H) {
        target += qp.discount * q->max_value(BestResponsePolicy::key(s2, u2, t + 1, base->memory_key()));
      } else {
        target += qp.discount * rm.reward(preds.label(s2), u2);
      }
      q->update(k, a, target, qp.learning_rate);
      s = s2;
      u = u2;
    }
  }
  return q;
}

EpsilonMinReport epsilon_min(const MarkovGame& game, const JointPolicy& policy, const std::vector<CompiledSpec>& specs,
                             const BestResponseConfig& config, Rng& rng, const std::vector<double>* known_J) {
  const int n = game.num_agents();
  if (static_cast<int>(specs.size()) != n) throw std::invalid_argument("one spec per agent");
  EpsilonMinReport r;
  const std::uint64_t before = game.samples_drawn();
  if (known_J) {
    r.J = *known_J;
  } else {
    auto p = policy.clone();
    r.J = estimate_scores(game, *p, specs, config.eval_samples, rng).J;
  }
  for (int i = 0; i < n; ++i) {
    auto q = learn_best_response(game, policy, i, specs[i].rm, config, rng);
    BestResponsePolicy br(game, policy.clone(), i, specs[i].rm, q);
    double j = estimate_scores(game, br, specs, config.eval_samples, rng).J[i];
    r.J_br.push_back(j);
    r.gain.push_back(j - r.J[i]);
  }
  r.epsilon_min = std::max(0.0, *std::max_element(r.gain.begin(), r.gain.end()));
  r.steps = game.samples_drawn() - before;
  return r;
}

}  // namespace nashspec
