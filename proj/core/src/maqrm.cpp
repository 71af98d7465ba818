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

#include <stdexcept>

#include "nashspec/baselines.hpp"

namespace nashspec {

namespace {

bool finished(const RewardMachine& rm, int q) { return rm.accepting_sink(q); }

}  // namespace

MaqrmResult train_maqrm(const MarkovGame& game, const std::vector<RewardMachine>& rms, const MaqrmConfig& config,
                        Rng& rng) {
  const int n = game.num_agents();
  if (static_cast<int>(rms.size()) != n) throw std::invalid_argument("one reward machine per agent");
  const int H = game.horizon();
  const auto& preds = game.predicates();
  // Episodes end at the horizon or once every machine sits in an accepting
  // sink; the terminal target is the immediate reward only.
  const auto& qp = config.q;
  MaqrmResult out;
  for (int i = 0; i < n; ++i) out.q.push_back(std::make_shared<QTable>(game.num_actions(i)));

  std::vector<int> q(n), q2(n), a(n);
  std::vector<double> r(n);
  StateId s = game.initial_state();
  int t = 0;
  auto restart = [&] {
    s = game.initial_state();
    for (int i = 0; i < n; ++i) q[i] = rms[i].initial();
    t = 0;
  };
  restart();
  while (out.steps < config.total_steps) {
    const QKey k = maqrm_key(s, q);
    for (int i = 0; i < n; ++i) a[i] = out.q[i]->epsilon_greedy(k, qp.epsilon, rng);
    const int joint = game.encode_joint(a);
    const AtomMask label = preds.label(s);
    bool done = true;
    for (int i = 0; i < n; ++i) {
      r[i] = rms[i].reward(label, q[i]);
      q2[i] = rms[i].next(label, q[i]);
      done = done && finished(rms[i], q2[i]);
    }
    const StateId s2 = game.sample_next(s, joint, rng);
    ++out.steps;
    const bool last = t + 1 >= H;
    const bool terminal = last || done;
    const QKey k2 = maqrm_key(s2, q2);
    for (int i = 0; i < n; ++i) {
      double target = r[i];
      if (!terminal) target += qp.discount * out.q[i]->max_value(k2);
      out.q[i]->update(k, a[i], target, qp.learning_rate);
    }
    if (terminal) {
      ++out.episodes;
      restart();
    } else {
      s = s2;
      q = q2;
      ++t;
    }
  }
  return out;
}

MaqrmPolicy::MaqrmPolicy(const MarkovGame& game, std::vector<std::shared_ptr<const QTable>> q,
                         std::vector<RewardMachine> rms)
    : game_(&game), tables_(std::move(q)), rms_(std::move(rms)) {
  reset();
}

void MaqrmPolicy::reset() {
  q_.resize(rms_.size());
  for (std::size_t i = 0; i < rms_.size(); ++i) q_[i] = rms_[i].initial();
}

int MaqrmPolicy::act(StateId s, Rng& /*rng*/) {
  const QKey k = maqrm_key(s, q_);
  std::vector<int> a(tables_.size());
  for (std::size_t i = 0; i < tables_.size(); ++i) a[i] = tables_[i]->greedy(k);
  return game_->encode_joint(a);
}

void MaqrmPolicy::observe(StateId s, int /*joint*/) {
  const AtomMask label = game_->predicates().label(s);
  for (std::size_t i = 0; i < rms_.size(); ++i) q_[i] = rms_[i].next(label, q_[i]);
}

}  // namespace nashspec
