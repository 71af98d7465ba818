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

#include "nashspec/markov_game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nashspec {

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

void MarkovGame::set_actions(std::vector<int> per_agent) {
  num_joint_ = 1;
  for (int a : per_agent) {
    if (a < 1) throw std::invalid_argument("every agent needs at least one action");
    num_joint_ *= a;
  }
  num_actions_ = std::move(per_agent);
}

int MarkovGame::encode_joint(std::span<const int> actions) const {
  if (static_cast<int>(actions.size()) != num_agents()) throw std::invalid_argument("joint action arity");
  int joint = 0;
  for (int i = num_agents() - 1; i >= 0; --i) {
    if (actions[i] < 0 || actions[i] >= num_actions_[i]) throw std::out_of_range("action index");
    joint = joint * num_actions_[i] + actions[i];
  }
  return joint;
}

std::vector<int> MarkovGame::decode_joint(int joint) const {
  std::vector<int> out(num_agents());
  for (int i = 0; i < num_agents(); ++i) {
    out[i] = joint % num_actions_[i];
    joint /= num_actions_[i];
  }
  return out;
}

int MarkovGame::component(int joint, int agent) const {
  for (int i = 0; i < agent; ++i) joint /= num_actions_[i];
  return joint % num_actions_[agent];
}

int MarkovGame::with_component(int joint, int agent, int action) const {
  int stride = 1;
  for (int i = 0; i < agent; ++i) stride *= num_actions_[i];
  int old = (joint / stride) % num_actions_[agent];
  return joint + (action - old) * stride;
}

StateId MarkovGame::sample_next(StateId s, int joint, Rng& rng) const {
  ++samples_;
  const Distribution& d = transition(s, joint);
  double u = uniform01(rng);
  for (const auto& [next, p] : d) {
    if (u < p) return next;
    u -= p;
  }
  return d.back().first;
}

StateId FactoredGame::intern(const Vars& x) const {
  auto it = ids_.find(x);
  if (it != ids_.end()) return it->second;
  StateId id = static_cast<StateId>(states_.size());
  states_.push_back(x);
  ids_.emplace(x, id);
  return id;
}

const Distribution& FactoredGame::transition(StateId s, int joint) const {
  if (s < 0 || s >= num_known_states()) throw std::out_of_range("unknown state id");
  if (joint < 0 || joint >= num_joint_actions()) throw std::out_of_range("joint action index");
  if (static_cast<int>(cache_.size()) <= s) cache_.resize(states_.size());
  auto& row = cache_[s];
  if (row.empty()) row.resize(num_joint_actions());
  Distribution& d = row[joint];
  if (d.empty()) {
    // Successor interning may grow states_, so copy the vars first.
    Vars x = states_[s];
    std::map<StateId, double> merged;
    for (auto& [y, p] : successors(x, decode_joint(joint)))
      if (p > 0.0) merged[intern(y)] += p;
    d.assign(merged.begin(), merged.end());
  }
  return d;
}

std::string FactoredGame::state_name(StateId s) const {
  std::ostringstream os;
  os << "(";
  const Vars& x = vars(s);
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ")";
  return os.str();
}

Trajectory sample_trajectory(const MarkovGame& game, JointPolicy& policy, StateId from, int steps,
                             Rng& rng) {
  Trajectory z;
  z.states.reserve(steps + 1);
  z.actions.reserve(steps);
  z.states.push_back(from);
  policy.reset();
  StateId s = from;
  for (int t = 0; t < steps; ++t) {
    int a = policy.act(s, rng);
    policy.observe(s, a);
    s = game.sample_next(s, a, rng);
    z.actions.push_back(a);
    z.states.push_back(s);
  }
  return z;
}

CompiledSpec::CompiledSpec(Spec s, int state_cap)
    : spec(std::move(s)), dfa(std::make_shared<const FiniteAutomaton>(spec_to_dfa(spec, state_cap))), rm(dfa) {}

ScoreReport estimate_scores(const MarkovGame& game, JointPolicy& policy,
                            const std::vector<CompiledSpec>& specs, int num_samples, Rng& rng) {
  if (num_samples < 1) throw std::invalid_argument("num_samples must be positive");
  const int n = static_cast<int>(specs.size());
  ScoreReport r;
  r.J.assign(n, 0.0);
  r.samples = num_samples;
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < num_samples; ++k) {
    Trajectory z = sample_trajectory(game, policy, game.initial_state(), game.horizon(), rng);
    auto labels = game.predicates().labels(z.states);
    int hits = 0;
    for (int i = 0; i < n; ++i)
      if (specs[i].check(labels)) {
        r.J[i] += 1.0;
        ++hits;
      }
    double w = n ? static_cast<double>(hits) / n : 0.0;
    sum += w;
    sum_sq += w * w;
  }
  for (double& j : r.J) j /= num_samples;
  r.welfare = 0.0;
  for (double j : r.J) r.welfare += j;
  if (n) r.welfare /= n;
  double mean = sum / num_samples;
  double var = std::max(0.0, sum_sq / num_samples - mean * mean);
  r.welfare_stderr = std::sqrt(var / num_samples);
  return r;
}

}  // namespace nashspec
