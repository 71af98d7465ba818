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

#include <algorithm>
#include <stdexcept>

#include "nashspec/baselines.hpp"

namespace nashspec {

std::uint64_t pack_rm_states(const std::vector<int>& q) {
  if (q.size() * 12 <= 64) {
    std::uint64_t key = 0;
    bool fits = true;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i] < 0 || q[i] >= 4096) fits = false;
      key |= static_cast<std::uint64_t>(q[i] & 0xFFF) << (12 * i);
    }
    if (fits) return key;
  }
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (int v : q) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
    h *= 1099511628211ull;
  }
  return h;
}

QKey maqrm_key(StateId s, const std::vector<int>& q) {
  return {static_cast<std::uint64_t>(static_cast<std::uint32_t>(s)), pack_rm_states(q)};
}

std::optional<int> RmProduct::find(StateId s, const std::vector<int>& q) const {
  auto it = lookup.find(maqrm_key(s, q));
  if (it == lookup.end()) return std::nullopt;
  return it->second;
}

RmProduct rm_product(const EstimatedModel& model, const MarkovGame& game, const std::vector<RewardMachine>& rms,
                     std::size_t node_cap) {
  const int n = game.num_agents();
  if (static_cast<int>(rms.size()) != n) throw std::invalid_argument("one reward machine per agent");
  RmProduct p;
  p.num_agents = n;
  p.num_joint = model.num_joint;
  for (int i = 0; i < n; ++i) p.num_actions.push_back(game.num_actions(i));
  const auto& preds = game.predicates();

  auto intern = [&](StateId s, std::vector<int> q) {
    auto [it, inserted] = p.lookup.emplace(maqrm_key(s, q), static_cast<int>(p.nodes.size()));
    if (inserted) {
      if (p.nodes.size() >= node_cap) throw StateBudgetError("reward machine product exceeds the node cap");
      p.nodes.push_back({s, std::move(q)});
    }
    return it->second;
  };

  std::vector<int> q0(n);
  for (int i = 0; i < n; ++i) q0[i] = rms[i].initial();
  intern(model.states.at(0), q0);
  for (std::size_t k = 0; k < p.nodes.size(); ++k) {
    const StateId s = p.nodes[k].s;
    const std::vector<int> q = p.nodes[k].q;
    const AtomMask label = preds.label(s);
    std::vector<double> r(n);
    std::vector<int> q2(n);
    for (int i = 0; i < n; ++i) {
      r[i] = rms[i].reward(label, q[i]);
      q2[i] = rms[i].next(label, q[i]);
    }
    p.reward.push_back(std::move(r));
    std::vector<std::vector<std::pair<int, double>>> rows(p.num_joint);
    for (int a = 0; a < p.num_joint; ++a)
      for (const auto& [s2, pr] : model.next(s, a)) rows[a].emplace_back(intern(s2, q2), pr);
    p.trans.push_back(std::move(rows));
  }
  return p;
}

NviSolution nash_value_iteration(std::shared_ptr<const RmProduct> product, int horizon, double tol) {
  const RmProduct& p = *product;
  const int n = p.num_agents;
  const int N = static_cast<int>(p.nodes.size());
  NviSolution sol;
  sol.product = product;
  sol.stages = horizon + 1;
  sol.scoped = n > 2;
  sol.values.assign(sol.stages, std::vector<std::vector<double>>(N, std::vector<double>(n, 0.0)));
  sol.strategies.assign(horizon, std::vector<std::vector<std::vector<double>>>(N));
  sol.values[horizon] = p.reward;

  NormalFormGame g;
  g.num_actions = p.num_actions;
  g.payoffs.assign(n, std::vector<double>(p.num_joint, 0.0));
  for (int t = horizon - 1; t >= 0; --t) {
    const auto& next = sol.values[t + 1];
    for (int k = 0; k < N; ++k) {
      for (int a = 0; a < p.num_joint; ++a) {
        for (int i = 0; i < n; ++i) g.payoffs[i][a] = 0.0;
        for (const auto& [k2, pr] : p.trans[k][a])
          for (int i = 0; i < n; ++i) g.payoffs[i][a] += pr * next[k2][i];
      }
      NashResult r = best_nash_general_sum(g, tol);
      ++sol.stage_games;
      if (!r.found) ++sol.unsolved;
      if (!r.exact) ++sol.inexact;
      for (int i = 0; i < n; ++i) sol.values[t][k][i] = p.reward[k][i] + r.values[i];
      sol.strategies[t][k] = std::move(r.strategies);
    }
  }
  return sol;
}

NviPolicy::NviPolicy(const MarkovGame& game, std::shared_ptr<const NviSolution> sol, std::vector<RewardMachine> rms)
    : game_(&game), sol_(std::move(sol)), rms_(std::move(rms)) {
  reset();
}

void NviPolicy::reset() {
  q_.resize(rms_.size());
  for (std::size_t i = 0; i < rms_.size(); ++i) q_[i] = rms_[i].initial();
  t_ = 0;
}

int NviPolicy::act(StateId s, Rng& rng) {
  const int n = game_->num_agents();
  auto node = sol_->product->find(s, q_);
  if (!node || t_ >= static_cast<int>(sol_->strategies.size())) {
    ++fallbacks_;
    return 0;
  }
  const auto& mix = sol_->strategies[t_][*node];
  std::vector<int> a(n, 0);
  for (int i = 0; i < n; ++i) {
    double u = uniform01(rng), acc = 0.0;
    const auto& m = mix[i];
    a[i] = static_cast<int>(m.size()) - 1;
    for (std::size_t j = 0; j < m.size(); ++j) {
      acc += m[j];
      if (u < acc) {
        a[i] = static_cast<int>(j);
        break;
      }
    }
  }
  return game_->encode_joint(a);
}

void NviPolicy::observe(StateId s, int /*joint*/) {
  const AtomMask label = game_->predicates().label(s);
  for (std::size_t i = 0; i < rms_.size(); ++i) q_[i] = rms_[i].next(label, q_[i]);
  ++t_;
}

std::uint64_t NviPolicy::memory_key() const {
  return (pack_rm_states(q_) * 1000003ull) ^ static_cast<std::uint64_t>(t_);
}

}  // namespace nashspec
