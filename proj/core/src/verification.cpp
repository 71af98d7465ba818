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

#include "nashspec/verification.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace nashspec {

std::uint64_t bfs_sample_count(double num_states, double num_memory, double num_rm_states, double horizon,
                               double num_joint, double delta, double p) {
  if (!(delta > 0.0) || !(p > 0.0 && p < 1.0)) throw std::invalid_argument("need delta > 0 and 0 < p < 1");
  double s2 = num_states * num_states;
  double k = 2.0 * s2 * num_memory * num_memory * num_rm_states * num_rm_states * std::pow(horizon, 4) /
             (delta * delta) * std::log(2.0 * s2 * num_joint / p);
  if (k > 1.8e19) throw std::overflow_error("sample count does not fit in 64 bits");
  return static_cast<std::uint64_t>(std::ceil(k));
}

EstimatedModel bfs_estimate(const MarkovGame& game, std::uint64_t samples_per_pair, Rng& rng,
                            std::size_t state_cap) {
  if (samples_per_pair < 1) throw std::invalid_argument("samples per pair must be at least 1");
  EstimatedModel m;
  m.num_joint = game.num_joint_actions();
  m.samples_per_pair = samples_per_pair;
  std::deque<StateId> queue;
  auto discover = [&](StateId s) {
    if (m.index.count(s)) return;
    if (m.states.size() >= state_cap) throw StateBudgetError("state budget exceeded during estimation");
    m.index.emplace(s, static_cast<int>(m.states.size()));
    m.states.push_back(s);
    m.transitions.emplace_back();
    queue.push_back(s);
  };
  discover(game.initial_state());
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    std::vector<Distribution> rows(m.num_joint);
    for (int a = 0; a < m.num_joint; ++a) {
      std::map<StateId, std::uint64_t> counts;
      for (std::uint64_t k = 0; k < samples_per_pair; ++k) ++counts[game.sample_next(s, a, rng)];
      m.total_samples += samples_per_pair;
      for (const auto& [s2, c] : counts) {
        rows[a].emplace_back(s2, static_cast<double>(c) / samples_per_pair);
        discover(s2);
      }
    }
    m.transitions[m.index.at(s)] = std::move(rows);
  }
  return m;
}

namespace {

std::uint64_t node_key(StateId s, int m, int q, bool deviated) {
  if (s < 0 || s >= (1 << 24) || m < -1 || m + 1 >= (1 << 24) || q < 0 || q >= (1 << 15))
    throw std::length_error("punishment game node out of range");
  return (static_cast<std::uint64_t>(s) << 40) | (static_cast<std::uint64_t>(m + 1) << 16) |
         (static_cast<std::uint64_t>(q) << 1) | (deviated ? 1u : 0u);
}

}  // namespace

int PunishmentGame::joint_action(int a_dev, int a_pun) const {
  int joint = 0, stride = 1;
  for (int i = 0; i < static_cast<int>(num_actions.size()); ++i) {
    int a;
    if (i == agent) {
      a = a_dev;
    } else {
      a = a_pun % num_actions[i];
      a_pun /= num_actions[i];
    }
    joint += a * stride;
    stride *= num_actions[i];
  }
  return joint;
}

int PunishmentGame::punisher_index(int joint) const {
  int idx = 0, stride = 1;
  for (int i = 0; i < static_cast<int>(num_actions.size()); ++i) {
    int a = joint % num_actions[i];
    joint /= num_actions[i];
    if (i == agent) continue;
    idx += a * stride;
    stride *= num_actions[i];
  }
  return idx;
}

int PunishmentGame::decode_component(int i, int a_pun) const {
  for (int k = 0; k < static_cast<int>(num_actions.size()); ++k) {
    if (k == agent) continue;
    if (k == i) return a_pun % num_actions[k];
    a_pun /= num_actions[k];
  }
  throw std::out_of_range("agent index");
}

std::optional<int> PunishmentGame::find(StateId s, int m, int q, bool deviated) const {
  if (deviated && collapse_memory) m = -1;
  auto it = lookup.find(node_key(s, m, q, deviated));
  if (it == lookup.end()) return std::nullopt;
  return it->second;
}

ZeroSumGame PunishmentGame::to_zero_sum() const {
  ZeroSumGame z;
  z.num_states = static_cast<int>(nodes.size());
  z.max_actions = dev_actions;
  z.min_actions = pun_actions;
  z.horizon = stages;
  z.initial = 0;
  z.transitions.resize(nodes.size());
  z.rewards.resize(nodes.size());
  for (std::size_t x = 0; x < nodes.size(); ++x) {
    z.rewards[x].assign(dev_actions * pun_actions, reward[x]);
    for (int a = 0; a < dev_actions; ++a)
      for (int b = 0; b < pun_actions; ++b) z.transitions[x].push_back(next(static_cast<int>(x), a, b));
  }
  return z;
}

PunishmentGame construct_game(const EstimatedModel& model, const MarkovGame& game, int agent, const RewardMachine& rm,
                              const FiniteStatePolicy& policy, bool collapse_memory) {
  const int n = game.num_agents();
  if (agent < 0 || agent >= n) throw std::out_of_range("agent index");
  PunishmentGame g;
  g.agent = agent;
  g.stages = game.horizon() + 1;
  g.collapse_memory = collapse_memory;
  for (int i = 0; i < n; ++i) g.num_actions.push_back(game.num_actions(i));
  g.dev_actions = game.num_actions(agent);
  g.pun_actions = game.num_joint_actions() / g.dev_actions;
  const auto& preds = game.predicates();

  std::deque<int> queue;
  auto intern = [&](StateId s, int m, int q, bool dev) {
    if (dev && collapse_memory) m = -1;
    auto [it, inserted] = g.lookup.try_emplace(node_key(s, m, q, dev), static_cast<int>(g.nodes.size()));
    if (inserted) {
      g.nodes.push_back({s, m, q, dev});
      g.reward.push_back(rm.reward(preds.label(s), q));
      g.trans.emplace_back();
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern(game.initial_state(), policy.initial_memory(), rm.initial(), false);

  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    const auto node = g.nodes[x];
    const int q2 = rm.next(preds.label(node.s), node.q);
    std::vector<std::vector<std::pair<int, double>>> rows;
    if (!node.deviated) {
      const int rec = policy.action(node.s, node.m);
      const int rec_dev = game.component(rec, agent);
      for (int a = 0; a < g.dev_actions; ++a) {
        const int joint = game.with_component(rec, agent, a);
        const bool dev = a != rec_dev;
        const int m2 = policy.update(node.s, joint, node.m);
        std::vector<std::pair<int, double>> row;
        for (const auto& [s2, p] : model.next(node.s, joint)) row.emplace_back(intern(s2, m2, q2, dev), p);
        rows.push_back(std::move(row));
      }
    } else {
      for (int a = 0; a < g.dev_actions; ++a)
        for (int b = 0; b < g.pun_actions; ++b) {
          const int joint = g.joint_action(a, b);
          const int m2 = collapse_memory ? -1 : policy.update(node.s, joint, node.m);
          std::vector<std::pair<int, double>> row;
          for (const auto& [s2, p] : model.next(node.s, joint)) row.emplace_back(intern(s2, m2, q2, true), p);
          rows.push_back(std::move(row));
        }
    }
    g.trans[x] = std::move(rows);
  }
  return g;
}

PunishmentSolution punishment_value(std::shared_ptr<const PunishmentGame> gp) {
  const PunishmentGame& g = *gp;
  const int nn = static_cast<int>(g.nodes.size());
  PunishmentSolution sol;
  sol.values.assign(g.stages + 1, std::vector<double>(nn, 0.0));
  sol.min_policy.assign(g.stages, std::vector<std::vector<double>>(nn));
  MatrixGame stage(g.dev_actions, g.pun_actions);
  for (int t = g.stages - 1; t >= 0; --t) {
    const auto& next = sol.values[t + 1];
    auto& cur = sol.values[t];
    for (int x = 0; x < nn; ++x) {
      double best;
      if (!g.nodes[x].deviated) {
        best = -1e300;
        for (int a = 0; a < g.dev_actions; ++a) {
          double v = 0.0;
          for (const auto& [y, p] : g.trans[x][a]) v += p * next[y];
          best = std::max(best, v);
        }
      } else {
        for (int a = 0; a < g.dev_actions; ++a)
          for (int b = 0; b < g.pun_actions; ++b) {
            double v = 0.0;
            for (const auto& [y, p] : g.trans[x][a * g.pun_actions + b]) v += p * next[y];
            stage.at(a, b) = v;
          }
        StageOutcome o = solve_matrix_game(stage);
        best = o.value;
        sol.min_policy[t][x] = std::move(o.col_strategy);
      }
      cur[x] = g.reward[x] + best;
    }
  }
  sol.value = sol.values[0][0];
  sol.game = std::move(gp);
  return sol;
}

const std::vector<double>* PunishmentStrategy::lookup(int stage, StateId s, int m, int q) const {
  const auto& g = *sol_->game;
  if (stage < 0 || stage >= g.stages) return nullptr;
  auto x = g.find(s, m, q, true);
  if (!x) return nullptr;
  const auto& mix = sol_->min_policy[stage][*x];
  return mix.empty() ? nullptr : &mix;
}

int PunishmentStrategy::sample(int stage, StateId s, int m, int q, Rng& rng, bool* fallback) const {
  const auto* mix = lookup(stage, s, m, q);
  if (fallback) *fallback = mix == nullptr;
  const int np = sol_->game->pun_actions;
  if (!mix) return std::uniform_int_distribution<int>(0, np - 1)(rng);
  double u = uniform01(rng);
  for (int b = 0; b < np; ++b) {
    if (u < (*mix)[b]) return b;
    u -= (*mix)[b];
  }
  for (int b = np - 1; b >= 0; --b)
    if ((*mix)[b] > 0.0) return b;
  return 0;
}

int PunishmentStrategy::component(int agent, int a_pun) const {
  const auto& g = *sol_->game;
  if (agent == g.agent) throw std::invalid_argument("the deviator is not a punisher");
  return g.decode_component(agent, a_pun);
}

PunishmentStrategy pun_strat(std::shared_ptr<const PunishmentSolution> sol) { return PunishmentStrategy(std::move(sol)); }

JoinedPolicy::JoinedPolicy(const MarkovGame& game, std::shared_ptr<const FiniteStatePolicy> base,
                           std::vector<RewardMachine> rms, std::vector<PunishmentStrategy> tau)
    : game_(&game), base_(std::move(base)), rms_(std::move(rms)), tau_(std::move(tau)) {
  if (static_cast<int>(rms_.size()) != game.num_agents() || static_cast<int>(tau_.size()) != game.num_agents())
    throw std::invalid_argument("one reward machine and punishment strategy per agent");
  reset();
}

void JoinedPolicy::reset() {
  m_ = base_->initial_memory();
  t_ = 0;
  q_.clear();
  for (const auto& rm : rms_) q_.push_back(rm.initial());
  deviator_ = -1;
  detected_at_ = -1;
}

int JoinedPolicy::act(StateId s, Rng& rng) {
  const int rec = base_->action(s, m_);
  if (deviator_ < 0) return rec;
  const auto& tau = tau_[deviator_];
  bool fallback = false;
  int b = tau.sample(t_, s, m_, q_[deviator_], rng, &fallback);
  if (fallback) ++fallbacks_;
  return tau.solution().game->joint_action(game_->component(rec, deviator_), b);
}

void JoinedPolicy::observe(StateId s, int joint) {
  if (deviator_ < 0) {
    const int rec = base_->action(s, m_);
    if (joint != rec) {
      for (int i = 0; i < game_->num_agents(); ++i)
        if (game_->component(joint, i) != game_->component(rec, i)) {
          deviator_ = i;
          detected_at_ = t_;
          break;
        }
    }
  }
  m_ = base_->update(s, joint, m_);
  const AtomMask label = game_->predicates().label(s);
  for (std::size_t i = 0; i < rms_.size(); ++i) q_[i] = rms_[i].next(label, q_[i]);
  ++t_;
}

std::uint64_t JoinedPolicy::memory_key() const {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(m_)) << 8) | static_cast<std::uint64_t>(deviator_ + 1);
}

VerificationReport verify_nash(const MarkovGame& game, std::shared_ptr<const FiniteStatePolicy> policy,
                               const std::vector<CompiledSpec>& specs, const EstimatedModel& model,
                               const VerifyConfig& config, Rng& rng) {
  if (!(config.delta > 0.0 && config.delta < config.epsilon)) throw std::invalid_argument("need 0 < delta < epsilon");
  const int n = game.num_agents();
  if (static_cast<int>(specs.size()) != n) throw std::invalid_argument("one spec per agent");
  VerificationReport r;
  const std::uint64_t before = game.samples_drawn();
  FsmJointPolicy runner(policy);
  r.J = estimate_scores(game, runner, specs, config.score_samples, rng).J;
  r.score_steps = game.samples_drawn() - before;
  r.is_nash = true;
  for (int j = 0; j < n; ++j) {
    auto g = std::make_shared<const PunishmentGame>(
        construct_game(model, game, j, specs[j].rm, *policy, config.collapse_memory));
    auto sol = std::make_shared<const PunishmentSolution>(punishment_value(g));
    r.deviation.push_back(sol->value);
    r.margin.push_back(r.J[j] + config.epsilon - config.delta - sol->value);
    r.tau.push_back(pun_strat(sol));
    if (r.margin.back() < 0.0) {
      r.is_nash = false;
      if (config.stop_early) break;
    }
  }
  return r;
}

SearchResult high_nash_search(const MarkovGame& game, const std::vector<CompiledSpec>& specs,
                              const SearchConfig& config, Rng& rng) {
  SearchResult out;
  auto en = prioritized_enumeration(game, specs, config.enumeration, rng);
  out.enumeration = en.stats;
  std::optional<EstimatedModel> model;
  auto& heap = en.candidates;
  for (const Candidate* c : heap.ordered()) out.ranked.push_back(*c);
  out.verdicts.assign(out.ranked.size(), -1);
  while (!heap.empty()) {
    if (config.max_candidates && static_cast<std::size_t>(out.candidates_checked) >= config.max_candidates) break;
    if (config.cancelled && config.cancelled()) {
      out.cancelled = true;
      break;
    }
    Candidate c = heap.pop();
    ++out.candidates_checked;
    if (!model) {
      std::uint64_t k = config.verify.samples_per_pair;
      if (config.verify.formula_k) {
        // Sizes from a light exploration pass and the candidate's memory.
        Rng probe(rng());
        auto rough = bfs_estimate(game, 100, probe);
        int q_max = 0;
        for (const auto& s : specs) q_max = std::max(q_max, s.rm.num_states());
        k = bfs_sample_count(static_cast<double>(rough.states.size()), c.path.size() + 1.0, q_max, game.horizon(),
                             game.num_joint_actions(), config.verify.delta, config.verify.failure_prob);
      }
      const std::uint64_t before = game.samples_drawn();
      model = bfs_estimate(game, k, rng);
      out.estimation_steps = game.samples_drawn() - before;
    }
    const std::uint64_t before = game.samples_drawn();
    auto report = verify_nash(game, c.policy, specs, *model, config.verify, rng);
    out.verification_steps += game.samples_drawn() - before;
    out.verdicts[out.candidates_checked - 1] = report.is_nash ? 1 : 0;
    if (!report.is_nash) continue;
    std::vector<RewardMachine> rms;
    for (const auto& s : specs) rms.push_back(s.rm);
    out.policy = std::make_shared<JoinedPolicy>(game, c.policy, std::move(rms), report.tau);
    out.found = true;
    out.candidate = std::move(c);
    out.report = std::move(report);
    return out;
  }
  return out;
}

}  // namespace nashspec
