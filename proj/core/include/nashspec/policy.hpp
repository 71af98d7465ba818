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

#ifndef NASHSPEC_POLICY_HPP_
#define NASHSPEC_POLICY_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nashspec/abstract_graph.hpp"
#include "nashspec/markov_game.hpp"

namespace nashspec {

struct QKey {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  bool operator==(const QKey&) const = default;
};

struct QKeyHash {
  std::size_t operator()(const QKey& k) const noexcept {
    std::uint64_t h = k.hi * 0x9E3779B97F4A7C15ull ^ (k.lo + 0x632BE59BD9B4E019ull + (k.hi << 6) + (k.hi >> 2));
    h ^= h >> 31;
    return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ull);
  }
};

struct QLearningParams {
  double epsilon = 0.15;
  double learning_rate = 0.1;
  double discount = 0.9;
};

// Tabular action values over sparse keys. Unseen keys read as zero.
class QTable {
 public:
  explicit QTable(int num_actions = 1) : num_actions_(num_actions) {}

  int num_actions() const { return num_actions_; }
  std::size_t size() const { return index_.size(); }
  bool contains(const QKey& k) const { return index_.count(k) != 0; }

  std::span<double> row(const QKey& k);
  // Empty span when unseen.
  std::span<const double> find(const QKey& k) const;

  // Lowest index among the maxima; 0 for unseen keys.
  int greedy(const QKey& k) const;
  // Like greedy, but unseen keys and ties that include `preferred` return it.
  int greedy_or(const QKey& k, int preferred) const;
  double max_value(const QKey& k) const;
  // Exploring choice; ties among the maxima (and unseen keys) break uniformly.
  int epsilon_greedy(const QKey& k, double epsilon, Rng& rng) const;
  void update(const QKey& k, int action, double target, double learning_rate);

  const std::unordered_map<QKey, std::size_t, QKeyHash>& index() const { return index_; }

 private:
  int num_actions_;
  std::unordered_map<QKey, std::size_t, QKeyHash> index_;
  std::vector<double> values_;
};

// Deterministic finite-state joint policy (M, alpha, sigma, m0) with
// integer memory ids. sigma may read the current state, so alpha(s, a, m)
// is the memory after acting at s.
class FiniteStatePolicy {
 public:
  virtual ~FiniteStatePolicy() = default;
  virtual int initial_memory() const = 0;
  virtual int action(StateId s, int m) const = 0;
  virtual int update(StateId s, int joint, int m) const = 0;
  // Memory ids handed out so far.
  virtual int num_memory_states() const = 0;
};

class FsmJointPolicy : public JointPolicy {
 public:
  explicit FsmJointPolicy(std::shared_ptr<const FiniteStatePolicy> p) : p_(std::move(p)), m_(p_->initial_memory()) {}
  void reset() override { m_ = p_->initial_memory(); }
  int act(StateId s, Rng&) override { return p_->action(s, m_); }
  void observe(StateId s, int joint) override { m_ = p_->update(s, joint, m_); }
  std::uint64_t memory_key() const override { return static_cast<std::uint64_t>(m_); }
  std::unique_ptr<JointPolicy> clone() const override { return std::make_unique<FsmJointPolicy>(*this); }
  int memory() const { return m_; }

 private:
  std::shared_ptr<const FiniteStatePolicy> p_;
  int m_;
};

// Greedy joint policy for one product edge over (state, tracker status).
struct EdgePolicy {
  int edge = -1;
  QTable q;
  bool reachable = true;
  double achieve_prob = 0.0;
  std::uint64_t steps = 0;

  static QKey key(StateId s, std::uint32_t status) { return {static_cast<std::uint64_t>(s), status}; }
  // Unseen (state, status) pairs play joint action 0.
  int act(StateId s, std::uint32_t status) const { return q.greedy(key(s, status)); }
};

// Executes the edge policies of a product path in order. Memory is the
// current edge index z and that edge's tracker status; on reaching s the
// tracker consumes L(s) first and z advances on achievement, so the policy
// of the next edge acts at the achievement state. After the last edge, or
// when an edge can no longer be achieved, the current edge policy keeps
// acting.
class PathPolicy : public FiniteStatePolicy {
 public:
  PathPolicy(const MarkovGame& game, std::shared_ptr<const ProductGraph> graph, std::vector<int> path,
             std::vector<std::shared_ptr<const EdgePolicy>> edge_policies);

  int initial_memory() const override { return 0; }
  int action(StateId s, int m) const override { return step(s, m).second; }
  int update(StateId s, int, int m) const override { return step(s, m).first; }
  int num_memory_states() const override { return static_cast<int>(memories_.size()); }

  const std::vector<int>& path() const { return path_; }
  const ProductGraph& graph() const { return *graph_; }
  // (edge index, tracker status) of a memory id.
  std::pair<int, std::uint32_t> memory(int m) const { return memories_.at(m); }

 private:
  // (next memory, action) for sigma and alpha at once.
  std::pair<int, int> step(StateId s, int m) const;
  int intern(int z, std::uint32_t status) const;

  const MarkovGame* game_;
  std::shared_ptr<const ProductGraph> graph_;
  std::vector<int> path_;
  std::vector<EdgeTracker> trackers_;
  std::vector<std::shared_ptr<const EdgePolicy>> policies_;

  mutable std::vector<std::pair<int, std::uint32_t>> memories_;
  mutable std::unordered_map<std::uint64_t, int> memory_ids_;
  mutable std::unordered_map<std::uint64_t, std::pair<int, int>> memo_;
};

}  // namespace nashspec

#endif  // NASHSPEC_POLICY_HPP_
