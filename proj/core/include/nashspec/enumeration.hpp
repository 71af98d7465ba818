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

#ifndef NASHSPEC_ENUMERATION_HPP_
#define NASHSPEC_ENUMERATION_HPP_

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "nashspec/abstract_graph.hpp"
#include "nashspec/markov_game.hpp"
#include "nashspec/policy.hpp"

namespace nashspec {

struct EnumerationConfig {
  std::uint64_t edge_budget = 20000;  // sample steps per edge
  QLearningParams q;
  int welfare_samples = 1000;
  int reach_samples = 1000;
  std::size_t path_cap = 100000;
  // Step cap per learning or reach episode; 0 uses the game horizon.
  int episode_cap = 0;
};

class UnreachableEdgeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

StateId sample_from(const Distribution& d, Rng& rng);
// Uniform average of distributions, merged and sorted by state.
Distribution average(const std::vector<Distribution>& ds);

// Q-learning over joint actions from start states drawn from eta, reward 1
// when the segment achieves the edge. Keys are (state, tracker status).
EdgePolicy learn_edge_policy(const MarkovGame& game, const ProductGraph& g, int e, const Distribution& eta,
                             const EnumerationConfig& config, Rng& rng);

struct ReachResult {
  Distribution distribution;  // state at the first achievement index
  int hits = 0;
  int rollouts = 0;
};

// Throws UnreachableEdgeError when no rollout achieves the edge.
ReachResult reach_distribution(const MarkovGame& game, const ProductGraph& g, int e, const EdgePolicy& policy,
                               const Distribution& eta, int num_samples, int episode_cap, Rng& rng);

std::shared_ptr<PathPolicy> path_to_policy(const MarkovGame& game, std::shared_ptr<const ProductGraph> g,
                                           const std::vector<int>& path,
                                           const std::vector<std::shared_ptr<const EdgePolicy>>& edge_policies);

struct Candidate {
  std::vector<int> coalition;
  std::shared_ptr<const ProductGraph> graph;  // null for the empty coalition
  std::vector<int> path;
  std::shared_ptr<const PathPolicy> policy;
  std::vector<std::shared_ptr<const EdgePolicy>> edge_policies;
  ScoreReport score;
};

// Max-heap by estimated welfare; equal welfare pops the larger coalition
// first, then the earlier insertion.
class RankedCandidateList {
 public:
  void push(Candidate c);
  Candidate pop();
  const Candidate& top() const;
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  // Candidates in pop order, without consuming.
  std::vector<const Candidate*> ordered() const;

 private:
  struct Entry {
    Candidate c;
    std::uint64_t seq;
  };
  static bool before(const Entry& a, const Entry& b);
  std::vector<Entry> heap_;
  std::uint64_t seq_ = 0;
};

struct EnumerationStats {
  std::uint64_t sample_steps = 0;  // simulator steps spent
  int coalitions = 0;
  int edges_learned = 0;
  int edges_skipped = 0;
  int paths = 0;
  int paths_skipped = 0;
  std::vector<std::string> warnings;
};

struct EnumerationResult {
  RankedCandidateList candidates;
  EnumerationStats stats;
};

EnumerationResult prioritized_enumeration(const MarkovGame& game, const std::vector<CompiledSpec>& specs,
                                          const EnumerationConfig& config, Rng& rng);

}  // namespace nashspec

#endif  // NASHSPEC_ENUMERATION_HPP_
