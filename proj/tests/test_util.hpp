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


#ifndef NASHSPEC_TESTS_TEST_UTIL_HPP_
#define NASHSPEC_TESTS_TEST_UTIL_HPP_

#include <random>
#include <span>
#include <string>
#include <vector>

#include "nashspec/markov_game.hpp"
#include "nashspec/spec.hpp"
#include "nashspec/verification.hpp"

namespace nashspec::testing {

// Direct recursive reading of the semantics, exponential but obviously right.
inline bool naive_satisfies(std::span<const AtomMask> z, const Spec& phi) {
  const std::size_t n = z.size();
  switch (phi->kind) {
    case SpecNode::Kind::kAchieve:
      for (AtomMask l : z)
        if (eval(phi->pred, l)) return true;
      return false;
    case SpecNode::Kind::kEnsuring:
      for (AtomMask l : z)
        if (!eval(phi->pred, l)) return false;
      return naive_satisfies(z, phi->lhs);
    case SpecNode::Kind::kSeq:
      for (std::size_t i = 0; i + 1 < n; ++i)
        if (naive_satisfies(z.subspan(0, i + 1), phi->lhs) && naive_satisfies(z.subspan(i + 1), phi->rhs))
          return true;
      return false;
    case SpecNode::Kind::kChoice:
      return naive_satisfies(z, phi->lhs) || naive_satisfies(z, phi->rhs);
  }
  return false;
}

// Explicit game with states 0..n-1 and a dense table trans[s][joint].
class TabularGame : public MarkovGame {
 public:
  TabularGame(std::vector<int> actions, std::vector<std::vector<Distribution>> trans, int horizon)
      : trans_(std::move(trans)) {
    set_actions(std::move(actions));
    set_horizon(horizon);
    set_initial(0);
  }
  const Distribution& transition(StateId s, int joint) const override { return trans_.at(s).at(joint); }
  std::string state_name(StateId s) const override { return "s" + std::to_string(s); }
  int num_known_states() const override { return static_cast<int>(trans_.size()); }
  void add_atom(std::string name, std::vector<StateId> members) {
    predicates().add(std::move(name), [members](StateId s) {
      for (StateId m : members)
        if (m == s) return true;
      return false;
    });
  }

 private:
  std::vector<std::vector<Distribution>> trans_;
};

// Exact transition model over every reachable state, for oracles.
inline EstimatedModel exact_model(const MarkovGame& g) {
  EstimatedModel m;
  m.num_joint = g.num_joint_actions();
  m.states.push_back(g.initial_state());
  m.index[g.initial_state()] = 0;
  for (std::size_t k = 0; k < m.states.size(); ++k) {
    std::vector<Distribution> rows;
    for (int a = 0; a < m.num_joint; ++a) {
      rows.push_back(g.transition(m.states[k], a));
      for (const auto& [s2, p] : rows.back())
        if (m.index.emplace(s2, static_cast<int>(m.states.size())).second) m.states.push_back(s2);
    }
    m.transitions.push_back(std::move(rows));
  }
  return m;
}

inline Predicate random_predicate(std::mt19937_64& rng, int atoms, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 1);
  switch (pick(rng)) {
    case 0:
    case 1:
      return p_atom(std::uniform_int_distribution<int>(0, atoms - 1)(rng));
    case 2:
      return p_not(random_predicate(rng, atoms, depth - 1));
    case 3:
      return p_and(random_predicate(rng, atoms, depth - 1), random_predicate(rng, atoms, depth - 1));
    case 4:
      return p_or(random_predicate(rng, atoms, depth - 1), random_predicate(rng, atoms, depth - 1));
    default:
      return std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? p_true() : p_atom(0);
  }
}

// Random spec with at most `ops` spec operators.
inline Spec random_spec(std::mt19937_64& rng, int atoms, int ops) {
  if (ops <= 1) return achieve(random_predicate(rng, atoms, 1));
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0:
      return achieve(random_predicate(rng, atoms, 1));
    case 1:
      return ensuring(random_spec(rng, atoms, ops - 1), random_predicate(rng, atoms, 1));
    case 2: {
      int left = std::uniform_int_distribution<int>(1, ops - 2 > 0 ? ops - 2 : 1)(rng);
      return seq(random_spec(rng, atoms, left), random_spec(rng, atoms, ops - 1 - left));
    }
    default: {
      int left = std::uniform_int_distribution<int>(1, ops - 2 > 0 ? ops - 2 : 1)(rng);
      return choice(random_spec(rng, atoms, left), random_spec(rng, atoms, ops - 1 - left));
    }
  }
}

// Calls f on every label word of length 1..max_len over the first
// `alphabet` masks.
template <class F>
void for_each_word(int alphabet, int max_len, F&& f) {
  std::vector<AtomMask> w;
  for (int len = 1; len <= max_len; ++len) {
    w.assign(len, 0);
    while (true) {
      f(std::span<const AtomMask>(w));
      int k = 0;
      while (k < len && ++w[k] == static_cast<AtomMask>(alphabet)) w[k++] = 0;
      if (k == len) break;
    }
  }
}

}  // namespace nashspec::testing

#endif  // NASHSPEC_TESTS_TEST_UTIL_HPP_
