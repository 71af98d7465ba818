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

#ifndef NASHSPEC_AUTOMATA_HPP_
#define NASHSPEC_AUTOMATA_HPP_

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nashspec/spec.hpp"

namespace nashspec {

inline constexpr int kDefaultStateCap = 4096;
// Guards are checked over every assignment of the atoms they mention.
inline constexpr int kMaxGuardAtoms = 16;

class AutomatonBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Guard-labelled automaton. A run reads one label per trajectory state and
// accepts when it ends in an accepting state; the empty word is read as the
// initial state.
struct FiniteAutomaton {
  struct Edge {
    int from;
    Predicate guard;
    int to;
  };

  int num_states = 0;
  std::vector<Edge> edges;
  int initial = 0;
  std::vector<char> accepting;
  bool deterministic = false;
  std::vector<int> atoms;  // sorted atom ids the guards range over

  int add_state(bool accept = false);
  void add_edge(int from, Predicate guard, int to);

  int num_assignments() const { return 1 << atoms.size(); }
  // Index of a label restricted to `atoms`, bit k for atoms[k].
  int assignment_of(AtomMask label) const;
  AtomMask label_of_assignment(int assignment) const;

  // Successor states of q under a label (any number for an NFA).
  std::vector<int> successors(int q, AtomMask label) const;
  bool accepts(std::span<const AtomMask> labels) const;

  // Dense successor table for deterministic complete automata,
  // step_table[q * num_assignments() + assignment]. Built by compile().
  std::vector<int> step_table;
  void compile();
  int step(int q, AtomMask label) const {
    return step_table[static_cast<std::size_t>(q) * num_assignments() + assignment_of(label)];
  }
};

// Eventually / always / sequencing / choice induction, each composite case
// followed by determinization, then completion.
FiniteAutomaton spec_to_dfa(const Spec& phi, int state_cap = kDefaultStateCap);
// The automaton before the final determinization and completion.
FiniteAutomaton spec_to_nfa(const Spec& phi, int state_cap = kDefaultStateCap);

FiniteAutomaton determinize(const FiniteAutomaton& nfa, int state_cap = kDefaultStateCap);
FiniteAutomaton complete(const FiniteAutomaton& dfa);

// Number of edges of q whose guard holds on the assignment.
int successor_count(const FiniteAutomaton& a, int q, int assignment);
bool is_deterministic(const FiniteAutomaton& a);
bool is_complete(const FiniteAutomaton& a);

// Minimal DNF over `atoms` for a set of assignments (indexed as above).
Predicate assignments_to_dnf(const std::vector<char>& members, const std::vector<int>& atoms);

// JSON document with states, initial, accepting and guarded edges.
std::string automaton_to_json(const FiniteAutomaton& a, const PredicateTable* table = nullptr);

// Reward machine over Q plus an absorbing dead state. The update reads the
// label of the current environment state and ignores the joint action.
class RewardMachine {
 public:
  RewardMachine() = default;
  explicit RewardMachine(std::shared_ptr<const FiniteAutomaton> dfa);

  int num_states() const { return dfa_->num_states + 1; }
  int initial() const { return dfa_->initial; }
  int dead() const { return dfa_->num_states; }
  bool accepting(int q) const { return q != dead() && dfa_->accepting[q]; }
  // True when q accepts and every label keeps it in place.
  bool accepting_sink(int q) const { return q != dead() && sink_[q] && dfa_->accepting[q]; }

  int next(AtomMask label, int q) const { return q == dead() ? q : dfa_->step(q, label); }
  int update(AtomMask label, int /*joint_action*/, int q) const { return next(label, q); }
  int reward(AtomMask label, int q) const;

  const FiniteAutomaton& dfa() const { return *dfa_; }

 private:
  std::shared_ptr<const FiniteAutomaton> dfa_;
  std::vector<char> sink_;
};

RewardMachine dfa_to_rm(const FiniteAutomaton& dfa);
RewardMachine spec_to_rm(const Spec& phi, int state_cap = kDefaultStateCap);

// Sum of rewards along L(s_0..s_t). Each reward is emitted as its label is
// consumed, so the last state counts; games built on the RM agree with this.
int rm_total_reward(const RewardMachine& rm, std::span<const AtomMask> labels);

}  // namespace nashspec

#endif  // NASHSPEC_AUTOMATA_HPP_
