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

#ifndef NASHSPEC_SPEC_HPP_
#define NASHSPEC_SPEC_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nashspec {

using StateId = std::int32_t;
// Bit k is the truth value of atom k of a PredicateTable.
using AtomMask = std::uint64_t;

inline constexpr int kMaxAtoms = 64;

struct AtomicPredicate {
  std::string name;
  std::function<bool(StateId)> eval;
};

// Named atoms over an environment's state ids. Labels are cached per state.
class PredicateTable {
 public:
  int add(std::string name, std::function<bool(StateId)> eval);
  std::optional<int> find(std::string_view name) const;
  const AtomicPredicate& at(int id) const { return atoms_.at(id); }
  int size() const { return static_cast<int>(atoms_.size()); }

  AtomMask label(StateId s) const;
  std::vector<AtomMask> labels(std::span<const StateId> states) const;

 private:
  std::vector<AtomicPredicate> atoms_;
  std::unordered_map<std::string, int> index_;
  mutable std::vector<AtomMask> cache_;
  mutable std::vector<char> cached_;
};

struct PredNode;
using Predicate = std::shared_ptr<const PredNode>;

struct PredNode {
  enum class Kind { kTrue, kFalse, kAtom, kNot, kAnd, kOr };
  Kind kind;
  int atom = -1;
  Predicate lhs;
  Predicate rhs;
};

Predicate p_true();
Predicate p_false();
Predicate p_atom(int atom);
Predicate p_not(Predicate p);
Predicate p_and(Predicate a, Predicate b);
Predicate p_or(Predicate a, Predicate b);

bool eval(const Predicate& p, AtomMask label);
void collect_atoms(const Predicate& p, std::set<int>& out);
bool equal(const Predicate& a, const Predicate& b);
int predicate_size(const Predicate& p);
// Atom names come from `table` when given, otherwise atoms print as a<k>.
std::string to_string(const Predicate& p, const PredicateTable* table = nullptr);

struct SpecNode;
using Spec = std::shared_ptr<const SpecNode>;

struct SpecNode {
  enum class Kind { kAchieve, kEnsuring, kSeq, kChoice };
  Kind kind;
  Predicate pred;  // achieve target or ensuring guard
  Spec lhs;        // ensuring body, seq/choice left
  Spec rhs;        // seq/choice right
};

Spec achieve(Predicate b);
Spec ensuring(Spec phi, Predicate b);
Spec seq(Spec a, Spec b);
Spec choice(Spec a, Spec b);

bool equal(const Spec& a, const Spec& b);
std::set<int> atoms_of(const Spec& phi);

// One node per spec operator plus one per predicate node (atoms, constants
// and connectives). achieve p has size 2.
int spec_size(const Spec& phi);
// Spec operators only. seq(achieve p, achieve q) has operator count 3.
int spec_operator_count(const Spec& phi);

std::string to_string(const Spec& phi, const PredicateTable* table = nullptr);

// states has t+1 entries, actions t entries (joint action ids).
struct Trajectory {
  std::vector<StateId> states;
  std::vector<int> actions;

  int t() const { return static_cast<int>(states.size()) - 1; }
  // Inclusive state slice s_i..s_j with the actions between them.
  Trajectory slice(int i, int j) const;
};

// Label-sequence satisfaction. labels holds L(s_0), ..., L(s_t).
bool satisfies(std::span<const AtomMask> labels, const Spec& phi);
bool satisfies(const Trajectory& zeta, const Spec& phi,
               const PredicateTable& table);

// For every prefix end k, whether labels[0..k] satisfies phi.
std::vector<char> satisfied_prefixes(std::span<const AtomMask> labels,
                                     const Spec& phi);

}  // namespace nashspec

#endif  // NASHSPEC_SPEC_HPP_
