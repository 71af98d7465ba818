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

#ifndef NASHSPEC_ABSTRACT_GRAPH_HPP_
#define NASHSPEC_ABSTRACT_GRAPH_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nashspec/spec.hpp"

namespace nashspec {

// Either every state satisfies `a`, or a nonempty prefix satisfies `a` and
// the nonempty remainder satisfies `b`.
struct SafeSet {
  enum class Kind { kAlways, kConcat };
  Kind kind = Kind::kAlways;
  Predicate a;
  Predicate b;

  static SafeSet always(Predicate p) { return {Kind::kAlways, std::move(p), nullptr}; }
  static SafeSet concat(Predicate p, Predicate q) { return {Kind::kConcat, std::move(p), std::move(q)}; }

  bool contains(std::span<const AtomMask> seg) const;
};

SafeSet first(const SafeSet& z);
SafeSet conjoin(const SafeSet& z, const Predicate& p);
std::string to_string(const SafeSet& z, const PredicateTable* table = nullptr);

struct AbstractGraph {
  struct Edge {
    int from;
    int to;
    SafeSet safe;
  };

  int num_vertices = 0;
  int initial = 0;
  std::vector<Edge> edges;
  std::vector<char> is_final;
  std::vector<Predicate> beta;
  std::vector<SafeSet> final_safe;       // meaningful on final vertices
  std::vector<std::vector<int>> out;     // edge ids per vertex

  int add_vertex(Predicate subgoal);
  int add_edge(int from, int to, SafeSet safe);
  std::vector<int> topological_order() const;  // throws if cyclic
};

AbstractGraph spec_to_abstract_graph(const Spec& phi);
bool satisfies_graph(std::span<const AtomMask> labels, const AbstractGraph& g);
std::string to_text(const AbstractGraph& g, const PredicateTable* table = nullptr);

class PathBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Asynchronous product over a coalition. Members are listed in increasing
// agent order and tuple slot k belongs to members[k].
struct ProductGraph {
  struct Edge {
    int from;
    int to;
    std::vector<int> component_edge;  // edge id in the member graph, -1 if staying
    std::vector<int> progress;        // agents (not slots) that move
  };

  std::vector<int> members;
  std::vector<std::shared_ptr<const AbstractGraph>> graphs;  // per slot
  int num_vertices = 0;
  int initial = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> out;
  std::vector<char> is_final;

  std::vector<int> tuple(int v) const;
  int vertex_of(const std::vector<int>& tuple) const;
  std::vector<int> topological_order() const;
};

ProductGraph product(const std::vector<std::shared_ptr<const AbstractGraph>>& agent_graphs,
                     const std::vector<int>& coalition);

// Definition-level check that the whole segment achieves product edge e.
bool achieves_edge(std::span<const AtomMask> seg, const ProductGraph& g, int e);
// Smallest k such that seg[0..k] achieves e.
std::optional<int> min_achievement_index(std::span<const AtomMask> seg, const ProductGraph& g,
                                         int e);
// Path given as product edge ids from the initial vertex to a final vertex.
bool achieves_path(std::span<const AtomMask> labels, const ProductGraph& g,
                   const std::vector<int>& path);

std::vector<std::vector<int>> enumerate_paths(const ProductGraph& g, std::size_t cap = 100000);
std::string to_text(const ProductGraph& g, const PredicateTable* table = nullptr);

// Online detector for one product edge. Feed the labels of a segment one at
// a time; the first index where achieved() holds is the minimal index.
class EdgeTracker {
 public:
  struct Outcome {
    bool achieved = false;
    bool dead = false;
  };

  EdgeTracker() = default;
  EdgeTracker(const ProductGraph& g, int e);

  void reset() { status_ = 0; }
  Outcome step(AtomMask label);
  std::uint32_t status() const { return status_; }
  void set_status(std::uint32_t s) { status_ = s; }
  // Pure form of step for memory-based policies.
  Outcome advance(std::uint32_t& status, AtomMask label) const;

 private:
  struct Slot {
    bool progressing;
    SafeSet prefix;      // edge safe set (progressing)
    Predicate subgoal;   // beta of the target vertex (progressing)
    Predicate suffix;    // safe predicate after the witness / while staying
    bool need_positive;  // witness index must be > 0
  };
  std::vector<Slot> slots_;
  std::uint32_t status_ = 0;
};

}  // namespace nashspec

#endif  // NASHSPEC_ABSTRACT_GRAPH_HPP_
