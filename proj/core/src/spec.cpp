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

#include "nashspec/spec.hpp"

#include <stdexcept>
#include <unordered_map>

namespace nashspec {

int PredicateTable::add(std::string name, std::function<bool(StateId)> eval) {
  if (index_.count(name)) throw std::invalid_argument("duplicate atom: " + name);
  if (size() >= kMaxAtoms) throw std::length_error("too many atoms");
  int id = size();
  index_.emplace(name, id);
  atoms_.push_back({std::move(name), std::move(eval)});
  cache_.clear();
  cached_.clear();
  return id;
}

std::optional<int> PredicateTable::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

AtomMask PredicateTable::label(StateId s) const {
  if (s < 0) throw std::out_of_range("negative state id");
  auto idx = static_cast<std::size_t>(s);
  if (idx >= cached_.size()) {
    cached_.resize(idx + 1, 0);
    cache_.resize(idx + 1, 0);
  }
  if (!cached_[idx]) {
    AtomMask m = 0;
    for (int k = 0; k < size(); ++k)
      if (atoms_[k].eval(s)) m |= AtomMask{1} << k;
    cache_[idx] = m;
    cached_[idx] = 1;
  }
  return cache_[idx];
}

std::vector<AtomMask> PredicateTable::labels(std::span<const StateId> states) const {
  std::vector<AtomMask> out;
  out.reserve(states.size());
  for (StateId s : states) out.push_back(label(s));
  return out;
}

namespace {

Predicate make_pred(PredNode::Kind k, int atom = -1, Predicate l = nullptr,
                    Predicate r = nullptr) {
  return std::make_shared<const PredNode>(PredNode{k, atom, std::move(l), std::move(r)});
}

Spec make_spec(SpecNode::Kind k, Predicate p, Spec l, Spec r) {
  return std::make_shared<const SpecNode>(
      SpecNode{k, std::move(p), std::move(l), std::move(r)});
}

}  // namespace

Predicate p_true() {
  static const Predicate t = make_pred(PredNode::Kind::kTrue);
  return t;
}

Predicate p_false() {
  static const Predicate f = make_pred(PredNode::Kind::kFalse);
  return f;
}

Predicate p_atom(int atom) {
  if (atom < 0 || atom >= kMaxAtoms) throw std::out_of_range("atom id");
  return make_pred(PredNode::Kind::kAtom, atom);
}

Predicate p_not(Predicate p) { return make_pred(PredNode::Kind::kNot, -1, std::move(p)); }

Predicate p_and(Predicate a, Predicate b) {
  return make_pred(PredNode::Kind::kAnd, -1, std::move(a), std::move(b));
}

Predicate p_or(Predicate a, Predicate b) {
  return make_pred(PredNode::Kind::kOr, -1, std::move(a), std::move(b));
}

bool eval(const Predicate& p, AtomMask label) {
  switch (p->kind) {
    case PredNode::Kind::kTrue: return true;
    case PredNode::Kind::kFalse: return false;
    case PredNode::Kind::kAtom: return (label >> p->atom) & 1;
    case PredNode::Kind::kNot: return !eval(p->lhs, label);
    case PredNode::Kind::kAnd: return eval(p->lhs, label) && eval(p->rhs, label);
    case PredNode::Kind::kOr: return eval(p->lhs, label) || eval(p->rhs, label);
  }
  return false;
}

void collect_atoms(const Predicate& p, std::set<int>& out) {
  if (!p) return;
  if (p->kind == PredNode::Kind::kAtom) out.insert(p->atom);
  collect_atoms(p->lhs, out);
  collect_atoms(p->rhs, out);
}

bool equal(const Predicate& a, const Predicate& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind || a->atom != b->atom) return false;
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

int predicate_size(const Predicate& p) {
  if (!p) return 0;
  return 1 + predicate_size(p->lhs) + predicate_size(p->rhs);
}

namespace {

// Precedence: or 1, and 2, not/atom 3.
void print_pred(const Predicate& p, const PredicateTable* table, int parent,
                std::string& out) {
  auto open = [&](int prec) { if (prec < parent) out += '('; };
  auto close = [&](int prec) { if (prec < parent) out += ')'; };
  switch (p->kind) {
    case PredNode::Kind::kTrue: out += "true"; return;
    case PredNode::Kind::kFalse: out += "false"; return;
    case PredNode::Kind::kAtom:
      out += table ? table->at(p->atom).name : "a" + std::to_string(p->atom);
      return;
    case PredNode::Kind::kNot:
      out += "not ";
      print_pred(p->lhs, table, 3, out);
      return;
    case PredNode::Kind::kAnd:
      open(2);
      print_pred(p->lhs, table, 2, out);
      out += " and ";
      print_pred(p->rhs, table, 3, out);
      close(2);
      return;
    case PredNode::Kind::kOr:
      open(1);
      print_pred(p->lhs, table, 1, out);
      out += " or ";
      print_pred(p->rhs, table, 2, out);
      close(1);
      return;
  }
}

// Precedence: or 1, ; 2, ensuring 3, achieve 4.
void print_spec(const Spec& s, const PredicateTable* table, int parent,
                std::string& out) {
  auto wrap = [&](int prec, auto&& body) {
    if (prec < parent) out += '(';
    body();
    if (prec < parent) out += ')';
  };
  switch (s->kind) {
    case SpecNode::Kind::kAchieve:
      out += "achieve ";
      print_pred(s->pred, table, 3, out);
      return;
    case SpecNode::Kind::kEnsuring:
      wrap(3, [&] {
        print_spec(s->lhs, table, 3, out);
        out += " ensuring ";
        print_pred(s->pred, table, 3, out);
      });
      return;
    case SpecNode::Kind::kSeq:
      wrap(2, [&] {
        print_spec(s->lhs, table, 2, out);
        out += " ; ";
        print_spec(s->rhs, table, 3, out);
      });
      return;
    case SpecNode::Kind::kChoice:
      wrap(1, [&] {
        print_spec(s->lhs, table, 1, out);
        out += " or ";
        print_spec(s->rhs, table, 2, out);
      });
      return;
  }
}

}  // namespace

std::string to_string(const Predicate& p, const PredicateTable* table) {
  std::string out;
  print_pred(p, table, 0, out);
  return out;
}

Spec achieve(Predicate b) { return make_spec(SpecNode::Kind::kAchieve, std::move(b), nullptr, nullptr); }

Spec ensuring(Spec phi, Predicate b) {
  return make_spec(SpecNode::Kind::kEnsuring, std::move(b), std::move(phi), nullptr);
}

Spec seq(Spec a, Spec b) { return make_spec(SpecNode::Kind::kSeq, nullptr, std::move(a), std::move(b)); }

Spec choice(Spec a, Spec b) {
  return make_spec(SpecNode::Kind::kChoice, nullptr, std::move(a), std::move(b));
}

bool equal(const Spec& a, const Spec& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  if (static_cast<bool>(a->pred) != static_cast<bool>(b->pred)) return false;
  if (a->pred && !equal(a->pred, b->pred)) return false;
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

std::set<int> atoms_of(const Spec& phi) {
  std::set<int> out;
  std::function<void(const Spec&)> walk = [&](const Spec& s) {
    if (!s) return;
    collect_atoms(s->pred, out);
    walk(s->lhs);
    walk(s->rhs);
  };
  walk(phi);
  return out;
}

int spec_size(const Spec& phi) {
  if (!phi) return 0;
  return 1 + predicate_size(phi->pred) + spec_size(phi->lhs) + spec_size(phi->rhs);
}

int spec_operator_count(const Spec& phi) {
  if (!phi) return 0;
  return 1 + spec_operator_count(phi->lhs) + spec_operator_count(phi->rhs);
}

std::string to_string(const Spec& phi, const PredicateTable* table) {
  std::string out;
  print_spec(phi, table, 0, out);
  return out;
}

Trajectory Trajectory::slice(int i, int j) const {
  if (i < 0 || j < i || j > t()) throw std::out_of_range("trajectory slice");
  Trajectory out;
  out.states.assign(states.begin() + i, states.begin() + j + 1);
  if (!actions.empty()) out.actions.assign(actions.begin() + i, actions.begin() + j);
  return out;
}

namespace {

// ends(phi, a)[b] is true iff labels[a..b] satisfies phi. Memoized per node
// and start index, so nested sequencing stays polynomial.
class EndSets {
 public:
  explicit EndSets(std::span<const AtomMask> labels) : labels_(labels) {}

  const std::vector<char>& ends(const SpecNode* node, int a) {
    auto& per_node = memo_[node];
    if (per_node.empty()) per_node.resize(labels_.size());
    auto& slot = per_node[a];
    if (!slot.empty()) return slot;
    std::vector<char> out(labels_.size(), 0);
    const int n = static_cast<int>(labels_.size());
    switch (node->kind) {
      case SpecNode::Kind::kAchieve: {
        int first = -1;
        for (int i = a; i < n; ++i)
          if (eval(node->pred, labels_[i])) { first = i; break; }
        if (first >= 0)
          for (int b = first; b < n; ++b) out[b] = 1;
        break;
      }
      case SpecNode::Kind::kEnsuring: {
        const auto& inner = ends(node->lhs.get(), a);
        for (int b = a; b < n; ++b) {
          if (!eval(node->pred, labels_[b])) break;
          out[b] = inner[b];
        }
        break;
      }
      case SpecNode::Kind::kSeq: {
        std::vector<char> first = ends(node->lhs.get(), a);
        for (int i = a; i + 1 < n; ++i) {
          if (!first[i]) continue;
          const auto& second = ends(node->rhs.get(), i + 1);
          for (int b = i + 1; b < n; ++b) out[b] |= second[b];
        }
        break;
      }
      case SpecNode::Kind::kChoice: {
        std::vector<char> l = ends(node->lhs.get(), a);
        const auto& r = ends(node->rhs.get(), a);
        for (int b = a; b < n; ++b) out[b] = l[b] | r[b];
        break;
      }
    }
    // Recursive calls may have grown memo_; re-fetch the slot.
    auto& fresh = memo_[node][a];
    fresh = std::move(out);
    return fresh;
  }

 private:
  std::span<const AtomMask> labels_;
  std::unordered_map<const SpecNode*, std::vector<std::vector<char>>> memo_;
};

}  // namespace

std::vector<char> satisfied_prefixes(std::span<const AtomMask> labels, const Spec& phi) {
  if (labels.empty()) return {};
  EndSets sets(labels);
  return sets.ends(phi.get(), 0);
}

bool satisfies(std::span<const AtomMask> labels, const Spec& phi) {
  if (labels.empty()) throw std::invalid_argument("empty trajectory");
  EndSets sets(labels);
  return sets.ends(phi.get(), 0).back();
}

bool satisfies(const Trajectory& zeta, const Spec& phi, const PredicateTable& table) {
  auto labels = table.labels(zeta.states);
  return satisfies(labels, phi);
}

}  // namespace nashspec
