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

#include "nashspec/automata.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <tuple>

#include "json.hpp"

namespace nashspec {

int FiniteAutomaton::add_state(bool accept) {
  accepting.push_back(accept ? 1 : 0);
  return num_states++;
}

void FiniteAutomaton::add_edge(int from, Predicate guard, int to) {
  edges.push_back({from, std::move(guard), to});
}

int FiniteAutomaton::assignment_of(AtomMask label) const {
  int idx = 0;
  for (std::size_t k = 0; k < atoms.size(); ++k)
    if ((label >> atoms[k]) & 1) idx |= 1 << k;
  return idx;
}

AtomMask FiniteAutomaton::label_of_assignment(int assignment) const {
  AtomMask m = 0;
  for (std::size_t k = 0; k < atoms.size(); ++k)
    if ((assignment >> k) & 1) m |= AtomMask{1} << atoms[k];
  return m;
}

std::vector<int> FiniteAutomaton::successors(int q, AtomMask label) const {
  std::vector<int> out;
  for (const auto& e : edges)
    if (e.from == q && eval(e.guard, label)) out.push_back(e.to);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool FiniteAutomaton::accepts(std::span<const AtomMask> labels) const {
  if (!step_table.empty()) {
    int q = initial;
    for (AtomMask l : labels) q = step(q, l);
    return accepting[q];
  }
  std::vector<int> current{initial};
  for (AtomMask l : labels) {
    std::vector<int> next;
    for (int q : current) {
      auto s = successors(q, l);
      next.insert(next.end(), s.begin(), s.end());
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    current.swap(next);
    if (current.empty()) return false;
  }
  for (int q : current)
    if (accepting[q]) return true;
  return false;
}

void FiniteAutomaton::compile() {
  if (!deterministic) throw std::logic_error("compile requires a deterministic automaton");
  const int na = num_assignments();
  step_table.assign(static_cast<std::size_t>(num_states) * na, -1);
  for (const auto& e : edges) {
    for (int a = 0; a < na; ++a) {
      if (!eval(e.guard, label_of_assignment(a))) continue;
      auto& slot = step_table[static_cast<std::size_t>(e.from) * na + a];
      if (slot != -1 && slot != e.to) throw std::logic_error("overlapping guards");
      slot = e.to;
    }
  }
  if (std::find(step_table.begin(), step_table.end(), -1) != step_table.end())
    throw std::logic_error("compile requires a complete automaton");
}

namespace {

std::vector<char> guard_members(const Predicate& g, const FiniteAutomaton& a) {
  std::vector<char> m(a.num_assignments());
  for (int x = 0; x < a.num_assignments(); ++x) m[x] = eval(g, a.label_of_assignment(x));
  return m;
}

struct Cube {
  int bits;
  int care;
  bool operator<(const Cube& o) const { return std::tie(care, bits) < std::tie(o.care, o.bits); }
  bool operator==(const Cube& o) const { return care == o.care && bits == o.bits; }
  bool covers(int x) const { return (x & care) == bits; }
};

Predicate cube_to_pred(const Cube& c, const std::vector<int>& atoms) {
  Predicate out;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (!((c.care >> k) & 1)) continue;
    Predicate lit = p_atom(atoms[k]);
    if (!((c.bits >> k) & 1)) lit = p_not(lit);
    out = out ? p_and(out, lit) : lit;
  }
  return out ? out : p_true();
}

}  // namespace

Predicate assignments_to_dnf(const std::vector<char>& members, const std::vector<int>& atoms) {
  const int k = static_cast<int>(atoms.size());
  const int na = 1 << k;
  const int full = na - 1;
  int count = static_cast<int>(std::count(members.begin(), members.end(), 1));
  if (count == 0) return p_false();
  if (count == na) return p_true();

  // Quine-McCluskey prime implicants, then a greedy cover.
  std::vector<Cube> level;
  for (int x = 0; x < na; ++x)
    if (members[x]) level.push_back({x, full});
  std::vector<Cube> primes;
  while (!level.empty()) {
    std::vector<char> used(level.size(), 0);
    std::vector<Cube> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (std::size_t j = i + 1; j < level.size(); ++j) {
        if (level[i].care != level[j].care) continue;
        int diff = level[i].bits ^ level[j].bits;
        if (diff == 0 || (diff & (diff - 1))) continue;
        used[i] = used[j] = 1;
        next.push_back({level[i].bits & ~diff, level[i].care & ~diff});
      }
    }
    for (std::size_t i = 0; i < level.size(); ++i)
      if (!used[i]) primes.push_back(level[i]);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    level.swap(next);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

  std::vector<char> covered(na, 0);
  std::vector<Cube> chosen;
  // Essential primes first.
  for (int x = 0; x < na; ++x) {
    if (!members[x]) continue;
    int n = 0;
    const Cube* only = nullptr;
    for (const auto& p : primes)
      if (p.covers(x)) { ++n; only = &p; }
    if (n == 1 && std::find(chosen.begin(), chosen.end(), *only) == chosen.end())
      chosen.push_back(*only);
  }
  for (const auto& c : chosen)
    for (int x = 0; x < na; ++x)
      if (c.covers(x)) covered[x] = 1;
  while (true) {
    int best = -1, best_gain = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      int gain = 0;
      for (int x = 0; x < na; ++x)
        if (members[x] && !covered[x] && primes[i].covers(x)) ++gain;
      if (gain > best_gain) { best_gain = gain; best = static_cast<int>(i); }
    }
    if (best < 0) break;
    chosen.push_back(primes[best]);
    for (int x = 0; x < na; ++x)
      if (primes[best].covers(x)) covered[x] = 1;
  }
  std::sort(chosen.begin(), chosen.end(), [](const Cube& a, const Cube& b) {
    return std::tie(a.bits, a.care) < std::tie(b.bits, b.care);
  });
  Predicate out;
  for (const auto& c : chosen) {
    Predicate p = cube_to_pred(c, atoms);
    out = out ? p_or(out, p) : p;
  }
  return out;
}

FiniteAutomaton determinize(const FiniteAutomaton& nfa, int state_cap) {
  if (static_cast<int>(nfa.atoms.size()) > kMaxGuardAtoms)
    throw AutomatonBudgetError("too many atoms for determinization");
  const int na = nfa.num_assignments();
  std::vector<std::vector<std::pair<std::vector<char>, int>>> out_edges(nfa.num_states);
  for (const auto& e : nfa.edges) out_edges[e.from].push_back({guard_members(e.guard, nfa), e.to});

  FiniteAutomaton dfa;
  dfa.atoms = nfa.atoms;
  dfa.deterministic = true;
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> subsets;
  auto intern = [&](std::vector<int> s) {
    auto it = ids.find(s);
    if (it != ids.end()) return it->second;
    if (static_cast<int>(subsets.size()) >= state_cap)
      throw AutomatonBudgetError("determinization exceeded state cap of " +
                                 std::to_string(state_cap));
    bool acc = false;
    for (int q : s) acc = acc || nfa.accepting[q];
    int id = dfa.add_state(acc);
    ids.emplace(s, id);
    subsets.push_back(std::move(s));
    return id;
  };
  dfa.initial = intern({nfa.initial});

  for (std::size_t cur = 0; cur < subsets.size(); ++cur) {
    std::map<int, std::vector<char>> by_target;
    for (int x = 0; x < na; ++x) {
      std::vector<int> next;
      for (int q : subsets[cur])
        for (const auto& [members, to] : out_edges[q])
          if (members[x]) next.push_back(to);
      if (next.empty()) continue;
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      int target = intern(std::move(next));
      auto& m = by_target[target];
      if (m.empty()) m.assign(na, 0);
      m[x] = 1;
    }
    for (const auto& [target, members] : by_target)
      dfa.add_edge(static_cast<int>(cur), assignments_to_dnf(members, dfa.atoms), target);
  }
  return dfa;
}

FiniteAutomaton complete(const FiniteAutomaton& dfa) {
  if (!dfa.deterministic) throw std::logic_error("complete requires a deterministic automaton");
  FiniteAutomaton out = dfa;
  out.step_table.clear();
  const int na = dfa.num_assignments();
  std::vector<std::vector<char>> covered(dfa.num_states, std::vector<char>(na, 0));
  for (const auto& e : dfa.edges) {
    auto m = guard_members(e.guard, dfa);
    for (int x = 0; x < na; ++x) covered[e.from][x] |= m[x];
  }
  int sink = -1;
  for (int q = 0; q < dfa.num_states; ++q) {
    std::vector<char> missing(na);
    bool any = false;
    for (int x = 0; x < na; ++x) {
      missing[x] = !covered[q][x];
      any = any || missing[x];
    }
    if (!any) continue;
    if (sink < 0) {
      sink = out.add_state(false);
      out.add_edge(sink, p_true(), sink);
    }
    out.add_edge(q, assignments_to_dnf(missing, dfa.atoms), sink);
  }
  return out;
}

int successor_count(const FiniteAutomaton& a, int q, int assignment) {
  AtomMask l = a.label_of_assignment(assignment);
  int n = 0;
  for (const auto& e : a.edges)
    if (e.from == q && eval(e.guard, l)) ++n;
  return n;
}

bool is_deterministic(const FiniteAutomaton& a) {
  for (int q = 0; q < a.num_states; ++q)
    for (int x = 0; x < a.num_assignments(); ++x)
      if (successor_count(a, q, x) > 1) return false;
  return true;
}

bool is_complete(const FiniteAutomaton& a) {
  for (int q = 0; q < a.num_states; ++q)
    for (int x = 0; x < a.num_assignments(); ++x)
      if (successor_count(a, q, x) < 1) return false;
  return true;
}

namespace {

FiniteAutomaton build(const Spec& phi, const std::vector<int>& atoms, int cap, bool top);

FiniteAutomaton build_eventually(const Predicate& b, const std::vector<int>& atoms) {
  FiniteAutomaton a;
  a.atoms = atoms;
  a.deterministic = true;
  int q0 = a.add_state(false);
  int q1 = a.add_state(true);
  a.initial = q0;
  a.add_edge(q0, p_not(b), q0);
  a.add_edge(q0, b, q1);
  a.add_edge(q1, p_true(), q1);
  return a;
}

// Copies `src` into `dst` and returns the state offset.
int append(FiniteAutomaton& dst, const FiniteAutomaton& src, bool keep_accepting) {
  int offset = dst.num_states;
  for (int q = 0; q < src.num_states; ++q) dst.add_state(keep_accepting && src.accepting[q]);
  for (const auto& e : src.edges) dst.add_edge(e.from + offset, e.guard, e.to + offset);
  return offset;
}

FiniteAutomaton build(const Spec& phi, const std::vector<int>& atoms, int cap, bool top) {
  auto finish = [&](FiniteAutomaton n) { return top ? n : determinize(n, cap); };
  switch (phi->kind) {
    case SpecNode::Kind::kAchieve:
      return build_eventually(phi->pred, atoms);
    case SpecNode::Kind::kEnsuring: {
      FiniteAutomaton a = build(phi->lhs, atoms, cap, false);
      for (auto& e : a.edges) e.guard = p_and(e.guard, phi->pred);
      return a;
    }
    case SpecNode::Kind::kSeq: {
      FiniteAutomaton a1 = build(phi->lhs, atoms, cap, false);
      FiniteAutomaton a2 = build(phi->rhs, atoms, cap, false);
      FiniteAutomaton n;
      n.atoms = atoms;
      append(n, a1, false);
      int off = append(n, a2, true);
      n.initial = a1.initial;
      // Divert every edge entering a final state of the first automaton to
      // the initial state of the second.
      for (const auto& e : a1.edges)
        if (a1.accepting[e.to]) n.add_edge(e.from, e.guard, a2.initial + off);
      return finish(std::move(n));
    }
    case SpecNode::Kind::kChoice: {
      FiniteAutomaton a1 = build(phi->lhs, atoms, cap, false);
      FiniteAutomaton a2 = build(phi->rhs, atoms, cap, false);
      FiniteAutomaton n;
      n.atoms = atoms;
      int init = n.add_state(a1.accepting[a1.initial] || a2.accepting[a2.initial]);
      int off1 = append(n, a1, true);
      int off2 = append(n, a2, true);
      n.initial = init;
      // A fresh initial state takes the outgoing edges of both initial
      // states; the originals stay so their self-loops keep their meaning.
      for (const auto& e : a1.edges)
        if (e.from == a1.initial) n.add_edge(init, e.guard, e.to + off1);
      for (const auto& e : a2.edges)
        if (e.from == a2.initial) n.add_edge(init, e.guard, e.to + off2);
      return finish(std::move(n));
    }
  }
  throw std::logic_error("unknown spec kind");
}

std::vector<int> sorted_atoms(const Spec& phi) {
  auto s = atoms_of(phi);
  std::vector<int> atoms(s.begin(), s.end());
  if (static_cast<int>(atoms.size()) > kMaxGuardAtoms)
    throw AutomatonBudgetError("spec mentions more than " + std::to_string(kMaxGuardAtoms) +
                               " atoms");
  return atoms;
}

}  // namespace

FiniteAutomaton spec_to_nfa(const Spec& phi, int state_cap) {
  return build(phi, sorted_atoms(phi), state_cap, true);
}

FiniteAutomaton spec_to_dfa(const Spec& phi, int state_cap) {
  FiniteAutomaton a = spec_to_nfa(phi, state_cap);
  if (!a.deterministic) a = determinize(a, state_cap);
  a = complete(a);
  if (a.num_states > state_cap)
    throw AutomatonBudgetError("automaton exceeded state cap of " + std::to_string(state_cap));
  a.compile();
  return a;
}

std::string automaton_to_json(const FiniteAutomaton& a, const PredicateTable* table) {
  nlohmann::json j;
  j["states"] = a.num_states;
  j["initial"] = a.initial;
  j["deterministic"] = a.deterministic;
  std::vector<int> acc;
  for (int q = 0; q < a.num_states; ++q)
    if (a.accepting[q]) acc.push_back(q);
  j["accepting"] = acc;
  std::vector<std::string> atom_names;
  for (int id : a.atoms)
    atom_names.push_back(table ? table->at(id).name : "a" + std::to_string(id));
  j["atoms"] = atom_names;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : a.edges)
    edges.push_back({{"from", e.from}, {"guard", to_string(e.guard, table)}, {"to", e.to}});
  j["edges"] = edges;
  return j.dump(2);
}

RewardMachine::RewardMachine(std::shared_ptr<const FiniteAutomaton> dfa) : dfa_(std::move(dfa)) {
  if (dfa_->step_table.empty()) throw std::invalid_argument("reward machine needs a compiled DFA");
  const int na = dfa_->num_assignments();
  sink_.assign(dfa_->num_states, 1);
  for (int q = 0; q < dfa_->num_states; ++q)
    for (int x = 0; x < na; ++x)
      if (dfa_->step_table[static_cast<std::size_t>(q) * na + x] != q) sink_[q] = 0;
}

int RewardMachine::reward(AtomMask label, int q) const {
  if (q == dead()) return 0;
  int q2 = dfa_->step(q, label);
  bool a = dfa_->accepting[q], b = dfa_->accepting[q2];
  if (!a && b) return 1;
  if (a && !b) return -1;
  return 0;
}

RewardMachine dfa_to_rm(const FiniteAutomaton& dfa) {
  auto owned = std::make_shared<FiniteAutomaton>(dfa);
  if (owned->step_table.empty()) owned->compile();
  return RewardMachine(std::move(owned));
}

RewardMachine spec_to_rm(const Spec& phi, int state_cap) {
  return dfa_to_rm(spec_to_dfa(phi, state_cap));
}

int rm_total_reward(const RewardMachine& rm, std::span<const AtomMask> labels) {
  if (labels.empty()) throw std::invalid_argument("empty trajectory");
  int q = rm.initial();
  int total = 0;
  for (AtomMask l : labels) {
    total += rm.reward(l, q);
    q = rm.next(l, q);
  }
  return total;
}

}  // namespace nashspec
