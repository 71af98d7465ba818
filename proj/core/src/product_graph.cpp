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
#include <sstream>

#include "nashspec/abstract_graph.hpp"

namespace nashspec {

std::vector<int> ProductGraph::tuple(int v) const {
  std::vector<int> t(graphs.size());
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    t[k] = v % graphs[k]->num_vertices;
    v /= graphs[k]->num_vertices;
  }
  return t;
}

int ProductGraph::vertex_of(const std::vector<int>& t) const {
  int v = 0, radix = 1;
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    v += t[k] * radix;
    radix *= graphs[k]->num_vertices;
  }
  return v;
}

std::vector<int> ProductGraph::topological_order() const {
  std::vector<int> indeg(num_vertices, 0);
  for (const auto& e : edges) ++indeg[e.to];
  std::vector<int> order, stack;
  for (int v = num_vertices - 1; v >= 0; --v)
    if (indeg[v] == 0) stack.push_back(v);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int id : out[v])
      if (--indeg[edges[id].to] == 0) stack.push_back(edges[id].to);
  }
  if (static_cast<int>(order.size()) != num_vertices) throw std::logic_error("product has a cycle");
  return order;
}

ProductGraph product(const std::vector<std::shared_ptr<const AbstractGraph>>& agent_graphs,
                     const std::vector<int>& coalition) {
  if (coalition.empty()) throw std::invalid_argument("empty coalition");
  ProductGraph g;
  g.members = coalition;
  std::sort(g.members.begin(), g.members.end());
  g.members.erase(std::unique(g.members.begin(), g.members.end()), g.members.end());
  for (int i : g.members) {
    if (i < 0 || i >= static_cast<int>(agent_graphs.size()) || !agent_graphs[i])
      throw std::invalid_argument("no graph for agent " + std::to_string(i));
    g.graphs.push_back(agent_graphs[i]);
  }
  g.num_vertices = 1;
  for (const auto& ag : g.graphs) g.num_vertices *= ag->num_vertices;
  g.out.assign(g.num_vertices, {});
  g.is_final.assign(g.num_vertices, 0);

  std::vector<int> init(g.graphs.size());
  for (std::size_t k = 0; k < g.graphs.size(); ++k) init[k] = g.graphs[k]->initial;
  g.initial = g.vertex_of(init);

  const std::size_t slots = g.graphs.size();
  for (int v = 0; v < g.num_vertices; ++v) {
    auto t = g.tuple(v);
    bool fin = true;
    for (std::size_t k = 0; k < slots; ++k) fin = fin && g.graphs[k]->is_final[t[k]];
    g.is_final[v] = fin;

    // Odometer over {stay} x out-edges per slot, skipping all-stay.
    std::vector<int> choice(slots, -1);
    while (true) {
      std::size_t k = 0;
      for (; k < slots; ++k) {
        const auto& outs = g.graphs[k]->out[t[k]];
        int pos = choice[k] + 1;
        if (pos < static_cast<int>(outs.size())) {
          choice[k] = pos;
          break;
        }
        choice[k] = -1;
      }
      if (k == slots) break;
      ProductGraph::Edge e;
      e.from = v;
      auto t2 = t;
      for (std::size_t s = 0; s < slots; ++s) {
        if (choice[s] < 0) {
          e.component_edge.push_back(-1);
          continue;
        }
        int id = g.graphs[s]->out[t[s]][choice[s]];
        e.component_edge.push_back(id);
        e.progress.push_back(g.members[s]);
        t2[s] = g.graphs[s]->edges[id].to;
      }
      e.to = g.vertex_of(t2);
      g.out[v].push_back(static_cast<int>(g.edges.size()));
      g.edges.push_back(std::move(e));
    }
  }
  return g;
}

namespace {

bool all_hold(const Predicate& p, std::span<const AtomMask> seg) {
  for (AtomMask l : seg)
    if (!eval(p, l)) return false;
  return true;
}

// Safe predicate an agent must keep while sitting at vertex v.
Predicate waiting_predicate(const AbstractGraph& g, int v) {
  if (g.is_final[v]) {
    if (g.final_safe[v].kind != SafeSet::Kind::kAlways)
      throw std::logic_error("final vertex with a concatenated safe set");
    return g.final_safe[v].a;
  }
  Predicate p = p_true();
  for (int id : g.out[v]) p = p_and(p, first(g.edges[id].safe).a);
  return p;
}

}  // namespace

bool achieves_edge(std::span<const AtomMask> seg, const ProductGraph& g, int e) {
  if (seg.empty()) return false;
  const auto& edge = g.edges.at(e);
  const int k = static_cast<int>(seg.size()) - 1;
  auto src = g.tuple(edge.from);
  for (std::size_t s = 0; s < g.graphs.size(); ++s) {
    const AbstractGraph& ag = *g.graphs[s];
    if (edge.component_edge[s] < 0) {
      if (!all_hold(waiting_predicate(ag, src[s]), seg)) return false;
      continue;
    }
    const auto& ae = ag.edges[edge.component_edge[s]];
    Predicate after = waiting_predicate(ag, ae.to);
    int lo = (src[s] == ag.initial) ? 0 : 1;
    bool ok = false;
    for (int ki = lo; ki <= k && !ok; ++ki) {
      ok = eval(ag.beta[ae.to], seg[ki]) && ae.safe.contains(seg.subspan(0, ki + 1)) &&
           all_hold(after, seg.subspan(ki));
    }
    if (!ok) return false;
  }
  return true;
}

std::optional<int> min_achievement_index(std::span<const AtomMask> seg, const ProductGraph& g,
                                         int e) {
  for (std::size_t k = 0; k < seg.size(); ++k)
    if (achieves_edge(seg.subspan(0, k + 1), g, e)) return static_cast<int>(k);
  return std::nullopt;
}

bool achieves_path(std::span<const AtomMask> labels, const ProductGraph& g,
                   const std::vector<int>& path) {
  int end = path.empty() ? g.initial : g.edges.at(path.back()).to;
  if (!g.is_final[end]) throw std::invalid_argument("path does not end in a final vertex");
  const int n = static_cast<int>(labels.size());
  std::vector<char> reach(n, 0);
  reach[0] = 1;
  for (int e : path) {
    std::vector<char> next(n, 0);
    for (int k = 0; k < n; ++k) {
      if (!reach[k]) continue;
      for (int k2 = k; k2 < n; ++k2)
        if (!next[k2] && achieves_edge(labels.subspan(k, k2 - k + 1), g, e)) next[k2] = 1;
    }
    reach.swap(next);
  }
  auto t = g.tuple(end);
  for (int k = 0; k < n; ++k) {
    if (!reach[k]) continue;
    bool ok = true;
    for (std::size_t s = 0; s < g.graphs.size() && ok; ++s)
      ok = g.graphs[s]->final_safe[t[s]].contains(labels.subspan(k));
    if (ok) return true;
  }
  return false;
}

std::vector<std::vector<int>> enumerate_paths(const ProductGraph& g, std::size_t cap) {
  std::vector<std::vector<int>> paths;
  std::vector<int> current;
  // Iterative DFS keeps deep products off the call stack.
  std::vector<std::pair<int, std::size_t>> stack{{g.initial, 0}};
  if (g.is_final[g.initial]) paths.push_back({});
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next >= g.out[v].size()) {
      stack.pop_back();
      if (!current.empty()) current.pop_back();
      continue;
    }
    int id = g.out[v][next++];
    int to = g.edges[id].to;
    current.push_back(id);
    if (g.is_final[to]) {
      if (paths.size() >= cap)
        throw PathBudgetError("path enumeration exceeded cap of " + std::to_string(cap));
      paths.push_back(current);
    }
    stack.push_back({to, 0});
  }
  return paths;
}

std::string to_text(const ProductGraph& g, const PredicateTable* /*table*/) {
  std::ostringstream os;
  os << "coalition";
  for (int i : g.members) os << " " << i;
  os << "\nvertices " << g.num_vertices << " initial " << g.initial << "\n";
  for (int v = 0; v < g.num_vertices; ++v) {
    auto t = g.tuple(v);
    os << "vertex " << v << " (";
    for (std::size_t k = 0; k < t.size(); ++k) os << (k ? "," : "") << t[k];
    os << ")" << (g.is_final[v] ? " final" : "") << "\n";
  }
  for (const auto& e : g.edges) {
    os << "edge " << e.from << " -> " << e.to << " progress {";
    for (std::size_t k = 0; k < e.progress.size(); ++k) os << (k ? "," : "") << e.progress[k];
    os << "}\n";
  }
  return os.str();
}

EdgeTracker::EdgeTracker(const ProductGraph& g, int e) {
  const auto& edge = g.edges.at(e);
  auto src = g.tuple(edge.from);
  for (std::size_t s = 0; s < g.graphs.size(); ++s) {
    const AbstractGraph& ag = *g.graphs[s];
    Slot slot;
    if (edge.component_edge[s] < 0) {
      slot.progressing = false;
      slot.suffix = waiting_predicate(ag, src[s]);
      slot.need_positive = false;
    } else {
      const auto& ae = ag.edges[edge.component_edge[s]];
      slot.progressing = true;
      slot.prefix = ae.safe;
      slot.subgoal = ag.beta[ae.to];
      slot.suffix = waiting_predicate(ag, ae.to);
      slot.need_positive = src[s] != ag.initial;
    }
    slots_.push_back(std::move(slot));
  }
  if (1 + 3 * slots_.size() > 32) throw std::length_error("too many coalition members");
}

EdgeTracker::Outcome EdgeTracker::step(AtomMask label) { return advance(status_, label); }

// Status layout: bit 0 marks that some label was consumed; slot s owns bits
// 1+3s..3+3s. Progressing slots hold (prefix broken, concat ok, witness);
// waiting slots use the first bit as "broken".
EdgeTracker::Outcome EdgeTracker::advance(std::uint32_t& status, AtomMask label) const {
  const bool started = status & 1u;
  std::uint32_t next = 1u;
  Outcome out;
  out.achieved = true;
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    const Slot& sl = slots_[s];
    const int base = 1 + 3 * static_cast<int>(s);
    const bool broken = (status >> base) & 1u;
    if (!sl.progressing) {
      bool ok = !broken && eval(sl.suffix, label);
      if (!ok) {
        next |= 1u << base;
        out.dead = true;
        out.achieved = false;
      }
      continue;
    }
    const bool cd = (status >> (base + 1)) & 1u;
    const bool witness = (status >> (base + 2)) & 1u;
    bool a_now = !broken && eval(sl.prefix.a, label);
    bool cd_now = false;
    bool prefix_ok;
    if (sl.prefix.kind == SafeSet::Kind::kAlways) {
      prefix_ok = a_now;
    } else {
      cd_now = started && (!broken || cd) && eval(sl.prefix.b, label);
      prefix_ok = cd_now;
    }
    bool fresh = prefix_ok && eval(sl.subgoal, label) && (started || !sl.need_positive);
    bool w_now = (fresh || witness) && eval(sl.suffix, label);
    if (!a_now) next |= 1u << base;
    if (cd_now) next |= 1u << (base + 1);
    if (w_now) next |= 1u << (base + 2);
    if (!w_now) {
      out.achieved = false;
      bool extendable =
          sl.prefix.kind == SafeSet::Kind::kAlways ? a_now : (a_now || cd_now);
      if (!extendable) out.dead = true;
    }
  }
  if (out.achieved) out.dead = false;
  status = next;
  return out;
}

}  // namespace nashspec
