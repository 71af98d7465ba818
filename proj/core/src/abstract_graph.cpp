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

#include "nashspec/abstract_graph.hpp"

#include <algorithm>
#include <sstream>

namespace nashspec {

namespace {

bool all_hold(const Predicate& p, std::span<const AtomMask> seg) {
  for (AtomMask l : seg)
    if (!eval(p, l)) return false;
  return true;
}

}  // namespace

bool SafeSet::contains(std::span<const AtomMask> seg) const {
  if (kind == Kind::kAlways) return all_hold(a, seg);
  const std::size_t n = seg.size();
  for (std::size_t m = 0; m + 1 < n; ++m) {
    if (!eval(a, seg[m])) return false;  // longer prefixes fail too
    if (all_hold(b, seg.subspan(m + 1))) return true;
  }
  return false;
}

SafeSet first(const SafeSet& z) { return SafeSet::always(z.a); }

SafeSet conjoin(const SafeSet& z, const Predicate& p) {
  if (z.kind == SafeSet::Kind::kAlways) return SafeSet::always(p_and(z.a, p));
  return SafeSet::concat(p_and(z.a, p), p_and(z.b, p));
}

std::string to_string(const SafeSet& z, const PredicateTable* table) {
  if (z.kind == SafeSet::Kind::kAlways) return "Z[" + to_string(z.a, table) + "]";
  return "Z[" + to_string(z.a, table) + "]. Z[" + to_string(z.b, table) + "]";
}

int AbstractGraph::add_vertex(Predicate subgoal) {
  beta.push_back(std::move(subgoal));
  is_final.push_back(0);
  final_safe.push_back(SafeSet::always(p_true()));
  out.emplace_back();
  return num_vertices++;
}

int AbstractGraph::add_edge(int from, int to, SafeSet safe) {
  edges.push_back({from, to, std::move(safe)});
  int id = static_cast<int>(edges.size()) - 1;
  out[from].push_back(id);
  return id;
}

std::vector<int> AbstractGraph::topological_order() const {
  std::vector<int> indeg(num_vertices, 0);
  for (const auto& e : edges) ++indeg[e.to];
  std::vector<int> order, stack;
  for (int v = 0; v < num_vertices; ++v)
    if (indeg[v] == 0) stack.push_back(v);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int id : out[v])
      if (--indeg[edges[id].to] == 0) stack.push_back(edges[id].to);
  }
  if (static_cast<int>(order.size()) != num_vertices) throw std::logic_error("graph has a cycle");
  return order;
}

namespace {

// Copies the vertices of src other than its initial vertex; the initial
// vertex maps to `initial_image`.
std::vector<int> copy_body(AbstractGraph& dst, const AbstractGraph& src, int initial_image) {
  std::vector<int> map(src.num_vertices, -1);
  for (int v = 0; v < src.num_vertices; ++v) {
    if (v == src.initial) {
      map[v] = initial_image;
      continue;
    }
    map[v] = dst.add_vertex(src.beta[v]);
    dst.is_final[map[v]] = src.is_final[v];
    dst.final_safe[map[v]] = src.final_safe[v];
  }
  return map;
}

AbstractGraph build_graph(const Spec& phi) {
  switch (phi->kind) {
    case SpecNode::Kind::kAchieve: {
      AbstractGraph g;
      g.initial = g.add_vertex(p_true());
      int v = g.add_vertex(phi->pred);
      g.is_final[v] = 1;
      g.final_safe[v] = SafeSet::always(p_true());
      g.add_edge(g.initial, v, SafeSet::always(p_true()));
      return g;
    }
    case SpecNode::Kind::kEnsuring: {
      AbstractGraph g = build_graph(phi->lhs);
      for (auto& e : g.edges) e.safe = conjoin(e.safe, phi->pred);
      for (int v = 0; v < g.num_vertices; ++v)
        if (g.is_final[v]) g.final_safe[v] = conjoin(g.final_safe[v], phi->pred);
      return g;
    }
    case SpecNode::Kind::kSeq: {
      AbstractGraph g1 = build_graph(phi->lhs);
      AbstractGraph g2 = build_graph(phi->rhs);
      AbstractGraph g;
      g.initial = g.add_vertex(g1.beta[g1.initial]);
      auto m1 = copy_body(g, g1, g.initial);
      for (const auto& e : g1.edges) g.add_edge(m1[e.from], m1[e.to], e.safe);
      std::vector<int> finals1;
      for (int v = 0; v < g1.num_vertices; ++v)
        if (g1.is_final[v]) {
          finals1.push_back(m1[v]);
          g.is_final[m1[v]] = 0;
        }
      auto m2 = copy_body(g, g2, -1);
      for (const auto& e : g2.edges) {
        if (e.from != g2.initial) {
          g.add_edge(m2[e.from], m2[e.to], e.safe);
          continue;
        }
        if (e.safe.kind != SafeSet::Kind::kAlways)
          throw std::logic_error("initial edge with a concatenated safe set");
        for (int f : finals1) {
          const SafeSet& zf = g1.final_safe[std::find(m1.begin(), m1.end(), f) - m1.begin()];
          if (zf.kind != SafeSet::Kind::kAlways)
            throw std::logic_error("final vertex with a concatenated safe set");
          g.add_edge(f, m2[e.to], SafeSet::concat(zf.a, e.safe.a));
        }
      }
      return g;
    }
    case SpecNode::Kind::kChoice: {
      AbstractGraph g1 = build_graph(phi->lhs);
      AbstractGraph g2 = build_graph(phi->rhs);
      AbstractGraph g;
      g.initial = g.add_vertex(p_true());
      auto m1 = copy_body(g, g1, g.initial);
      for (const auto& e : g1.edges) g.add_edge(m1[e.from], m1[e.to], e.safe);
      auto m2 = copy_body(g, g2, g.initial);
      for (const auto& e : g2.edges) g.add_edge(m2[e.from], m2[e.to], e.safe);
      return g;
    }
  }
  throw std::logic_error("unknown spec kind");
}

}  // namespace

AbstractGraph spec_to_abstract_graph(const Spec& phi) {
  AbstractGraph g = build_graph(phi);
  g.topological_order();
  return g;
}

bool satisfies_graph(std::span<const AtomMask> labels, const AbstractGraph& g) {
  if (labels.empty()) throw std::invalid_argument("empty trajectory");
  const int n = static_cast<int>(labels.size());
  // reach[v][k]: some path ends at v with its last subgoal index at k.
  std::vector<std::vector<char>> reach(g.num_vertices, std::vector<char>(n, 0));
  if (!eval(g.beta[g.initial], labels[0])) return false;
  reach[g.initial][0] = 1;
  for (int v : g.topological_order()) {
    for (int k = 0; k < n; ++k) {
      if (!reach[v][k]) continue;
      for (int id : g.out[v]) {
        const auto& e = g.edges[id];
        int lo = (v == g.initial) ? k : k + 1;
        for (int k2 = lo; k2 < n; ++k2) {
          if (reach[e.to][k2] || !eval(g.beta[e.to], labels[k2])) continue;
          if (e.safe.contains(labels.subspan(k, k2 - k + 1))) reach[e.to][k2] = 1;
        }
      }
    }
  }
  for (int v = 0; v < g.num_vertices; ++v) {
    if (!g.is_final[v]) continue;
    for (int k = 0; k < n; ++k)
      if (reach[v][k] && g.final_safe[v].contains(labels.subspan(k))) return true;
  }
  return false;
}

std::string to_text(const AbstractGraph& g, const PredicateTable* table) {
  std::ostringstream os;
  os << "vertices " << g.num_vertices << " initial " << g.initial << "\n";
  for (int v = 0; v < g.num_vertices; ++v) {
    os << "vertex " << v << " beta " << to_string(g.beta[v], table);
    if (g.is_final[v]) os << " final " << to_string(g.final_safe[v], table);
    os << "\n";
  }
  for (const auto& e : g.edges)
    os << "edge " << e.from << " -> " << e.to << " " << to_string(e.safe, table) << "\n";
  return os.str();
}

}  // namespace nashspec
