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

#include "nashspec/enumeration.hpp"

#include <algorithm>
#include <map>

namespace nashspec {

StateId sample_from(const Distribution& d, Rng& rng) {
  if (d.empty()) throw std::invalid_argument("empty distribution");
  double u = uniform01(rng);
  for (const auto& [s, p] : d) {
    if (u < p) return s;
    u -= p;
  }
  return d.back().first;
}

Distribution average(const std::vector<Distribution>& ds) {
  std::map<StateId, double> acc;
  for (const auto& d : ds)
    for (const auto& [s, p] : d) acc[s] += p / ds.size();
  return {acc.begin(), acc.end()};
}

namespace {

int cap_for(const MarkovGame& game, const EnumerationConfig& config) {
  return config.episode_cap > 0 ? config.episode_cap : game.horizon();
}

}  // namespace

EdgePolicy learn_edge_policy(const MarkovGame& game, const ProductGraph& g, int e, const Distribution& eta,
                             const EnumerationConfig& config, Rng& rng) {
  if (eta.empty()) throw UnreachableEdgeError("empty initial distribution for edge " + std::to_string(e));
  EdgeTracker tracker(g, e);
  EdgePolicy pol;
  pol.edge = e;
  pol.q = QTable(game.num_joint_actions());
  const int cap = cap_for(game, config);
  const auto& preds = game.predicates();
  const auto& qp = config.q;
  std::uint64_t steps = 0;
  int idle = 0;  // consecutive episodes decided at the start state
  while (steps < config.edge_budget) {
    StateId s = sample_from(eta, rng);
    std::uint32_t st = 0;
    auto out = tracker.advance(st, preds.label(s));
    if (out.achieved || out.dead) {
      if (++idle > 1000) break;
      continue;
    }
    idle = 0;
    for (int t = 0; t < cap && steps < config.edge_budget; ++t) {
      QKey key = EdgePolicy::key(s, st);
      pol.q.row(key);
      int a = pol.q.epsilon_greedy(key, qp.epsilon, rng);
      StateId s2 = game.sample_next(s, a, rng);
      ++steps;
      std::uint32_t st2 = st;
      auto o = tracker.advance(st2, preds.label(s2));
      bool terminal = o.achieved || o.dead || t + 1 == cap;
      double target = o.achieved ? 1.0 : 0.0;
      if (!terminal) target += qp.discount * pol.q.max_value(EdgePolicy::key(s2, st2));
      pol.q.update(key, a, target, qp.learning_rate);
      if (terminal) break;
      s = s2;
      st = st2;
    }
  }
  pol.steps = steps;
  return pol;
}

ReachResult reach_distribution(const MarkovGame& game, const ProductGraph& g, int e, const EdgePolicy& policy,
                               const Distribution& eta, int num_samples, int episode_cap, Rng& rng) {
  if (num_samples < 1) throw std::invalid_argument("num_samples must be positive");
  EdgeTracker tracker(g, e);
  const auto& preds = game.predicates();
  const int cap = episode_cap > 0 ? episode_cap : game.horizon();
  std::map<StateId, int> counts;
  ReachResult r;
  r.rollouts = num_samples;
  for (int k = 0; k < num_samples; ++k) {
    StateId s = sample_from(eta, rng);
    std::uint32_t st = 0;
    auto out = tracker.advance(st, preds.label(s));
    for (int t = 0; !out.achieved && !out.dead && t < cap; ++t) {
      s = game.sample_next(s, policy.act(s, st), rng);
      out = tracker.advance(st, preds.label(s));
    }
    if (out.achieved) {
      ++counts[s];
      ++r.hits;
    }
  }
  if (r.hits == 0)
    throw UnreachableEdgeError("edge " + std::to_string(e) + " not achieved in " + std::to_string(num_samples) +
                               " rollouts");
  for (const auto& [s, c] : counts) r.distribution.emplace_back(s, static_cast<double>(c) / r.hits);
  return r;
}

std::shared_ptr<PathPolicy> path_to_policy(const MarkovGame& game, std::shared_ptr<const ProductGraph> g,
                                           const std::vector<int>& path,
                                           const std::vector<std::shared_ptr<const EdgePolicy>>& edge_policies) {
  std::vector<std::shared_ptr<const EdgePolicy>> seq;
  for (int e : path) {
    if (e < 0 || e >= static_cast<int>(edge_policies.size()) || !edge_policies[e])
      throw std::invalid_argument("no policy for edge " + std::to_string(e));
    seq.push_back(edge_policies[e]);
  }
  return std::make_shared<PathPolicy>(game, std::move(g), path, std::move(seq));
}

bool RankedCandidateList::before(const Entry& a, const Entry& b) {
  // True when a pops after b (std heap comparator).
  if (a.c.score.welfare != b.c.score.welfare) return a.c.score.welfare < b.c.score.welfare;
  if (a.c.coalition.size() != b.c.coalition.size()) return a.c.coalition.size() < b.c.coalition.size();
  return a.seq > b.seq;
}

void RankedCandidateList::push(Candidate c) {
  heap_.push_back({std::move(c), seq_++});
  std::push_heap(heap_.begin(), heap_.end(), before);
}

Candidate RankedCandidateList::pop() {
  if (heap_.empty()) throw std::out_of_range("pop from empty candidate list");
  std::pop_heap(heap_.begin(), heap_.end(), before);
  Candidate c = std::move(heap_.back().c);
  heap_.pop_back();
  return c;
}

const Candidate& RankedCandidateList::top() const {
  if (heap_.empty()) throw std::out_of_range("top of empty candidate list");
  return heap_.front().c;
}

std::vector<const Candidate*> RankedCandidateList::ordered() const {
  std::vector<const Entry*> entries;
  for (const auto& e : heap_) entries.push_back(&e);
  std::sort(entries.begin(), entries.end(), [](const Entry* a, const Entry* b) { return before(*b, *a); });
  std::vector<const Candidate*> out;
  for (const auto* e : entries) out.push_back(&e->c);
  return out;
}

namespace {

// Vertices on some path from the initial vertex to a final vertex.
std::vector<char> useful_vertices(const ProductGraph& g) {
  std::vector<char> fwd(g.num_vertices, 0), bwd(g.num_vertices, 0);
  auto order = g.topological_order();
  fwd[g.initial] = 1;
  for (int v : order)
    if (fwd[v])
      for (int id : g.out[v]) fwd[g.edges[id].to] = 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (g.is_final[v]) bwd[v] = 1;
    for (int id : g.out[v])
      if (bwd[g.edges[id].to]) bwd[v] = 1;
  }
  std::vector<char> useful(g.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v) useful[v] = fwd[v] && bwd[v];
  return useful;
}

}  // namespace

EnumerationResult prioritized_enumeration(const MarkovGame& game, const std::vector<CompiledSpec>& specs,
                                          const EnumerationConfig& config, Rng& rng) {
  const int n = game.num_agents();
  if (static_cast<int>(specs.size()) != n) throw std::invalid_argument("one spec per agent");
  if (n > 20) throw std::invalid_argument("too many agents to enumerate coalitions");
  EnumerationResult result;
  auto& stats = result.stats;
  const std::uint64_t samples_before = game.samples_drawn();

  std::vector<std::shared_ptr<const AbstractGraph>> graphs;
  for (const auto& cs : specs) graphs.push_back(std::make_shared<const AbstractGraph>(spec_to_abstract_graph(cs.spec)));

  auto add_candidate = [&](std::vector<int> members, std::shared_ptr<const ProductGraph> pg, std::vector<int> path,
                           const std::vector<std::shared_ptr<const EdgePolicy>>& edge_policies) {
    Candidate c;
    c.coalition = std::move(members);
    c.graph = pg;
    c.path = path;
    auto pol = path_to_policy(game, pg, path, edge_policies);
    for (int e : path) c.edge_policies.push_back(edge_policies[e]);
    FsmJointPolicy runner(pol);
    c.score = estimate_scores(game, runner, specs, config.welfare_samples, rng);
    c.policy = std::move(pol);
    result.candidates.push(std::move(c));
    ++stats.paths;
  };

  // Largest coalitions first so ties in the heap resolve deterministically.
  std::vector<int> masks;
  for (int mask = (1 << n) - 1; mask >= 0; --mask) masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(),
                   [](int a, int b) { return __builtin_popcount(a) > __builtin_popcount(b); });

  for (int mask : masks) {
    ++stats.coalitions;
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1) members.push_back(i);
    if (members.empty()) {
      add_candidate({}, nullptr, {}, {});
      continue;
    }
    auto pg = std::make_shared<const ProductGraph>(product(graphs, members));
    auto useful = useful_vertices(*pg);
    std::vector<std::vector<Distribution>> gamma(pg->num_vertices);
    gamma[pg->initial].push_back({{game.initial_state(), 1.0}});
    std::vector<std::shared_ptr<const EdgePolicy>> edge_policies(pg->edges.size());
    for (int u : pg->topological_order()) {
      if (!useful[u] || gamma[u].empty()) continue;
      Distribution eta = average(gamma[u]);
      for (int id : pg->out[u]) {
        const int v = pg->edges[id].to;
        if (!useful[v]) continue;
        try {
          auto pol = std::make_shared<EdgePolicy>(learn_edge_policy(game, *pg, id, eta, config, rng));
          auto reach = reach_distribution(game, *pg, id, *pol, eta, config.reach_samples, config.episode_cap, rng);
          pol->achieve_prob = static_cast<double>(reach.hits) / reach.rollouts;
          gamma[v].push_back(std::move(reach.distribution));
          edge_policies[id] = std::move(pol);
          ++stats.edges_learned;
        } catch (const UnreachableEdgeError& err) {
          ++stats.edges_skipped;
          stats.warnings.push_back(err.what());
        }
      }
    }
    std::vector<std::vector<int>> paths;
    try {
      paths = enumerate_paths(*pg, config.path_cap);
    } catch (const PathBudgetError& err) {
      stats.warnings.push_back(err.what());
      continue;
    }
    for (auto& path : paths) {
      bool ok = std::all_of(path.begin(), path.end(), [&](int e) { return edge_policies[e] != nullptr; });
      if (!ok) {
        ++stats.paths_skipped;
        continue;
      }
      add_candidate(members, pg, std::move(path), edge_policies);
    }
  }
  stats.sample_steps = game.samples_drawn() - samples_before;
  return result;
}

}  // namespace nashspec
