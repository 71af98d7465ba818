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


#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include "nashspec/abstract_graph.hpp"
#include "nashspec/automata.hpp"
#include "nashspec/benchmarks.hpp"
#include "nashspec/game_solving.hpp"
#include "nashspec/parser.hpp"
#include "nashspec/verification.hpp"

namespace nashspec {
namespace {

void BM_SolveMatrixGame(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MatrixGame g(n, n);
  for (auto& x : g.payoff) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_matrix_game(g).value);
}
BENCHMARK(BM_SolveMatrixGame)->Arg(2)->Arg(5)->Arg(10)->Arg(25);

void BM_BimatrixNash(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  NormalFormGame g;
  g.num_actions = {n, n};
  g.payoffs.assign(2, std::vector<double>(n * n));
  for (auto& row : g.payoffs)
    for (auto& x : row) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(best_nash_general_sum(g).found);
}
BENCHMARK(BM_BimatrixNash)->Arg(2)->Arg(3)->Arg(4);

void BM_SpecToDfa(benchmark::State& state) {
  const Benchmark& b = benchmark_registry()[state.range(0)];
  auto env = make_environment(b.env);
  Spec phi = parse_spec(b.specs[0], env->predicates());
  state.SetLabel(b.name);
  for (auto _ : state) benchmark::DoNotOptimize(spec_to_dfa(phi).num_states);
}
BENCHMARK(BM_SpecToDfa)->DenseRange(0, 15);

void BM_ProductGraph(benchmark::State& state) {
  const Benchmark& b = benchmark_registry()[state.range(0)];
  auto env = make_environment(b.env);
  std::vector<std::shared_ptr<const AbstractGraph>> graphs;
  std::vector<int> all;
  for (std::size_t i = 0; i < b.specs.size(); ++i) {
    graphs.push_back(std::make_shared<const AbstractGraph>(
        spec_to_abstract_graph(parse_spec(b.specs[i], env->predicates()))));
    all.push_back(static_cast<int>(i));
  }
  state.SetLabel(b.name);
  for (auto _ : state) benchmark::DoNotOptimize(product(graphs, all).num_vertices);
}
BENCHMARK(BM_ProductGraph)->DenseRange(0, 15);

void BM_BfsEstimate(benchmark::State& state) {
  SingleLaneGame lane(2, 3, 8, 0.05);
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(bfs_estimate(lane, state.range(0), rng).states.size());
}
BENCHMARK(BM_BfsEstimate)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace nashspec

BENCHMARK_MAIN();
