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

#ifndef NASHSPEC_BENCHMARKS_HPP_
#define NASHSPEC_BENCHMARKS_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nashspec/markov_game.hpp"

namespace nashspec {

struct EnvironmentParams {
  std::string id;  // intersection | single_lane | gridworld
  int horizon = 0;
  double failure = 0.05;
  // intersection: cars as "ns:3", "ew:2", ...
  std::vector<std::string> cars;
  // single_lane
  int agents = 3;
  int length = 4;
  bool independent_failures = false;
  // gridworld
  int size = 4;
};

std::unique_ptr<MarkovGame> make_environment(const EnvironmentParams& p);

struct Benchmark {
  std::string name;  // e.g. "single_lane/phi5"
  EnvironmentParams env;
  std::vector<std::string> specs;  // one per agent
  std::uint64_t edge_budget = 20000;
};

const std::vector<Benchmark>& benchmark_registry();
const Benchmark& find_benchmark(const std::string& name);
// "all", an environment id, or a comma-separated list of names and ids.
std::vector<Benchmark> resolve_suite(const std::string& suite);

}  // namespace nashspec

#endif  // NASHSPEC_BENCHMARKS_HPP_
