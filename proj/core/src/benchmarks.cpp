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

#include "nashspec/benchmarks.hpp"

#include <sstream>
#include <stdexcept>

namespace nashspec {

std::unique_ptr<MarkovGame> make_environment(const EnvironmentParams& p) {
  if (p.horizon <= 0) throw std::invalid_argument("horizon must be positive");
  if (p.id == "intersection") {
    std::vector<IntersectionGame::Car> cars;
    for (const auto& c : p.cars) {
      auto colon = c.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("car must look like ns:3 or ew:2: " + c);
      std::string axis = c.substr(0, colon);
      int start = std::stoi(c.substr(colon + 1));
      if (axis == "ns")
        cars.push_back({IntersectionGame::Axis::kNorthSouth, start});
      else if (axis == "ew")
        cars.push_back({IntersectionGame::Axis::kEastWest, start});
      else
        throw std::invalid_argument("unknown axis " + axis);
    }
    return std::make_unique<IntersectionGame>(cars, p.horizon, p.failure);
  }
  if (p.id == "single_lane") {
    return std::make_unique<SingleLaneGame>(
        p.agents, p.length, p.horizon, p.failure,
        p.independent_failures ? SingleLaneGame::FailureMode::kIndependent : SingleLaneGame::FailureMode::kShared);
  }
  if (p.id == "gridworld") return std::make_unique<GridworldGame>(p.horizon, p.size, p.failure);
  throw std::invalid_argument("unknown environment " + p.id);
}

namespace {

EnvironmentParams intersection(std::vector<std::string> cars, int horizon) {
  EnvironmentParams p;
  p.id = "intersection";
  p.cars = std::move(cars);
  p.horizon = horizon;
  return p;
}

EnvironmentParams single_lane(int horizon) {
  EnvironmentParams p;
  p.id = "single_lane";
  p.agents = 3;
  p.length = 4;
  p.horizon = horizon;
  return p;
}

EnvironmentParams gridworld(int horizon) {
  EnvironmentParams p;
  p.id = "gridworld";
  p.size = 4;
  p.horizon = horizon;
  return p;
}

std::vector<Benchmark> build() {
  std::vector<Benchmark> r;
  // Intersection. Cars on the same axis use separate lanes.
  r.push_back({"intersection/phi1",
               intersection({"ns:3", "ns:3", "ew:2"}, 10),
               {"achieve (crossed_0 and not crossed_2) ensuring safe_0",
                "achieve (crossed_1 and not crossed_2) ensuring safe_1",
                "achieve (crossed_2 and not crossed_0 and not crossed_1) ensuring safe_2"},
               20000});
  // Black car 0 against blue 1, green 2 and orange 3 on the other axis.
  r.push_back({"intersection/phi2",
               intersection({"ns:3", "ew:2", "ew:4", "ew:5"}, 12),
               {"achieve (crossed_0 and not crossed_2 and not crossed_3) ensuring safe_0",
                "achieve (crossed_1 and not crossed_0) ensuring safe_1",
                "achieve (crossed_2 and not crossed_0) ensuring safe_2",
                "achieve (crossed_3 and not crossed_0) ensuring safe_3"},
               20000});
  r.push_back({"intersection/phi3",
               intersection({"ns:3", "ew:2", "ew:4", "ew:5"}, 12),
               {"achieve (crossed_0 and not crossed_2 and not crossed_3) ensuring safe_0",
                "achieve (crossed_1 and not crossed_0) ensuring (safe_1 and ahead_1_2 and ahead_1_3)",
                "achieve (crossed_2 and not crossed_0) ensuring safe_2",
                "achieve (crossed_3 and not crossed_0) ensuring safe_3"},
               20000});
  r.push_back({"intersection/phi4",
               intersection({"ns:3", "ns:3", "ew:3"}, 12),
               {"achieve (crossed_0 and not crossed_1 and not crossed_2) ensuring safe_0",
                "achieve crossed_1 ensuring safe_1", "achieve (crossed_2 and not crossed_1) ensuring safe_2"},
               20000});
  r.push_back({"intersection/phi5",
               intersection({"ns:2", "ns:3", "ew:2", "ew:3", "ew:4"}, 14),
               {"achieve (crossed_0 and not crossed_2 and not crossed_3 and not crossed_4) ensuring safe_0",
                "achieve (crossed_1 and not crossed_2 and not crossed_3 and not crossed_4) ensuring safe_1",
                "achieve (crossed_2 and not crossed_0 and not crossed_1) ensuring safe_2",
                "achieve (crossed_3 and not crossed_0 and not crossed_1) ensuring safe_3",
                "achieve (crossed_4 and not crossed_0 and not crossed_1) ensuring safe_4"},
               20000});

  // Single lane, three agents on a track of length 4.
  r.push_back({"single_lane/phi1", single_lane(12), {"achieve goal_0", "achieve goal_1", "achieve goal_2"}, 20000});
  r.push_back({"single_lane/phi2",
               single_lane(12),
               {"achieve (goal_1 and not goal_0)", "achieve goal_1", "achieve goal_2"},
               20000});
  r.push_back({"single_lane/phi3",
               single_lane(12),
               {"achieve (goal_1 and not goal_0) ; achieve goal_0", "achieve goal_1", "achieve goal_2"},
               20000});
  r.push_back({"single_lane/phi4",
               single_lane(12),
               {"achieve (goal_0 and not goal_1)", "achieve (goal_1 and not goal_0)", "achieve goal_2"},
               20000});
  r.push_back({"single_lane/phi5",
               single_lane(12),
               {"achieve (mid_0 and not mid_1) ; achieve goal_0", "achieve (goal_1 and not goal_0)",
                "achieve goal_2"},
               20000});
  r.push_back({"single_lane/phi6",
               single_lane(12),
               {"achieve (mid_0 and not mid_1) ; achieve goal_0", "achieve (goal_1 and not goal_0)",
                "achieve (goal_2 and not goal_0)"},
               20000});

  // Gridworld, agents start in opposite corners of a 4 x 4 grid.
  const std::string swap0 = "achieve at_0_3_3", swap1 = "achieve at_1_0_0";
  const std::string side0 = "(achieve at_0_0_3 or achieve at_0_3_0)", side1 = "(achieve at_1_0_3 or achieve at_1_3_0)";
  auto safe = [](const std::string& s, int i) { return "(" + s + ") ensuring safe_" + std::to_string(i); };
  r.push_back({"gridworld/phi1", gridworld(10), {safe(swap0, 0), safe(swap1, 1)}, 1000000});
  r.push_back({"gridworld/phi2", gridworld(10), {safe(side0, 0), safe(side1, 1)}, 1000000});
  r.push_back({"gridworld/phi3",
               gridworld(14),
               {safe(side0 + " ; achieve at_0_3_3", 0), safe(side1 + " ; achieve at_1_0_0", 1)},
               1000000});
  r.push_back({"gridworld/phi4",
               gridworld(20),
               {safe(side0 + " ; achieve at_0_3_3 ; achieve at_0_0_0", 0),
                safe(side1 + " ; achieve at_1_0_0 ; achieve at_1_3_3", 1)},
               1000000});
  r.push_back({"gridworld/phi5",
               gridworld(26),
               {safe(side0 + " ; achieve at_0_3_3 ; achieve at_0_0_0 ; achieve at_0_3_3", 0),
                safe(side1 + " ; achieve at_1_0_0 ; achieve at_1_3_3 ; achieve at_1_0_0", 1)},
               1000000});
  return r;
}

}  // namespace

const std::vector<Benchmark>& benchmark_registry() {
  static const std::vector<Benchmark> r = build();
  return r;
}

const Benchmark& find_benchmark(const std::string& name) {
  for (const auto& b : benchmark_registry())
    if (b.name == name) return b;
  throw std::invalid_argument("unknown benchmark " + name);
}

std::vector<Benchmark> resolve_suite(const std::string& suite) {
  std::vector<Benchmark> out;
  std::stringstream ss(suite);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    bool matched = false;
    for (const auto& b : benchmark_registry()) {
      if (item == "all" || b.name == item || b.name.rfind(item + "/", 0) == 0) {
        out.push_back(b);
        matched = true;
      }
    }
    if (!matched) throw std::invalid_argument("unknown benchmark or suite " + item);
  }
  return out;
}

}  // namespace nashspec
