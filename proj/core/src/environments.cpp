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
#include <stdexcept>
#include <string>

#include "nashspec/markov_game.hpp"

namespace nashspec {

namespace {

using Vars = FactoredGame::Vars;
using Outcomes = std::vector<std::pair<Vars, double>>;

// Product of independent per-variable outcome lists.
Outcomes independent(const std::vector<std::vector<std::pair<int, double>>>& per_var) {
  Outcomes out{{Vars{}, 1.0}};
  for (const auto& choices : per_var) {
    Outcomes next;
    next.reserve(out.size() * choices.size());
    for (const auto& [x, p] : out)
      for (const auto& [v, q] : choices) {
        Vars y = x;
        y.push_back(v);
        next.emplace_back(std::move(y), p * q);
      }
    out = std::move(next);
  }
  return out;
}

void check_failure(double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("failure probability must lie in [0, 1]");
}

}  // namespace

IntersectionGame::IntersectionGame(std::vector<Car> cars, int horizon, double failure)
    : cars_(std::move(cars)), failure_(failure) {
  check_failure(failure);
  if (cars_.empty()) throw std::invalid_argument("intersection needs at least one car");
  const int n = static_cast<int>(cars_.size());
  if (4 * n + n * (n - 1) > kMaxAtoms) throw std::invalid_argument("too many cars for the atom table");
  Vars x;
  for (const auto& c : cars_) {
    if (c.start < 0) throw std::invalid_argument("car start must be nonnegative");
    x.push_back(c.start);
  }
  set_actions(std::vector<int>(n, 2));
  set_initial(intern(x));
  set_horizon(horizon);

  auto collides = [this](StateId s, int i) {
    const Vars& v = vars(s);
    if (v[i] != 1) return false;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (static_cast<int>(j) != i && v[j] == 1) return true;
    return false;
  };
  for (int i = 0; i < n; ++i) {
    const std::string k = std::to_string(i);
    predicates_.add("crossed_" + k, [this, i](StateId s) { return vars(s)[i] == 0; });
    predicates_.add("at_int_" + k, [this, i](StateId s) { return vars(s)[i] == 1; });
    predicates_.add("collide_" + k, [collides, i](StateId s) { return collides(s, i); });
    predicates_.add("safe_" + k, [collides, i](StateId s) { return !collides(s, i); });
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      predicates_.add("ahead_" + std::to_string(i) + "_" + std::to_string(j), [this, i, j](StateId s) {
        const Vars& v = vars(s);
        return v[i] == 0 || v[i] + 1 < v[j];
      });
    }
}

std::vector<std::pair<Vars, double>> IntersectionGame::successors(const Vars& x,
                                                                  const std::vector<int>& actions) const {
  std::vector<std::vector<std::pair<int, double>>> per(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (actions[i] == 1 && x[i] > 0) {
      per[i] = {{x[i] - 1, 1.0 - failure_}, {x[i], failure_}};
    } else {
      per[i] = {{x[i], 1.0}};
    }
  }
  return independent(per);
}

SingleLaneGame::SingleLaneGame(int agents, int length, int horizon, double failure, FailureMode mode)
    : length_(length), failure_(failure), mode_(mode) {
  check_failure(failure);
  if (agents < 1) throw std::invalid_argument("single lane needs at least one agent");
  if (length < 1) throw std::invalid_argument("track length must be positive");
  set_actions(std::vector<int>(agents, 2));
  set_initial(intern(Vars(agents, 0)));
  set_horizon(horizon);
  const int mid = midpoint();
  for (int i = 0; i < agents; ++i) {
    const std::string k = std::to_string(i);
    predicates_.add("goal_" + k, [this, i](StateId s) { return vars(s)[i] == length_; });
    predicates_.add("mid_" + k, [this, i, mid](StateId s) { return vars(s)[i] >= mid; });
  }
}

std::vector<std::pair<Vars, double>> SingleLaneGame::successors(const Vars& x,
                                                                const std::vector<int>& actions) const {
  Vars moved = x;
  bool any = false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (actions[i] == 1 && x[i] < length_) {
      ++moved[i];
      any = true;
    }
  if (!any) return {{x, 1.0}};
  if (mode_ == FailureMode::kShared) return {{moved, 1.0 - failure_}, {x, failure_}};
  std::vector<std::vector<std::pair<int, double>>> per(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (moved[i] != x[i]) {
      per[i] = {{moved[i], 1.0 - failure_}, {x[i], failure_}};
    } else {
      per[i] = {{x[i], 1.0}};
    }
  }
  return independent(per);
}

GridworldGame::GridworldGame(int horizon, int size, double failure) : size_(size), failure_(failure) {
  check_failure(failure);
  if (size < 2) throw std::invalid_argument("grid size must be at least 2");
  if (2 * size * size + 4 > kMaxAtoms) throw std::invalid_argument("grid too large for the atom table");
  set_actions({5, 5});
  set_initial(intern({0, 0, size - 1, size - 1}));
  set_horizon(horizon);
  for (int i = 0; i < 2; ++i)
    for (int x = 0; x < size; ++x)
      for (int y = 0; y < size; ++y)
        predicates_.add("at_" + std::to_string(i) + "_" + std::to_string(x) + "_" + std::to_string(y),
                        [this, i, x, y](StateId s) {
                          const Vars& v = vars(s);
                          return v[2 * i] == x && v[2 * i + 1] == y;
                        });
  auto same = [this](StateId s) {
    const Vars& v = vars(s);
    return v[0] == v[2] && v[1] == v[3];
  };
  for (int i = 0; i < 2; ++i) {
    predicates_.add("collide_" + std::to_string(i), same);
    predicates_.add("safe_" + std::to_string(i), [same](StateId s) { return !same(s); });
  }
}

std::vector<std::pair<Vars, double>> GridworldGame::successors(const Vars& x,
                                                               const std::vector<int>& actions) const {
  static constexpr int kDx[5] = {0, 0, 0, 1, -1};
  static constexpr int kDy[5] = {0, 1, -1, 0, 0};
  std::vector<std::vector<std::pair<int, double>>> cell(2);
  for (int i = 0; i < 2; ++i) {
    int cx = x[2 * i], cy = x[2 * i + 1];
    int nx = std::clamp(cx + kDx[actions[i]], 0, size_ - 1);
    int ny = std::clamp(cy + kDy[actions[i]], 0, size_ - 1);
    int here = cx * size_ + cy, there = nx * size_ + ny;
    if (here == there) {
      cell[i] = {{here, 1.0}};
    } else {
      cell[i] = {{there, 1.0 - failure_}, {here, failure_}};
    }
  }
  Outcomes out;
  for (auto& [c, p] : independent(cell))
    out.push_back({{c[0] / size_, c[0] % size_, c[1] / size_, c[1] % size_}, p});
  return out;
}

}  // namespace nashspec
