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

#include <stdexcept>

#include "nashspec/game_solving.hpp"

namespace nashspec {

ZeroSumSolution minmax_value_iteration(const ZeroSumGame& g) {
  const int na = g.max_actions * g.min_actions;
  if (static_cast<int>(g.transitions.size()) != g.num_states || static_cast<int>(g.rewards.size()) != g.num_states)
    throw std::invalid_argument("zero-sum game tables do not match the state count");
  ZeroSumSolution sol;
  sol.initial = g.initial;
  sol.values.assign(g.horizon + 1, std::vector<double>(g.num_states, 0.0));
  sol.max_policy.assign(g.horizon, std::vector<std::vector<double>>(g.num_states));
  sol.min_policy.assign(g.horizon, std::vector<std::vector<double>>(g.num_states));
  MatrixGame stage(g.max_actions, g.min_actions);
  for (int t = g.horizon - 1; t >= 0; --t) {
    const auto& next = sol.values[t + 1];
    for (int s = 0; s < g.num_states; ++s) {
      for (int a = 0; a < na; ++a) {
        double v = g.rewards[s][a];
        for (const auto& [s2, p] : g.transitions[s][a]) v += p * next[s2];
        stage.payoff[a] = v;
      }
      StageOutcome o = solve_matrix_game(stage);
      sol.values[t][s] = o.value;
      sol.max_policy[t][s] = std::move(o.row_strategy);
      sol.min_policy[t][s] = std::move(o.col_strategy);
    }
  }
  return sol;
}

}  // namespace nashspec
