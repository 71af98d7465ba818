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

#ifndef NASHSPEC_GAME_SOLVING_HPP_
#define NASHSPEC_GAME_SOLVING_HPP_

#include <utility>
#include <vector>

namespace nashspec {

// Dense payoff matrix, row player maximizes, column player minimizes.
struct MatrixGame {
  int rows = 0;
  int cols = 0;
  std::vector<double> payoff;  // row-major

  MatrixGame() = default;
  MatrixGame(int m, int n, double fill = 0.0) : rows(m), cols(n), payoff(static_cast<std::size_t>(m) * n, fill) {}
  double& at(int i, int j) { return payoff[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return payoff[static_cast<std::size_t>(i) * cols + j]; }
};

struct StageOutcome {
  double value = 0.0;
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
};

// Minimax value and optimal mixed strategies. Pure saddle points are
// detected directly; otherwise a dense simplex with Bland's rule solves the
// shifted LP.
StageOutcome solve_matrix_game(const MatrixGame& g);

// x^T P y.
double expected_payoff(const MatrixGame& g, const std::vector<double>& x, const std::vector<double>& y);
// max_i (P y)_i - value and value - min_j (x^T P)_j, the larger of the two.
double exploitability(const MatrixGame& g, const StageOutcome& out);

// Two-player zero-sum game with H stages. Transitions and rewards are
// indexed by state and joint index a1 * min_actions + a2.
struct ZeroSumGame {
  int num_states = 0;
  int max_actions = 1;
  int min_actions = 1;
  int horizon = 1;
  int initial = 0;
  std::vector<std::vector<std::vector<std::pair<int, double>>>> transitions;
  std::vector<std::vector<double>> rewards;
};

struct ZeroSumSolution {
  // values[t][s] for t = 0..horizon, values[horizon] = 0.
  std::vector<std::vector<double>> values;
  // Per-stage mixed strategies, [t][s][action].
  std::vector<std::vector<std::vector<double>>> max_policy;
  std::vector<std::vector<std::vector<double>>> min_policy;
  double value() const { return values.front()[initial]; }
  int initial = 0;
};

ZeroSumSolution minmax_value_iteration(const ZeroSumGame& g);

// n-player one-shot game. payoffs[i][joint] with player 0 the least
// significant digit of the joint index.
struct NormalFormGame {
  std::vector<int> num_actions;
  std::vector<std::vector<double>> payoffs;

  int num_players() const { return static_cast<int>(num_actions.size()); }
  int num_joint() const;
};

struct NashResult {
  std::vector<std::vector<double>> strategies;
  std::vector<double> values;
  bool found = false;
  // False when the bounded search for three or more players was used.
  bool exact = true;
};

// Expected payoff of every player under a mixed profile.
std::vector<double> profile_values(const NormalFormGame& g, const std::vector<std::vector<double>>& profile);
// Largest unilateral pure-deviation gain over all players.
double nash_gap(const NormalFormGame& g, const std::vector<std::vector<double>>& profile);

// The welfare-maximizing equilibrium among those found. Two players: support
// enumeration over every pair of supports. Three or more: pure profiles,
// then uniform mixes over per-player supports; `exact` is cleared and
// `found` reports whether any candidate passed the Nash test. Equal welfare
// keeps the first found (pure profiles in joint-index order first).
NashResult best_nash_general_sum(const NormalFormGame& g, double tol = 1e-9);

}  // namespace nashspec

#endif  // NASHSPEC_GAME_SOLVING_HPP_
