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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nashspec/game_solving.hpp"

namespace nashspec {

int NormalFormGame::num_joint() const {
  int n = 1;
  for (int a : num_actions) n *= a;
  return n;
}

namespace {

std::vector<int> decode(const NormalFormGame& g, int joint) {
  std::vector<int> a(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) {
    a[i] = joint % g.num_actions[i];
    joint /= g.num_actions[i];
  }
  return a;
}

// Payoff of player i for each of its pure actions against the others' mix.
std::vector<double> deviation_payoffs(const NormalFormGame& g, const std::vector<std::vector<double>>& profile,
                                      int i) {
  std::vector<double> dev(g.num_actions[i], 0.0);
  const int nj = g.num_joint();
  for (int j = 0; j < nj; ++j) {
    auto a = decode(g, j);
    double w = 1.0;
    for (int k = 0; k < g.num_players() && w != 0.0; ++k)
      if (k != i) w *= profile[k][a[k]];
    if (w != 0.0) dev[a[i]] += w * g.payoffs[i][j];
  }
  return dev;
}

std::vector<double> pure(int n, int a) {
  std::vector<double> v(n, 0.0);
  v[a] = 1.0;
  return v;
}

struct Best {
  NashResult result;
  double welfare = -1e300;
  void offer(const NormalFormGame& g, std::vector<std::vector<double>> profile) {
    auto values = profile_values(g, profile);
    double w = 0.0;
    for (double v : values) w += v;
    if (result.found && w <= welfare + 1e-12) return;
    welfare = w;
    result.found = true;
    result.strategies = std::move(profile);
    result.values = std::move(values);
  }
};

std::vector<int> members(int mask) {
  std::vector<int> out;
  for (int k = 0; mask >> k; ++k)
    if ((mask >> k) & 1) out.push_back(k);
  return out;
}

// Mix over `cols` for the opponent that makes every action in `rows`
// indifferent for the player with payoff matrix a (rows x cols of the full
// game). Returns false when no such probability vector exists.
bool indifference(const Eigen::MatrixXd& a, const std::vector<int>& rows, const std::vector<int>& cols,
                  double tol, std::vector<double>& mix, double& value) {
  const int r = static_cast<int>(rows.size()), c = static_cast<int>(cols.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r + 1, c + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(r + 1);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) m(i, j) = a(rows[i], cols[j]);
    m(i, c) = -1.0;
  }
  for (int j = 0; j < c; ++j) m(r, j) = 1.0;
  b(r) = 1.0;
  Eigen::VectorXd z = m.completeOrthogonalDecomposition().solve(b);
  if ((m * z - b).lpNorm<Eigen::Infinity>() > 1e-9) return false;
  mix.assign(a.cols(), 0.0);
  for (int j = 0; j < c; ++j) {
    if (z(j) < -tol) return false;
    mix[cols[j]] = std::max(0.0, z(j));
  }
  value = z(c);
  return true;
}

void two_player(const NormalFormGame& g, double tol, Best& best) {
  const int n0 = g.num_actions[0], n1 = g.num_actions[1];
  Eigen::MatrixXd a(n0, n1), b(n1, n0);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      a(i, j) = g.payoffs[0][i + n0 * j];
      b(j, i) = g.payoffs[1][i + n0 * j];
    }
  std::vector<std::pair<int, int>> supports;
  for (int s1 = 1; s1 < (1 << n1); ++s1)
    for (int s0 = 1; s0 < (1 << n0); ++s0) supports.emplace_back(s0, s1);
  std::stable_sort(supports.begin(), supports.end(), [](auto l, auto r) {
    return __builtin_popcount(l.first) + __builtin_popcount(l.second) <
           __builtin_popcount(r.first) + __builtin_popcount(r.second);
  });
  for (auto [s0, s1] : supports) {
    auto r0 = members(s0), r1 = members(s1);
    std::vector<double> y, x;
    double v0, v1;
    if (!indifference(a, r0, r1, tol, y, v0)) continue;
    if (!indifference(b, r1, r0, tol, x, v1)) continue;
    std::vector<std::vector<double>> profile{x, y};
    for (auto& p : profile) {
      double s = 0.0;
      for (double q : p) s += q;
      for (double& q : p) q /= s;
    }
    if (nash_gap(g, profile) <= tol) best.offer(g, std::move(profile));
  }
}

void many_player(const NormalFormGame& g, double tol, Best& best) {
  const int n = g.num_players(), nj = g.num_joint();
  // Pure equilibria.
  for (int j = 0; j < nj; ++j) {
    auto a = decode(g, j);
    std::vector<std::vector<double>> profile;
    for (int i = 0; i < n; ++i) profile.push_back(pure(g.num_actions[i], a[i]));
    if (nash_gap(g, profile) <= tol) best.offer(g, std::move(profile));
  }
  if (best.result.found) return;
  // Uniform mixes over per-player supports, bounded.
  constexpr long kMaxCombos = 1 << 14;
  long combos = 1;
  for (int k : g.num_actions) {
    combos *= (1L << k) - 1;
    if (combos > kMaxCombos) break;
  }
  if (combos > kMaxCombos) return;
  std::vector<int> mask(n, 1);
  while (true) {
    std::vector<std::vector<double>> profile;
    for (int i = 0; i < n; ++i) {
      auto m = members(mask[i]);
      std::vector<double> p(g.num_actions[i], 0.0);
      for (int k : m) p[k] = 1.0 / m.size();
      profile.push_back(std::move(p));
    }
    if (nash_gap(g, profile) <= tol) best.offer(g, std::move(profile));
    int i = 0;
    for (; i < n; ++i) {
      if (++mask[i] < (1 << g.num_actions[i])) break;
      mask[i] = 1;
    }
    if (i == n) break;
  }
}

}  // namespace

std::vector<double> profile_values(const NormalFormGame& g, const std::vector<std::vector<double>>& profile) {
  std::vector<double> v(g.num_players(), 0.0);
  const int nj = g.num_joint();
  for (int j = 0; j < nj; ++j) {
    auto a = decode(g, j);
    double w = 1.0;
    for (int k = 0; k < g.num_players() && w != 0.0; ++k) w *= profile[k][a[k]];
    if (w == 0.0) continue;
    for (int i = 0; i < g.num_players(); ++i) v[i] += w * g.payoffs[i][j];
  }
  return v;
}

double nash_gap(const NormalFormGame& g, const std::vector<std::vector<double>>& profile) {
  auto values = profile_values(g, profile);
  double gap = 0.0;
  for (int i = 0; i < g.num_players(); ++i) {
    auto dev = deviation_payoffs(g, profile, i);
    gap = std::max(gap, *std::max_element(dev.begin(), dev.end()) - values[i]);
  }
  return gap;
}

NashResult best_nash_general_sum(const NormalFormGame& g, double tol) {
  const int n = g.num_players();
  if (n < 1) throw std::invalid_argument("game needs at least one player");
  const int nj = g.num_joint();
  if (static_cast<int>(g.payoffs.size()) != n) throw std::invalid_argument("one payoff table per player");
  for (const auto& p : g.payoffs)
    if (static_cast<int>(p.size()) != nj) throw std::invalid_argument("payoff table size");

  // Constant payoffs: every profile is an equilibrium.
  bool constant = true;
  for (int i = 0; i < n && constant; ++i)
    for (int j = 1; j < nj && constant; ++j) constant = g.payoffs[i][j] == g.payoffs[i][0];
  Best best;
  if (constant || n == 1) {
    int arg = 0;
    if (n == 1)
      for (int j = 1; j < nj; ++j)
        if (g.payoffs[0][j] > g.payoffs[0][arg]) arg = j;
    auto a = decode(g, arg);
    std::vector<std::vector<double>> profile;
    for (int i = 0; i < n; ++i) profile.push_back(pure(g.num_actions[i], a[i]));
    best.offer(g, std::move(profile));
    return best.result;
  }
  // No equilibrium beats the best pure welfare, so a pure equilibrium that
  // attains it is the answer the full search would keep.
  double top = -1e300;
  for (int j = 0; j < nj; ++j) {
    double w = 0.0;
    for (int i = 0; i < n; ++i) w += g.payoffs[i][j];
    top = std::max(top, w);
  }
  for (int j = 0; j < nj; ++j) {
    double w = 0.0;
    for (int i = 0; i < n; ++i) w += g.payoffs[i][j];
    if (w < top - 1e-12) continue;
    auto a = decode(g, j);
    std::vector<std::vector<double>> profile;
    for (int i = 0; i < n; ++i) profile.push_back(pure(g.num_actions[i], a[i]));
    if (nash_gap(g, profile) <= tol) {
      best.offer(g, std::move(profile));
      best.result.exact = n <= 2;
      return best.result;
    }
  }
  if (n == 2) {
    two_player(g, tol, best);
  } else {
    many_player(g, tol, best);
    best.result.exact = false;
  }
  if (!best.result.found) {
    // Report the pure profile closest to equilibrium.
    double gap = 1e300;
    for (int j = 0; j < nj; ++j) {
      auto a = decode(g, j);
      std::vector<std::vector<double>> profile;
      for (int i = 0; i < n; ++i) profile.push_back(pure(g.num_actions[i], a[i]));
      double gj = nash_gap(g, profile);
      if (gj < gap) {
        gap = gj;
        best.result.strategies = profile;
      }
    }
    best.result.values = profile_values(g, best.result.strategies);
  }
  return best.result;
}

}  // namespace nashspec
