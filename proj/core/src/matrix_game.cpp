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
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nashspec/game_solving.hpp"

namespace nashspec {

namespace {

constexpr double kPivotEps = 1e-12;

// max 1^T w  s.t.  P w <= 1, w >= 0, for strictly positive P. Returns w and
// the dual prices of the rows.
void simplex(const MatrixGame& p, std::vector<double>& w, std::vector<double>& u) {
  const int m = p.rows, n = p.cols, width = n + m;
  std::vector<double> t(static_cast<std::size_t>(m) * width, 0.0), rhs(m, 1.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t[i * width + j] = p.at(i, j);
    t[i * width + n + i] = 1.0;
  }
  std::vector<double> rc(width, 0.0);  // reduced costs c_j - z_j
  for (int j = 0; j < n; ++j) rc[j] = 1.0;
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  for (int iter = 0;; ++iter) {
    if (iter > 10000) throw std::logic_error("simplex did not terminate");
    int enter = -1;
    for (int j = 0; j < width; ++j)
      if (rc[j] > kPivotEps) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      double a = t[i * width + enter];
      if (a <= kPivotEps) continue;
      double ratio = rhs[i] / a;
      if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis[i] < basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0) throw std::logic_error("unbounded matrix game LP");
    double piv = t[leave * width + enter];
    for (int j = 0; j < width; ++j) t[leave * width + j] /= piv;
    rhs[leave] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = t[i * width + enter];
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) t[i * width + j] -= f * t[leave * width + j];
      rhs[i] -= f * rhs[leave];
    }
    double f = rc[enter];
    for (int j = 0; j < width; ++j) rc[j] -= f * t[leave * width + j];
    basis[leave] = enter;
  }
  w.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) w[basis[i]] = rhs[i];
  u.assign(m, 0.0);
  for (int i = 0; i < m; ++i) u[i] = std::max(0.0, -rc[n + i]);
}

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double& x : v) {
    x = std::max(0.0, x);
    s += x;
  }
  for (double& x : v) x /= s;
}

}  // namespace

StageOutcome solve_matrix_game(const MatrixGame& g) {
  if (g.rows < 1 || g.cols < 1) throw std::invalid_argument("matrix game needs at least one action per player");
  for (double v : g.payoff)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite payoff");

  // Pure saddle point.
  int best_row = 0, best_col = 0;
  double maximin = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.rows; ++i) {
    double lo = g.at(i, 0);
    for (int j = 1; j < g.cols; ++j) lo = std::min(lo, g.at(i, j));
    if (lo > maximin) {
      maximin = lo;
      best_row = i;
    }
  }
  double minimax = std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.cols; ++j) {
    double hi = g.at(0, j);
    for (int i = 1; i < g.rows; ++i) hi = std::max(hi, g.at(i, j));
    if (hi < minimax) {
      minimax = hi;
      best_col = j;
    }
  }
  StageOutcome out;
  if (maximin == minimax) {
    out.value = maximin;
    out.row_strategy.assign(g.rows, 0.0);
    out.col_strategy.assign(g.cols, 0.0);
    out.row_strategy[best_row] = 1.0;
    out.col_strategy[best_col] = 1.0;
    return out;
  }

  double lo = *std::min_element(g.payoff.begin(), g.payoff.end());
  double shift = 1.0 - lo;
  MatrixGame shifted = g;
  for (double& v : shifted.payoff) v += shift;
  std::vector<double> w, u;
  simplex(shifted, w, u);
  double total = 0.0;
  for (double x : w) total += x;
  out.value = 1.0 / total - shift;
  out.col_strategy = w;
  out.row_strategy = u;
  normalize(out.col_strategy);
  normalize(out.row_strategy);
  return out;
}

double expected_payoff(const MatrixGame& g, const std::vector<double>& x, const std::vector<double>& y) {
  double v = 0.0;
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) v += x[i] * g.at(i, j) * y[j];
  return v;
}

double exploitability(const MatrixGame& g, const StageOutcome& out) {
  double row_best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.rows; ++i) {
    double v = 0.0;
    for (int j = 0; j < g.cols; ++j) v += g.at(i, j) * out.col_strategy[j];
    row_best = std::max(row_best, v);
  }
  double col_best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.cols; ++j) {
    double v = 0.0;
    for (int i = 0; i < g.rows; ++i) v += out.row_strategy[i] * g.at(i, j);
    col_best = std::min(col_best, v);
  }
  return std::max(row_best - out.value, out.value - col_best);
}

}  // namespace nashspec
