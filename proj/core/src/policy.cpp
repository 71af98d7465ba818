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

#include "nashspec/policy.hpp"

#include <algorithm>
#include <stdexcept>

namespace nashspec {

std::span<double> QTable::row(const QKey& k) {
  auto [it, inserted] = index_.try_emplace(k, values_.size());
  if (inserted) values_.resize(values_.size() + num_actions_, 0.0);
  return {values_.data() + it->second, static_cast<std::size_t>(num_actions_)};
}

std::span<const double> QTable::find(const QKey& k) const {
  auto it = index_.find(k);
  if (it == index_.end()) return {};
  return {values_.data() + it->second, static_cast<std::size_t>(num_actions_)};
}

int QTable::greedy(const QKey& k) const {
  auto r = find(k);
  if (r.empty()) return 0;
  return static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
}

int QTable::greedy_or(const QKey& k, int preferred) const {
  auto r = find(k);
  if (r.empty()) return preferred;
  double best = *std::max_element(r.begin(), r.end());
  if (r[preferred] == best) return preferred;
  return static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
}

double QTable::max_value(const QKey& k) const {
  auto r = find(k);
  if (r.empty()) return 0.0;
  return *std::max_element(r.begin(), r.end());
}

int QTable::epsilon_greedy(const QKey& k, double epsilon, Rng& rng) const {
  if (uniform01(rng) < epsilon) return std::uniform_int_distribution<int>(0, num_actions_ - 1)(rng);
  auto r = find(k);
  if (r.empty()) return std::uniform_int_distribution<int>(0, num_actions_ - 1)(rng);
  const double best = *std::max_element(r.begin(), r.end());
  int ties = 0, pick = 0;
  for (int a = 0; a < num_actions_; ++a)
    if (r[a] == best && std::uniform_int_distribution<int>(0, ties++)(rng) == 0) pick = a;
  return pick;
}

void QTable::update(const QKey& k, int action, double target, double learning_rate) {
  double& q = row(k)[action];
  q += learning_rate * (target - q);
}

PathPolicy::PathPolicy(const MarkovGame& game, std::shared_ptr<const ProductGraph> graph, std::vector<int> path,
                       std::vector<std::shared_ptr<const EdgePolicy>> edge_policies)
    : game_(&game), graph_(std::move(graph)), path_(std::move(path)), policies_(std::move(edge_policies)) {
  if (policies_.size() != path_.size()) throw std::invalid_argument("one edge policy per path edge");
  for (int e : path_) trackers_.emplace_back(*graph_, e);
  intern(0, 0);
}

int PathPolicy::intern(int z, std::uint32_t status) const {
  std::uint64_t key = (static_cast<std::uint64_t>(z) << 32) | status;
  auto [it, inserted] = memory_ids_.try_emplace(key, static_cast<int>(memories_.size()));
  if (inserted) memories_.emplace_back(z, status);
  return it->second;
}

std::pair<int, int> PathPolicy::step(StateId s, int m) const {
  const int len = static_cast<int>(path_.size());
  if (len == 0) return {m, 0};
  std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s)) << 32) | static_cast<std::uint32_t>(m);
  auto hit = memo_.find(key);
  if (hit != memo_.end()) return hit->second;
  auto [z, status] = memories_.at(m);
  if (z < len) {
    const AtomMask label = game_->predicates().label(s);
    while (true) {
      auto out = trackers_[z].advance(status, label);
      if (!out.achieved) break;
      if (z + 1 == len) {
        z = len;
        break;
      }
      ++z;
      status = 0;
    }
  }
  int action = policies_[std::min(z, len - 1)]->act(s, status);
  std::pair<int, int> result{intern(z, status), action};
  memo_.emplace(key, result);
  return result;
}

}  // namespace nashspec
