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

#ifndef NASHSPEC_MARKOV_GAME_HPP_
#define NASHSPEC_MARKOV_GAME_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nashspec/automata.hpp"
#include "nashspec/spec.hpp"

namespace nashspec {

using Rng = std::mt19937_64;

double uniform01(Rng& rng);

using Distribution = std::vector<std::pair<StateId, double>>;

// Finite-horizon n-agent game with a resettable simulator: sample_next accepts
// any state id handed out earlier, not just the current one.
class MarkovGame {
 public:
  virtual ~MarkovGame() = default;

  int num_agents() const { return static_cast<int>(num_actions_.size()); }
  int num_actions(int agent) const { return num_actions_.at(agent); }
  int num_joint_actions() const { return num_joint_; }
  int horizon() const { return horizon_; }
  void set_horizon(int h) { horizon_ = h; }
  StateId initial_state() const { return initial_; }

  // Agent 0 is the least significant digit.
  int encode_joint(std::span<const int> actions) const;
  std::vector<int> decode_joint(int joint) const;
  int component(int joint, int agent) const;
  int with_component(int joint, int agent, int action) const;

  virtual StateId sample_next(StateId s, int joint, Rng& rng) const;
  // Exact successor probabilities; used by oracles, not by the learners.
  virtual const Distribution& transition(StateId s, int joint) const = 0;
  virtual std::string state_name(StateId s) const = 0;
  virtual int num_known_states() const = 0;

  const PredicateTable& predicates() const { return predicates_; }
  PredicateTable& predicates() { return predicates_; }

  // Count of sample_next calls since construction.
  std::uint64_t samples_drawn() const { return samples_; }

 protected:
  void set_actions(std::vector<int> per_agent);
  void set_initial(StateId s) { initial_ = s; }

  PredicateTable predicates_;

 private:
  std::vector<int> num_actions_;
  int num_joint_ = 1;
  int horizon_ = 1;
  StateId initial_ = 0;
  mutable std::uint64_t samples_ = 0;
};

// Game over integer vectors. States get dense ids in the order they are
// first seen and successor distributions are cached per (state, action).
class FactoredGame : public MarkovGame {
 public:
  using Vars = std::vector<int>;

  FactoredGame() = default;
  // Atom evaluators capture `this`.
  FactoredGame(const FactoredGame&) = delete;
  FactoredGame& operator=(const FactoredGame&) = delete;

  const Distribution& transition(StateId s, int joint) const override;
  std::string state_name(StateId s) const override;
  int num_known_states() const override { return static_cast<int>(states_.size()); }

  StateId intern(const Vars& x) const;
  const Vars& vars(StateId s) const { return states_.at(s); }

 protected:
  virtual std::vector<std::pair<Vars, double>> successors(const Vars& x,
                                                          const std::vector<int>& actions) const = 0;

 private:
  mutable std::vector<Vars> states_;
  mutable std::map<Vars, StateId> ids_;
  mutable std::vector<std::vector<Distribution>> cache_;
};

// Cars on two axes approaching one shared intersection cell (position 1).
// MOVE lowers the position by one with probability 1 - failure; position 0
// is past the intersection and absorbing. A car is in a collision when it
// and another car both occupy the intersection cell; queued cars upstream
// are in separate lanes and never collide.
//
// Atoms per car i: crossed_i, at_int_i, collide_i, safe_i, and ahead_i_j for
// every other car j (i has crossed, or is at least two cells closer to the
// intersection than j).
class IntersectionGame : public FactoredGame {
 public:
  enum class Axis { kNorthSouth, kEastWest };
  struct Car {
    Axis axis;
    int start;
  };

  IntersectionGame(std::vector<Car> cars, int horizon, double failure = 0.05);
  const std::vector<Car>& cars() const { return cars_; }
  double failure() const { return failure_; }

 protected:
  std::vector<std::pair<Vars, double>> successors(const Vars& x,
                                                  const std::vector<int>& actions) const override;

 private:
  std::vector<Car> cars_;
  double failure_;
};

// k agents on a track 0..length. MOVE advances one cell; the goal cell is
// absorbing. In the default shared mode a lane-wide stall happens with
// probability `failure` and blocks every MOVE of that step; in independent
// mode each MOVE fails on its own coin.
//
// Atoms per agent i: goal_i (at the end), mid_i (at or past length / 2).
class SingleLaneGame : public FactoredGame {
 public:
  enum class FailureMode { kShared, kIndependent };

  SingleLaneGame(int agents, int length, int horizon, double failure = 0.05,
                 FailureMode mode = FailureMode::kShared);
  int length() const { return length_; }
  int midpoint() const { return length_ / 2; }

 protected:
  std::vector<std::pair<Vars, double>> successors(const Vars& x,
                                                  const std::vector<int>& actions) const override;

 private:
  int length_;
  double failure_;
  FailureMode mode_;
};

// Two agents on a size x size grid starting in opposite corners (0,0) and
// (size-1,size-1). Actions: stay, north, south, east, west. A move fails with
// probability `failure`; moves off the grid are clipped.
//
// Atoms: at_i_x_y for every agent and cell, collide_i and safe_i.
class GridworldGame : public FactoredGame {
 public:
  GridworldGame(int horizon, int size = 4, double failure = 0.05);
  int size() const { return size_; }

 protected:
  std::vector<std::pair<Vars, double>> successors(const Vars& x,
                                                  const std::vector<int>& actions) const override;

 private:
  int size_;
  double failure_;
};

// History-dependent joint policy. Per step: act() at the current state, then
// observe() with the joint action actually executed.
class JointPolicy {
 public:
  virtual ~JointPolicy() = default;
  virtual void reset() = 0;
  virtual int act(StateId s, Rng& rng) = 0;
  virtual void observe(StateId s, int joint_action) = 0;
  // Compact key of the internal memory, for learners that condition on it.
  virtual std::uint64_t memory_key() const = 0;
  virtual std::unique_ptr<JointPolicy> clone() const = 0;
};

// Always plays the same joint action.
class ConstantPolicy : public JointPolicy {
 public:
  explicit ConstantPolicy(int joint) : joint_(joint) {}
  void reset() override {}
  int act(StateId, Rng&) override { return joint_; }
  void observe(StateId, int) override {}
  std::uint64_t memory_key() const override { return 0; }
  std::unique_ptr<JointPolicy> clone() const override { return std::make_unique<ConstantPolicy>(*this); }

 private:
  int joint_;
};

Trajectory sample_trajectory(const MarkovGame& game, JointPolicy& policy, StateId from, int steps,
                             Rng& rng);

// Spec plus its compiled automaton for fast trajectory checks.
struct CompiledSpec {
  Spec spec;
  std::shared_ptr<const FiniteAutomaton> dfa;
  RewardMachine rm;

  explicit CompiledSpec(Spec s, int state_cap = kDefaultStateCap);
  bool check(std::span<const AtomMask> labels) const { return dfa->accepts(labels); }
};

struct ScoreReport {
  std::vector<double> J;
  double welfare = 0.0;
  int samples = 0;
  double welfare_stderr = 0.0;
};

ScoreReport estimate_scores(const MarkovGame& game, JointPolicy& policy,
                            const std::vector<CompiledSpec>& specs, int num_samples, Rng& rng);

}  // namespace nashspec

#endif  // NASHSPEC_MARKOV_GAME_HPP_
