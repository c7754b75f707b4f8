// Copyright 2026 The DNA Authors
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

#ifndef DNA_VALUE_SOLVER_H_
#define DNA_VALUE_SOLVER_H_

#include <cstdint>
#include <limits>
#include <vector>

#include "dna/tabular_mdp.h"

namespace dna {

class QTable {
 public:
  QTable() = default;
  QTable(int num_states, int num_actions, double gamma, double fill = 0.0)
      : num_states_(num_states),
        num_actions_(num_actions),
        gamma_(gamma),
        values_(static_cast<std::size_t>(num_states) * num_actions, fill) {}

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  double gamma() const { return gamma_; }

  double operator()(StateId s, ActionId a) const {
    return values_[static_cast<std::size_t>(s) * num_actions_ + a];
  }
  double& operator()(StateId s, ActionId a) {
    return values_[static_cast<std::size_t>(s) * num_actions_ + a];
  }
  double Max(StateId s) const;
  const std::vector<double>& values() const { return values_; }

 private:
  int num_states_ = 0;
  int num_actions_ = 0;
  double gamma_ = 0.0;
  std::vector<double> values_;
};

struct ValueTable {
  std::vector<double> values;

  double operator[](StateId s) const { return values[s]; }
  double& operator[](StateId s) { return values[s]; }
  int size() const { return static_cast<int>(values.size()); }
};

struct Policy {
  std::vector<ActionId> actions;

  ActionId operator[](StateId s) const { return actions[s]; }
  int size() const { return static_cast<int>(actions.size()); }

  friend bool operator==(const Policy&, const Policy&) = default;
};

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
};

struct ValueIterationResult {
  QTable q;
  ValueTable v;
  SolveStats stats;
};

inline constexpr double kDefaultValueTolerance = 1e-10;
inline constexpr int kDefaultIterationCap = 1'000'000;

// Synchronous Bellman optimality backups until the max-norm residual drops to
// `tol`. Throws kNotConverged when the cap is hit first.
ValueIterationResult ValueIteration(const TabularMdp& mdp,
                                    double tol = kDefaultValueTolerance,
                                    int max_iterations = kDefaultIterationCap);

// max_{s,a} |Q(s,a) - [R(s,a) + gamma * sum_s' T(s,a,s') max_a' Q(s',a')]|.
double BellmanResidual(const TabularMdp& mdp, const QTable& q);

// Fixed point of V(s) = R(s, pi(s)) + gamma * sum T(s, pi(s), s') V(s').
ValueTable EvaluatePolicy(const TabularMdp& mdp, const Policy& pi,
                          double tol = kDefaultValueTolerance,
                          int max_iterations = kDefaultIterationCap,
                          SolveStats* stats = nullptr);

// Same fixed point by a dense LU solve of (I - gamma P_pi) V = R_pi. Exact up
// to rounding; meant for state spaces of a few hundred states.
ValueTable EvaluatePolicyExact(const TabularMdp& mdp, const Policy& pi);

// Q^pi(s, a) = R(s,a) + gamma * sum T(s,a,s') V^pi(s').
QTable PolicyActionValues(const TabularMdp& mdp, const ValueTable& v);

// Argmax per state, lowest action id on ties.
Policy GreedyPolicy(const QTable& q);

ValueTable MaxValues(const QTable& q);

// Actions within `tol` of the best value at s.
std::vector<ActionId> ArgmaxSet(const QTable& q, StateId s, double tol);

enum class LearningRateSchedule {
  kInverseSqrtVisits,  // alpha0 / sqrt(n)
  kRescaledLinear,     // 1 / (1 + (1 - gamma) * n)
  kConstant,
};

struct QLearnConfig {
  double learning_rate = 0.1;
  LearningRateSchedule schedule = LearningRateSchedule::kInverseSqrtVisits;
  double exploration_start = 1.0;
  double exploration_end = 0.05;
  // Episodes over which exploration decays linearly; 0 means max_episodes.
  std::int64_t exploration_decay_episodes = 0;
  std::int64_t max_episodes = 200'000;
  int max_steps_per_episode = 200;
  double convergence_tol = 1e-4;
  std::int64_t convergence_window = 1000;  // episodes per sweep window
  std::uint64_t seed = 0;
  // Throw kCapExhausted instead of returning an unconverged table.
  bool require_convergence = false;

  void Validate() const;
};

// Settings that reach a max-norm Q error of a few hundredths on 10x10
// stochastic maps with gamma 0.95: per-pair rescaled-linear steps, uniform
// behaviour, short episodes and a large episode budget (~1 min on one core).
QLearnConfig PreciseQLearnConfig(std::uint64_t seed);

// Episode structure for Q-learning on a TabularMdp. Episodes start uniformly
// over `start_states`. Entering a state with a terminal value ends the
// episode and the update bootstraps from that fixed value instead of Q.
// With `end_after_absorbing`, an episode stops right after the update made
// from an absorbing state, since later steps would only repeat that state.
struct EpisodicTask {
  std::vector<StateId> start_states;
  std::vector<double> terminal_value;  // NaN for non-terminal states
  bool end_after_absorbing = false;

  static EpisodicTask ExploringStarts(const TabularMdp& mdp);
  bool IsTerminal(StateId s) const {
    return !terminal_value.empty() && terminal_value[s] == terminal_value[s];
  }
};

inline constexpr double kNonTerminal = std::numeric_limits<double>::quiet_NaN();

struct QLearnDiagnostics {
  std::int64_t episodes = 0;
  std::int64_t steps = 0;
  bool converged = false;
  double last_window_change = 0.0;  // max |dQ| over the final window
  double bellman_residual = 0.0;    // against the model, for reporting
};

struct QLearnResult {
  QTable q;
  QLearnDiagnostics diagnostics;
};

// Tabular epsilon-greedy Q-learning. Deterministic for a fixed seed.
// `initial`, when given, seeds the table (terminal states are never updated).
QLearnResult QLearning(const TabularMdp& mdp, const EpisodicTask& task,
                       const QLearnConfig& cfg, const QTable* initial = nullptr);

// Q-learning with exploring starts over every state.
QLearnResult QLearning(const TabularMdp& mdp, const QLearnConfig& cfg);

}  // namespace dna

#endif  // DNA_VALUE_SOLVER_H_
