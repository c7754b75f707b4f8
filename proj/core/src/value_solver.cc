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

#include "dna/value_solver.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "dna/error.h"
#include "dna/rng.h"

namespace dna {

double QTable::Max(StateId s) const {
  double best = (*this)(s, 0);
  for (ActionId a = 1; a < num_actions_; ++a) best = std::max(best, (*this)(s, a));
  return best;
}

namespace {

double Backup(const TabularMdp& mdp, StateId s, ActionId a,
              const std::vector<double>& v) {
  double expected = 0.0;
  for (const Transition& t : mdp.row(s, a)) expected += t.prob * v[t.next];
  return mdp.reward(s, a) + mdp.gamma() * expected;
}

}  // namespace

ValueIterationResult ValueIteration(const TabularMdp& mdp, double tol,
                                    int max_iterations) {
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  }
  const int n = mdp.num_states();
  const int m = mdp.num_actions();
  QTable q(n, m, mdp.gamma());
  std::vector<double> v(n, 0.0);
  std::vector<double> next_v(n, 0.0);
  for (int it = 1; it <= max_iterations; ++it) {
    double residual = 0.0;
    for (StateId s = 0; s < n; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (ActionId a = 0; a < m; ++a) {
        const double updated = Backup(mdp, s, a, v);
        residual = std::max(residual, std::abs(updated - q(s, a)));
        q(s, a) = updated;
        best = std::max(best, updated);
      }
      next_v[s] = best;
    }
    v.swap(next_v);
    if (residual <= tol) {
      ValueIterationResult result{std::move(q), ValueTable{std::move(v)}, {}};
      result.stats.iterations = it;
      result.stats.residual = BellmanResidual(mdp, result.q);
      return result;
    }
  }
  throw Error(ErrorCode::kNotConverged,
              "value iteration did not reach tolerance in " +
                  std::to_string(max_iterations) + " iterations");
}

double BellmanResidual(const TabularMdp& mdp, const QTable& q) {
  const ValueTable v = MaxValues(q);
  double residual = 0.0;
  for (StateId s = 0; s < mdp.num_states(); ++s) {
    for (ActionId a = 0; a < mdp.num_actions(); ++a) {
      residual = std::max(residual, std::abs(q(s, a) - Backup(mdp, s, a, v.values)));
    }
  }
  return residual;
}

ValueTable EvaluatePolicy(const TabularMdp& mdp, const Policy& pi, double tol,
                          int max_iterations, SolveStats* stats) {
  if (pi.size() != mdp.num_states()) {
    throw Error(ErrorCode::kSizeMismatch, "policy does not cover every state");
  }
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  }
  const int n = mdp.num_states();
  std::vector<double> v(n, 0.0);
  std::vector<double> next(n, 0.0);
  for (int it = 1; it <= max_iterations; ++it) {
    double residual = 0.0;
    for (StateId s = 0; s < n; ++s) {
      next[s] = Backup(mdp, s, pi[s], v);
      residual = std::max(residual, std::abs(next[s] - v[s]));
    }
    v.swap(next);
    if (residual <= tol) {
      if (stats != nullptr) {
        stats->iterations = it;
        stats->residual = residual;
      }
      return ValueTable{std::move(v)};
    }
  }
  throw Error(ErrorCode::kNotConverged,
              "policy evaluation did not reach tolerance in " +
                  std::to_string(max_iterations) + " iterations");
}

ValueTable EvaluatePolicyExact(const TabularMdp& mdp, const Policy& pi) {
  if (pi.size() != mdp.num_states()) {
    throw Error(ErrorCode::kSizeMismatch, "policy does not cover every state");
  }
  const int n = mdp.num_states();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b(n);
  for (StateId s = 0; s < n; ++s) {
    b(s) = mdp.reward(s, pi[s]);
    for (const Transition& t : mdp.row(s, pi[s])) {
      a(s, t.next) -= mdp.gamma() * t.prob;
    }
  }
  const Eigen::VectorXd x = a.partialPivLu().solve(b);
  ValueTable v{std::vector<double>(x.data(), x.data() + n)};
  return v;
}

QTable PolicyActionValues(const TabularMdp& mdp, const ValueTable& v) {
  QTable q(mdp.num_states(), mdp.num_actions(), mdp.gamma());
  for (StateId s = 0; s < mdp.num_states(); ++s) {
    for (ActionId a = 0; a < mdp.num_actions(); ++a) {
      q(s, a) = Backup(mdp, s, a, v.values);
    }
  }
  return q;
}

Policy GreedyPolicy(const QTable& q) {
  Policy pi;
  pi.actions.resize(q.num_states());
  for (StateId s = 0; s < q.num_states(); ++s) {
    ActionId best = 0;
    for (ActionId a = 1; a < q.num_actions(); ++a) {
      if (q(s, a) > q(s, best)) best = a;
    }
    pi.actions[s] = best;
  }
  return pi;
}

ValueTable MaxValues(const QTable& q) {
  ValueTable v{std::vector<double>(q.num_states())};
  for (StateId s = 0; s < q.num_states(); ++s) v[s] = q.Max(s);
  return v;
}

std::vector<ActionId> ArgmaxSet(const QTable& q, StateId s, double tol) {
  const double best = q.Max(s);
  std::vector<ActionId> out;
  for (ActionId a = 0; a < q.num_actions(); ++a) {
    if (q(s, a) >= best - tol) out.push_back(a);
  }
  return out;
}

void QLearnConfig::Validate() const {
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be in (0, 1]");
  }
  if (!(exploration_start > 0.0 && exploration_start <= 1.0) ||
      !(exploration_end > 0.0 && exploration_end <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "exploration rates must be in (0, 1]");
  }
  if (max_episodes < 0 || max_steps_per_episode <= 0 ||
      convergence_window <= 0 || exploration_decay_episodes < 0) {
    throw Error(ErrorCode::kInvalidArgument, "Q-learning caps must be positive");
  }
  if (!(convergence_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "convergence tolerance must be positive");
  }
}

QLearnConfig PreciseQLearnConfig(std::uint64_t seed) {
  QLearnConfig c;
  c.learning_rate = 1.0;
  c.schedule = LearningRateSchedule::kRescaledLinear;
  c.exploration_start = 1.0;
  c.exploration_end = 1.0;
  c.max_episodes = 100'000'000;
  c.max_steps_per_episode = 50;
  c.convergence_tol = 1e-12;
  c.convergence_window = c.max_episodes;
  c.seed = seed;
  return c;
}

EpisodicTask EpisodicTask::ExploringStarts(const TabularMdp& mdp) {
  EpisodicTask task;
  task.start_states.resize(mdp.num_states());
  for (StateId s = 0; s < mdp.num_states(); ++s) task.start_states[s] = s;
  task.end_after_absorbing = true;
  return task;
}

QLearnResult QLearning(const TabularMdp& mdp, const EpisodicTask& task,
                       const QLearnConfig& cfg, const QTable* initial) {
  cfg.Validate();
  if (cfg.max_episodes == 0) {
    throw Error(ErrorCode::kCapExhausted,
                "episode cap of zero leaves the table untrained");
  }
  if (task.start_states.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "episodic task has no start states");
  }
  if (!task.terminal_value.empty() &&
      static_cast<int>(task.terminal_value.size()) != mdp.num_states()) {
    throw Error(ErrorCode::kSizeMismatch, "terminal value table size mismatch");
  }
  const int n = mdp.num_states();
  const int m = mdp.num_actions();
  const double gamma = mdp.gamma();
  QTable q = initial != nullptr ? *initial : QTable(n, m, gamma);
  if (q.num_states() != n || q.num_actions() != m) {
    throw Error(ErrorCode::kSizeMismatch, "initial Q table shape mismatch");
  }
  std::vector<std::int64_t> visits(static_cast<std::size_t>(n) * m, 0);
  std::mt19937_64 gen(cfg.seed);
  std::vector<char> absorbing(n, 0);
  if (task.end_after_absorbing) {
    for (StateId s = 0; s < n; ++s) absorbing[s] = mdp.IsAbsorbing(s);
  }

  const std::int64_t decay = cfg.exploration_decay_episodes > 0
                                 ? cfg.exploration_decay_episodes
                                 : cfg.max_episodes;
  auto rate = [&](std::int64_t k) {
    switch (cfg.schedule) {
      case LearningRateSchedule::kInverseSqrtVisits:
        return cfg.learning_rate / std::sqrt(static_cast<double>(k));
      case LearningRateSchedule::kRescaledLinear:
        return std::min(cfg.learning_rate,
                        1.0 / (1.0 + (1.0 - gamma) * static_cast<double>(k)));
      case LearningRateSchedule::kConstant:
        break;
    }
    return cfg.learning_rate;
  };

  QLearnDiagnostics diag;
  double window_change = 0.0;
  for (std::int64_t episode = 0; episode < cfg.max_episodes; ++episode) {
    const double frac =
        std::min(1.0, static_cast<double>(episode) / static_cast<double>(decay));
    const double explore =
        cfg.exploration_start + (cfg.exploration_end - cfg.exploration_start) * frac;
    StateId s = task.start_states[gen() % task.start_states.size()];
    for (int step = 0; step < cfg.max_steps_per_episode; ++step) {
      if (task.IsTerminal(s)) break;
      ActionId a;
      if (UnitDouble(gen) < explore) {
        a = static_cast<ActionId>(gen() % m);
      } else {
        a = 0;
        for (ActionId b = 1; b < m; ++b) {
          if (q(s, b) > q(s, a)) a = b;
        }
      }
      const StateId next = SampleSuccessor(mdp.row(s, a), UnitDouble(gen));
      const double bootstrap =
          task.IsTerminal(next) ? task.terminal_value[next] : q.Max(next);
      const double target = mdp.reward(s, a) + gamma * bootstrap;
      std::int64_t& k = visits[static_cast<std::size_t>(s) * m + a];
      ++k;
      const double delta = rate(k) * (target - q(s, a));
      q(s, a) += delta;
      window_change = std::max(window_change, std::abs(delta));
      ++diag.steps;
      if (absorbing[s]) break;
      s = next;
    }
    ++diag.episodes;
    if (diag.episodes % cfg.convergence_window == 0) {
      diag.last_window_change = window_change;
      if (window_change < cfg.convergence_tol) {
        diag.converged = true;
        break;
      }
      window_change = 0.0;
    }
  }
  if (!diag.converged && diag.episodes % cfg.convergence_window != 0) {
    diag.last_window_change = window_change;
  }
  diag.bellman_residual = BellmanResidual(mdp, q);
  if (!diag.converged && cfg.require_convergence) {
    throw Error(ErrorCode::kCapExhausted,
                "Q-learning hit its episode cap; last window change " +
                    std::to_string(diag.last_window_change) +
                    ", Bellman residual " +
                    std::to_string(diag.bellman_residual));
  }
  return QLearnResult{std::move(q), diag};
}

QLearnResult QLearning(const TabularMdp& mdp, const QLearnConfig& cfg) {
  return QLearning(mdp, EpisodicTask::ExploringStarts(mdp), cfg);
}

}  // namespace dna
