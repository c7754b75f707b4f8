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

#include "dna/local_problem.h"

#include <utility>

#include "dna/error.h"

namespace dna {

LocalMdp BuildLocalMdp(const TabularMdp& base, const Partition& partition,
                       const ValueTable& vstar) {
  const int n = base.num_states();
  if (vstar.size() != n) {
    throw Error(ErrorCode::kSizeMismatch,
                "benchmark value table has " + std::to_string(vstar.size()) +
                    " entries for " + std::to_string(n) + " states");
  }
  if (partition.num_states() != n) {
    throw Error(ErrorCode::kSizeMismatch, "partition size mismatch");
  }
  const double gamma = base.gamma();
  TabularMdp::Builder builder(n, base.num_actions(), gamma);
  for (StateId s = 0; s < n; ++s) {
    for (ActionId a = 0; a < base.num_actions(); ++a) {
      switch (partition.region[s]) {
        case Region::kIn: {
          const auto row = base.row(s, a);
          builder.Set(s, a, TransitionRow(row.begin(), row.end()),
                      base.reward(s, a));
          break;
        }
        case Region::kOmega:
          builder.Set(s, a, {{s, 1.0}}, (1.0 - gamma) * vstar[s]);
          break;
        case Region::kOut:
          builder.Set(s, a, {{s, 1.0}}, 0.0);
          break;
      }
    }
  }
  return LocalMdp{std::move(builder).Build(), partition, vstar};
}

LocalSolution SolveLocalExact(const LocalMdp& local, double tol) {
  ValueIterationResult vi = ValueIteration(local.mdp, tol);
  LocalSolution out;
  out.pi = GreedyPolicy(vi.q);
  out.q = std::move(vi.q);
  out.v = std::move(vi.v);
  out.stats = vi.stats;
  return out;
}

LocalSolution SolveLocalQLearning(const LocalMdp& local, const QTable& qstar,
                                  const QLearnConfig& cfg) {
  const int n = local.mdp.num_states();
  const int m = local.mdp.num_actions();
  if (qstar.num_states() != n || qstar.num_actions() != m) {
    throw Error(ErrorCode::kSizeMismatch, "benchmark Q table shape mismatch");
  }
  const Partition& part = local.partition;
  EpisodicTask task;
  task.start_states = part.in;
  task.terminal_value.assign(n, kNonTerminal);
  QTable init(n, m, local.mdp.gamma());
  for (StateId s : part.omega) {
    task.terminal_value[s] = local.vstar[s];
    for (ActionId a = 0; a < m; ++a) init(s, a) = qstar(s, a);
  }
  for (StateId s : part.out) task.terminal_value[s] = 0.0;

  LocalSolution out;
  if (part.in.empty()) {
    out.q = init;
  } else {
    QLearnResult learned = QLearning(local.mdp, task, cfg, &init);
    out.q = std::move(learned.q);
    out.learning = learned.diagnostics;
    out.stats.iterations = static_cast<int>(learned.diagnostics.episodes);
  }
  // Express edge and outside rows in local-MDP terms.
  for (StateId s : part.omega) {
    for (ActionId a = 0; a < m; ++a) out.q(s, a) = local.vstar[s];
  }
  for (StateId s : part.out) {
    for (ActionId a = 0; a < m; ++a) out.q(s, a) = 0.0;
  }
  out.v = MaxValues(out.q);
  out.pi = GreedyPolicy(out.q);
  out.stats.residual = BellmanResidual(local.mdp, out.q);
  if (out.learning) out.learning->bellman_residual = out.stats.residual;
  return out;
}

}  // namespace dna
