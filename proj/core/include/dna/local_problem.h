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

#ifndef DNA_LOCAL_PROBLEM_H_
#define DNA_LOCAL_PROBLEM_H_

#include <optional>

#include "dna/corridor.h"
#include "dna/tabular_mdp.h"
#include "dna/value_solver.h"

namespace dna {

// Reward-shaped local MDP of a corridor. Interior states keep the base
// dynamics and rewards; edge states are absorbing with per-step reward
// (1 - gamma) V*(s), so their discounted value is V*(s); every other state is
// absorbing with reward zero.
struct LocalMdp {
  TabularMdp mdp;
  Partition partition;
  ValueTable vstar;
};

LocalMdp BuildLocalMdp(const TabularMdp& base, const Partition& partition,
                       const ValueTable& vstar);

struct LocalSolution {
  QTable q;
  ValueTable v;
  Policy pi;
  SolveStats stats;
  std::optional<QLearnDiagnostics> learning;
};

LocalSolution SolveLocalExact(const LocalMdp& local,
                              double tol = kDefaultValueTolerance);

// Episodic learning: episodes start uniformly in S_in and end when
// the walk leaves the interior. Stepping onto the edge bootstraps from the
// pinned optimal value, stepping outside bootstraps from zero. Edge rows of
// the returned table hold V*(s), outside rows hold zero.
LocalSolution SolveLocalQLearning(const LocalMdp& local, const QTable& qstar,
                                  const QLearnConfig& cfg);

}  // namespace dna

#endif  // DNA_LOCAL_PROBLEM_H_
