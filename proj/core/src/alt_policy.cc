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

#include "dna/alt_policy.h"

#include <cmath>
#include <cstdlib>

#include "dna/error.h"
#include "dna/rng.h"

namespace dna {

bool InitialDelta(StateId s0, const Partition& part) { return !part.IsIn(s0); }

bool StepDelta(const AugmentedState& current, StateId next,
               const Partition& part) {
  return current.delta || !part.IsIn(next);
}

ActionId AlternativeAction(const AugmentedState& lambda, const Policy& pi_local,
                           const Policy& pi_star) {
  return lambda.delta ? pi_star[lambda.s] : pi_local[lambda.s];
}

const char* TerminationName(Termination t) {
  switch (t) {
    case Termination::kReachedEdge:
      return "reached_edge";
    case Termination::kExitedCorridor:
      return "exited_corridor";
    case Termination::kStepCap:
      return "step_cap";
    case Termination::kAbsorbed:
      return "absorbed";
  }
  return "unknown";
}

Trajectory Rollout(const TabularMdp& mdp, const Partition& part,
                   const Policy& pi_local, const Policy& pi_star, StateId s0,
                   std::uint64_t base_seed, std::uint64_t index,
                   const RolloutOptions& options) {
  if (pi_local.size() != mdp.num_states() || pi_star.size() != mdp.num_states()) {
    throw Error(ErrorCode::kSizeMismatch, "policies must cover every state");
  }
  const int cap = options.step_cap > 0 ? options.step_cap : 10 * mdp.num_states();
  std::mt19937_64 gen = StreamRng(base_seed, index);
  Trajectory traj;
  AugmentedState cur{s0, InitialDelta(s0, part)};
  traj.states.push_back(cur);
  double discount = 1.0;
  int tail_left = options.tail_steps;

  auto decide_at_switch = [&](StateId s) {
    traj.switch_index = static_cast<int>(traj.states.size()) - 1;
    traj.success = part.IsOmega(s);
    traj.reason = traj.success ? Termination::kReachedEdge
                               : Termination::kExitedCorridor;
  };

  if (cur.delta) decide_at_switch(s0);
  bool decided = cur.delta;
  for (int t = 0; t < cap; ++t) {
    if (decided && tail_left-- <= 0) break;
    if (mdp.IsAbsorbing(cur.s)) {
      const ActionId a = AlternativeAction(cur, pi_local, pi_star);
      traj.discounted_return += discount * mdp.reward(cur.s, a) / (1.0 - mdp.gamma());
      // An absorbing interior state never leaves S_in.
      if (!decided) traj.reason = Termination::kAbsorbed;
      decided = true;
      break;
    }
    const ActionId a = AlternativeAction(cur, pi_local, pi_star);
    traj.actions.push_back(a);
    traj.discounted_return += discount * mdp.reward(cur.s, a);
    discount *= mdp.gamma();
    const StateId next = SampleSuccessor(mdp.row(cur.s, a), UnitDouble(gen));
    cur = AugmentedState{next, StepDelta(cur, next, part)};
    traj.states.push_back(cur);
    if (!decided && cur.delta) {
      decide_at_switch(next);
      decided = true;
    }
  }
  if (!decided) traj.reason = Termination::kStepCap;
  return traj;
}

namespace {

bool InLatticeCell(const GridState& s, const std::vector<int>& center, int d) {
  for (int k = 0; k < s.dims(); ++k) {
    if (std::abs(s[k] - center[k]) > d) return false;
  }
  return true;
}

int DirectionSymbol(int dy, int dx) {
  if (std::abs(dy) >= std::abs(dx)) return dy < 0 ? 1 : 3;
  return dx < 0 ? 2 : 4;
}

}  // namespace

std::vector<int> ClassifyTrajectory(const Grid& grid,
                                    const std::vector<StateId>& states, int d,
                                    int spacing, int slots) {
  if (grid.dims() != 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "corridor descriptors are defined for 2-D grids");
  }
  if (states.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty trajectory");
  }
  if (d < 1 || spacing < 1 || slots < 1) {
    throw Error(ErrorCode::kInvalidArgument, "d, spacing and slots must be >= 1");
  }
  std::vector<int> descriptor(slots, 0);
  const GridState origin = grid.State(states.front());
  std::vector<int> center = origin.coords;
  int used = 0;
  for (StateId id : states) {
    if (used == slots) break;
    const GridState s = grid.State(id);
    if (InLatticeCell(s, center, d)) continue;
    std::vector<int> next;
    // Prefer the lattice neighbor the walk stepped into.
    static constexpr int kMoves[4][2] = {{-1, 0}, {0, -1}, {1, 0}, {0, 1}};
    for (const auto& mv : kMoves) {
      std::vector<int> cand = {center[0] + mv[0] * spacing,
                               center[1] + mv[1] * spacing};
      if (InLatticeCell(s, cand, d)) {
        next = std::move(cand);
        break;
      }
    }
    if (next.empty()) {
      next.resize(2);
      for (int k = 0; k < 2; ++k) {
        const double steps =
            std::round(static_cast<double>(s[k] - origin[k]) / spacing);
        next[k] = origin[k] + static_cast<int>(steps) * spacing;
      }
    }
    descriptor[used++] = DirectionSymbol(next[0] - center[0], next[1] - center[1]);
    center = std::move(next);
  }
  return descriptor;
}

long long DescriptorConfigurations(int slots) {
  if (slots < 1) throw Error(ErrorCode::kInvalidArgument, "slots must be >= 1");
  long long n = 1;
  for (int i = 1; i < slots; ++i) n *= 5;
  return n;
}

}  // namespace dna
