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

#ifndef DNA_ALT_POLICY_H_
#define DNA_ALT_POLICY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dna/corridor.h"
#include "dna/tabular_mdp.h"
#include "dna/value_solver.h"

namespace dna {

// Grid state plus the one-way switching bit: delta flips to 1 the first time
// the walk is outside the corridor interior and never flips back.
struct AugmentedState {
  StateId s = 0;
  bool delta = false;

  friend bool operator==(const AugmentedState&, const AugmentedState&) = default;
};

// Delta_0: 0 inside the interior, 1 otherwise.
bool InitialDelta(StateId s0, const Partition& part);

// Delta_{t+1} = 1 if next is not interior or Delta_t = 1, else 0.
bool StepDelta(const AugmentedState& current, StateId next,
               const Partition& part);

// Local policy while delta = 0, benchmark policy afterwards.
ActionId AlternativeAction(const AugmentedState& lambda, const Policy& pi_local,
                           const Policy& pi_star);

enum class Termination {
  kReachedEdge,
  kExitedCorridor,
  kStepCap,
  kAbsorbed,
};

const char* TerminationName(Termination t);

struct Trajectory {
  std::vector<AugmentedState> states;
  std::vector<ActionId> actions;  // actions[t] taken in states[t]
  double discounted_return = 0.0;
  Termination reason = Termination::kStepCap;
  bool success = false;
  // First index with delta = 1, if any.
  std::optional<int> switch_index;
};

struct RolloutOptions {
  int step_cap = 0;  // 0 means 10 * |S|
  // Steps to keep following the benchmark policy after the switch, for
  // playback. Success is decided at the switch either way.
  int tail_steps = 0;
};

// Samples one trajectory of the alternative policy from s0. Success means the
// first state outside the interior lies on the terminal edge.
Trajectory Rollout(const TabularMdp& mdp, const Partition& part,
                   const Policy& pi_local, const Policy& pi_star, StateId s0,
                   std::uint64_t base_seed, std::uint64_t index,
                   const RolloutOptions& options = {});

// Corridor descriptor of a 2-D trajectory. Cells are laid on the lattice of
// centers s0 + spacing * (i, j) with half-width d; a new symbol is emitted
// each time the walk leaves the current cell, giving the direction of the
// move: 1 = north, 2 = west, 3 = south, 4 = east, 0 = unused slot.
std::vector<int> ClassifyTrajectory(const Grid& grid,
                                    const std::vector<StateId>& states, int d,
                                    int spacing, int slots);

// 5^(slots - 1) relative corridor configurations.
long long DescriptorConfigurations(int slots);

}  // namespace dna

#endif  // DNA_ALT_POLICY_H_
