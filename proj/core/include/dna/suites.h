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

#ifndef DNA_SUITES_H_
#define DNA_SUITES_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dna/corridor.h"
#include "dna/grid_mdp.h"
#include "dna/guarantees.h"
#include "dna/rollout_sim.h"
#include "dna/search.h"

namespace dna {

// Integer in [0, n) built from the portable unit draw.
int UniformIndex(std::mt19937_64& gen, int n);

struct RandomInstanceOptions {
  int min_side = 3;
  int max_side = 6;
  double hole_probability = 0.2;
  std::vector<double> gammas = {0.9, 0.95};
  std::vector<double> slips = {1.0, 0.9, 0.8};  // intended-move probability
  int max_cells = 3;
};

struct RandomInstance {
  std::uint64_t seed = 0;
  GridMdp mdp;
  Corridor corridor;  // with a terminal edge
  Partition partition;
};

// Random map with one start and one goal, random corridor geometry and a
// random terminal edge. Deterministic in `seed`.
RandomInstance MakeRandomInstance(std::uint64_t seed,
                                  const RandomInstanceOptions& opts = {});

// A policy drawn uniformly per state.
Policy RandomPolicy(std::mt19937_64& gen, int num_states, int num_actions);

struct NamedCheck {
  std::string name;
  CheckReport report;
};

struct InstanceResult {
  std::uint64_t seed = 0;
  std::string label;
  std::vector<NamedCheck> checks;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<InstanceResult> instances;
  int passed = 0;
  bool pass = false;
  double seconds = 0.0;
};

// Augmented-chain checks per instance under random stationary and switching
// policies.
SuiteReport RunConstructionSuite(int count, std::uint64_t base_seed,
                                 const RandomInstanceOptions& opts = {});

// Local value never exceeds the switching policy's value on the interior.
SuiteReport RunLocalBoundSuite(int count, std::uint64_t base_seed,
                               const RandomInstanceOptions& opts = {});

struct SuccessBoundOptions {
  SimOptions sim;           // n, seed, threads
  double interval_widths = 3.0;
};

// For every option of a search: Monte Carlo rate >= raw bound - widths * half
// width, and exact success probability >= bound.
SuiteReport RunSuccessBoundSuite(const GridMdp& mdp, const SearchConfig& cfg,
                                 const SuccessBoundOptions& opts);

}  // namespace dna

#endif  // DNA_SUITES_H_
