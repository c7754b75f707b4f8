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

#ifndef DNA_ROLLOUT_SIM_H_
#define DNA_ROLLOUT_SIM_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dna/alt_policy.h"
#include "dna/guarantees.h"
#include "dna/search.h"

namespace dna {

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
  double half_width() const { return 0.5 * (high - low); }
};

// Wilson score interval for `successes` out of `n`; z = 1.96 gives 95%.
WilsonInterval Wilson(std::int64_t successes, std::int64_t n, double z = 1.96);

inline constexpr int kTerminationKinds = 4;

struct SimReport {
  std::string option_id;
  std::int64_t n = 0;
  std::int64_t successes = 0;
  double rate = 0.0;
  WilsonInterval interval;
  SuccessBound bound;
  double mean_return = 0.0;
  // Indexed by Termination.
  std::array<std::int64_t, kTerminationKinds> terminations{};
  std::vector<Trajectory> samples;
};

struct SimOptions {
  std::int64_t n = 500;
  std::uint64_t seed = 0;
  int threads = 1;
  int samples = 0;   // trajectories kept for playback
  int step_cap = 0;  // 0 means 10 * |S|
};

inline constexpr int kMaxSampleTrajectories = 20;

// Runs opts.n rollouts of the switching policy from `start`. Rollout i uses
// stream (opts.seed, i), so the report does not depend on the thread count.
SimReport SimulateOption(const TabularMdp& mdp, const PolicyOption& option,
                         const Policy& pi_star, StateId start,
                         const SimOptions& opts, std::string option_id = "");

struct ComparisonRow {
  SimReport report;
  double epsilon_ratio = 0.0;
};

// Paired design: every option sees the same rollout seeds. Rows are sorted by
// descending ratio; ids follow `options` order when given.
std::vector<ComparisonRow> CompareOptions(const TabularMdp& mdp,
                                          const std::vector<PolicyOption>& options,
                                          const Policy& pi_star, StateId start,
                                          const SimOptions& opts,
                                          const std::vector<std::string>& ids = {});

// Probability that the first exit from S_in under `pi_local` lands in S_omega,
// from a linear solve over the interior states that can reach the edge.
double ExactSuccessProbability(const TabularMdp& mdp, const Partition& part,
                               const Policy& pi_local, StateId start);

}  // namespace dna

#endif  // DNA_ROLLOUT_SIM_H_
