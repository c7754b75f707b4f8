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

#ifndef DNA_SEARCH_H_
#define DNA_SEARCH_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dna/corridor.h"
#include "dna/grid_mdp.h"
#include "dna/guarantees.h"
#include "dna/local_problem.h"
#include "dna/value_solver.h"

namespace dna {

enum class SolverMode { kExact, kQLearning };

const char* SolverModeName(SolverMode mode);
SolverMode ParseSolverMode(const std::string& name);

struct SearchConfig {
  GridState start;
  double epsilon = 0.9;
  int cells = 5;  // corridor length of returned options, B + 1
  int d = 2;
  int spacing = 1;
  SolverMode mode = SolverMode::kExact;
  QLearnConfig qlearn;  // used when mode == kQLearning
  int threads = 1;      // 0 = hardware concurrency

  void Validate(const Grid& grid) const;
};

inline constexpr int kMaxCorridorCells = 16;

struct OptionBound {
  SuccessBound value;
  int tau = 0;
  double max_r_in = 0.0;
  double max_edge_value = 0.0;
};

struct PolicyOption {
  Corridor corridor;  // with its terminal edge set
  Partition partition;
  std::shared_ptr<const LocalSolution> solution;
  double v_local_start = 0.0;
  double epsilon_ratio = 0.0;
  OptionBound bound;
  std::optional<double> empirical_success_rate;

  std::string key() const { return CorridorKey(corridor); }
};

// Every potential (corridor, edge) pair counted by the upper bound ends up in
// exactly one of enumerated, prefix_pruned or geometry_skipped. Enumerated
// pairs are split into prefiltered, solved and deduplicated.
struct SearchReport {
  std::uint64_t enumerated = 0;
  std::uint64_t prefiltered = 0;
  std::uint64_t prefix_pruned = 0;
  std::uint64_t geometry_skipped = 0;
  std::uint64_t deduplicated = 0;
  std::uint64_t solved = 0;
  std::uint64_t passed = 0;  // enumerated pairs meeting the ratio test
  std::uint64_t upper_bound = 0;
  int depth = 0;  // corridor length of the level being processed
};

struct SearchResult {
  std::vector<PolicyOption> options;
  SearchReport report;
  double v_star_start = 0.0;
  ValueTable v_star;
  Policy pi_star;
};

using SearchProgress = std::function<void(const SearchReport&)>;

// Breadth-ordered corridor enumeration from a cell centred on the start.
// Returns every ratio-passing (corridor, edge) pair of `cells` cells whose
// prefixes all pass, sorted by descending ratio then corridor key. Throws
// kZeroBenchmark when V*(start) is zero.
SearchResult CorridorSearch(const GridMdp& mdp, const QTable& qstar,
                            const SearchConfig& cfg,
                            const SearchProgress& progress = {});

// sum_{b=0}^{B} (2k)^{b+1} potential local problems for k dimensions.
std::uint64_t CorridorCountUpperBound(int k, int b);

// Key under which two (corridor, edge) pairs define the same local problem.
std::string LocalProblemKey(const Partition& part);

}  // namespace dna

#endif  // DNA_SEARCH_H_
