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

#include "dna/search.h"

#include <algorithm>
#include <map>
#include <utility>

#include "dna/error.h"
#include "dna/parallel.h"

namespace dna {

const char* SolverModeName(SolverMode mode) {
  return mode == SolverMode::kExact ? "exact" : "qlearn";
}

SolverMode ParseSolverMode(const std::string& name) {
  if (name == "exact") return SolverMode::kExact;
  if (name == "qlearn") return SolverMode::kQLearning;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown solver mode '" + name + "' (expected exact|qlearn)");
}

void SearchConfig::Validate(const Grid& grid) const {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must lie in (0, 1]");
  }
  if (cells < 1 || cells > kMaxCorridorCells) {
    throw Error(ErrorCode::kInvalidArgument,
                "cells must lie in [1, " + std::to_string(kMaxCorridorCells) + "]");
  }
  if (d < 1) throw Error(ErrorCode::kInvalidArgument, "d must be >= 1");
  if (spacing < 1 || spacing > 2 * d + 1) {
    throw Error(ErrorCode::kInvalidArgument, "spacing must lie in [1, 2d+1]");
  }
  if (start.dims() != grid.dims() || !grid.Contains(start)) {
    throw Error(ErrorCode::kOutOfBounds,
                "start " + ToString(start) + " is not on the grid");
  }
  if (mode == SolverMode::kQLearning) qlearn.Validate();
}

std::uint64_t CorridorCountUpperBound(int k, int b) {
  if (k < 1 || b < 0) {
    throw Error(ErrorCode::kInvalidArgument, "need k >= 1 and B >= 0");
  }
  const std::uint64_t branch = 2 * static_cast<std::uint64_t>(k);
  std::uint64_t term = 1, total = 0;
  for (int i = 0; i <= b; ++i) {
    term *= branch;
    total += term;
  }
  return total;
}

std::string LocalProblemKey(const Partition& part) {
  std::string key;
  for (StateId s : part.in) key += std::to_string(s) + ',';
  key += '|';
  for (StateId s : part.omega) key += std::to_string(s) + ',';
  return key;
}

namespace {

struct Node {
  Corridor corridor;
  std::optional<EdgeSpec> excluded;
};

struct Candidate {
  std::size_t node = 0;
  TerminalEdge edge;
  Partition partition;
  std::size_t problem = 0;  // index into the solved-problem table
};

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

SearchResult CorridorSearch(const GridMdp& mdp, const QTable& qstar,
                            const SearchConfig& cfg,
                            const SearchProgress& progress) {
  const Grid& grid = mdp.grid();
  cfg.Validate(grid);
  const TabularMdp& base = mdp.tabular();
  if (qstar.num_states() != base.num_states() ||
      qstar.num_actions() != base.num_actions()) {
    throw Error(ErrorCode::kSizeMismatch, "benchmark Q table shape mismatch");
  }

  SearchResult result;
  result.v_star = MaxValues(qstar);
  result.pi_star = GreedyPolicy(qstar);
  const StateId s0 = grid.Id(cfg.start);
  result.v_star_start = result.v_star[s0];
  if (!(result.v_star_start > 0.0)) {
    throw Error(ErrorCode::kZeroBenchmark,
                "V*(start) is zero; no benchmark to compare against");
  }
  const double threshold = cfg.epsilon * result.v_star_start;
  const int dims = grid.dims();
  const int branch = 2 * dims;

  SearchReport& report = result.report;
  report.upper_bound = CorridorCountUpperBound(dims, cfg.cells - 1);
  // Pairs below a pair at length n that would have been enumerated.
  std::vector<std::uint64_t> descendants(cfg.cells + 1, 0);
  for (int n = cfg.cells - 1; n >= 1; --n) {
    descendants[n] = static_cast<std::uint64_t>(branch) * (1 + descendants[n + 1]);
  }

  std::map<std::string, std::size_t> registry;
  std::vector<std::shared_ptr<const LocalSolution>> problems;

  std::vector<Node> level;
  level.push_back({Corridor{{MakeCell(grid, cfg.start, cfg.d)}, std::nullopt},
                   std::nullopt});

  for (int n = 1; n <= cfg.cells && !level.empty(); ++n) {
    report.depth = n;
    const std::uint64_t below = descendants[n];
    std::vector<Candidate> candidates;
    std::vector<std::pair<std::size_t, Partition>> pending;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const Node& node = level[i];
      for (int k = 0; k < dims; ++k) {
        for (int alpha : {-1, 1}) {
          const EdgeSpec spec{k, alpha};
          TerminalEdge edge = MakeTerminalEdge(grid, node.corridor.last(), spec);
          if (edge.members.empty() || node.excluded == spec) {
            report.geometry_skipped += 1 + below;
            continue;
          }
          ++report.enumerated;
          double edge_max = 0.0;
          for (StateId s : edge.members) edge_max = std::max(edge_max, result.v_star[s]);
          if (edge_max < threshold) {
            ++report.prefiltered;
            report.prefix_pruned += below;
            continue;
          }
          Corridor with_edge = node.corridor;
          with_edge.edge = spec;
          Candidate c{i, std::move(edge), PartitionStates(grid, with_edge), 0};
          const std::string key = LocalProblemKey(c.partition);
          auto [it, inserted] = registry.emplace(key, problems.size() + pending.size());
          if (inserted) {
            ++report.solved;
            pending.emplace_back(it->second, c.partition);
          } else {
            ++report.deduplicated;
          }
          c.problem = it->second;
          candidates.push_back(std::move(c));
        }
      }
    }

    const std::size_t first_new = problems.size();
    problems.resize(first_new + pending.size());
    ParallelFor(pending.size(), cfg.threads, [&](std::size_t j) {
      const auto& [index, partition] = pending[j];
      const LocalMdp local = BuildLocalMdp(base, partition, result.v_star);
      LocalSolution sol;
      if (cfg.mode == SolverMode::kExact) {
        sol = SolveLocalExact(local);
      } else {
        QLearnConfig qcfg = cfg.qlearn;
        qcfg.seed = SplitMix(cfg.qlearn.seed ^ SplitMix(index));
        sol = SolveLocalQLearning(local, qstar, qcfg);
      }
      problems[index] = std::make_shared<const LocalSolution>(std::move(sol));
    });

    std::vector<Node> next;
    for (Candidate& c : candidates) {
      const std::shared_ptr<const LocalSolution>& sol = problems[c.problem];
      const double v_local = sol->v[s0];
      if (!EpsilonCheck(v_local, result.v_star_start, cfg.epsilon)) {
        report.prefix_pruned += below;
        continue;
      }
      ++report.passed;
      const Node& parent = level[c.node];
      if (n == cfg.cells) {
        PolicyOption opt;
        opt.corridor = parent.corridor;
        opt.corridor.edge = c.edge.spec;
        opt.solution = sol;
        opt.v_local_start = v_local;
        opt.epsilon_ratio = v_local / result.v_star_start;
        opt.bound.tau = ManhattanTau(grid, cfg.start, c.edge);
        opt.bound.max_r_in = MaxInteriorReward(base, c.partition, sol->pi);
        for (StateId s : c.edge.members) {
          opt.bound.max_edge_value = std::max(opt.bound.max_edge_value, result.v_star[s]);
        }
        opt.bound.value = SuccessProbabilityBound(
            {v_local, opt.bound.max_r_in, base.gamma(), opt.bound.tau,
             opt.bound.max_edge_value});
        opt.partition = std::move(c.partition);
        result.options.push_back(std::move(opt));
        continue;
      }
      Corridor child;
      try {
        child = ExtendCorridor(grid, parent.corridor, c.edge, cfg.spacing);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kOffGrid) throw;
        report.geometry_skipped += below;
        continue;
      }
      Node node{std::move(child), std::nullopt};
      const Cell& added = node.corridor.last();
      for (std::size_t j = 0; j + 1 < node.corridor.cells.size(); ++j) {
        if (node.corridor.cells[j].members == added.members) {
          node.excluded = EdgeSpec{c.edge.spec.k, -c.edge.spec.alpha};
          break;
        }
      }
      next.push_back(std::move(node));
    }
    level = std::move(next);
    if (progress) progress(report);
  }

  std::stable_sort(result.options.begin(), result.options.end(),
                   [](const PolicyOption& a, const PolicyOption& b) {
                     if (a.epsilon_ratio != b.epsilon_ratio) {
                       return a.epsilon_ratio > b.epsilon_ratio;
                     }
                     return a.key() < b.key();
                   });
  return result;
}

}  // namespace dna
