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

#include "dna/suites.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

#include "dna/error.h"
#include "dna/local_problem.h"
#include "dna/rng.h"
#include "dna/value_solver.h"

namespace dna {

int UniformIndex(std::mt19937_64& gen, int n) {
  return std::min(n - 1, static_cast<int>(UnitDouble(gen) * n));
}

Policy RandomPolicy(std::mt19937_64& gen, int num_states, int num_actions) {
  Policy pi;
  pi.actions.resize(num_states);
  for (ActionId& a : pi.actions) a = UniformIndex(gen, num_actions);
  return pi;
}

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

std::string Describe(const RandomInstance& inst) {
  const Grid& g = inst.mdp.grid();
  const MdpConfig& c = inst.mdp.config();
  return std::to_string(g.extent(0)) + "x" + std::to_string(g.extent(1)) +
         " gamma=" + std::to_string(c.gamma).substr(0, 4) +
         " slip=" + std::to_string(c.slip_intended).substr(0, 4) +
         " corridor=" + CorridorKey(inst.corridor) + " d=" +
         std::to_string(inst.corridor.last().d);
}

void Finish(SuiteReport& report, const Timer& timer) {
  report.passed = 0;
  for (InstanceResult& r : report.instances) {
    r.pass = std::all_of(r.checks.begin(), r.checks.end(),
                         [](const NamedCheck& c) { return c.report.pass; });
    report.passed += r.pass;
  }
  report.pass = !report.instances.empty() &&
                report.passed == static_cast<int>(report.instances.size());
  report.seconds = timer.seconds();
}

CheckReport OrderCheck(double gap, StateId worst, double tolerance) {
  return {gap, worst, tolerance, gap <= tolerance};
}

std::optional<RandomInstance> TryInstance(std::uint64_t seed, std::uint64_t attempt,
                                          const RandomInstanceOptions& opts) {
  std::mt19937_64 gen = StreamRng(seed, attempt);
  const int span = opts.max_side - opts.min_side + 1;
  const int h = opts.min_side + UniformIndex(gen, span);
  const int w = opts.min_side + UniformIndex(gen, span);
  std::vector<Tile> tiles(h * w, Tile::kFrozen);
  for (Tile& t : tiles) {
    if (UnitDouble(gen) < opts.hole_probability) t = Tile::kHole;
  }
  const int start = UniformIndex(gen, h * w);
  int goal = UniformIndex(gen, h * w - 1);
  if (goal >= start) ++goal;
  tiles[start] = Tile::kStart;
  tiles[goal] = Tile::kGoal;

  MdpConfig cfg;
  cfg.gamma = opts.gammas[UniformIndex(gen, static_cast<int>(opts.gammas.size()))];
  cfg.slip_intended = opts.slips[UniformIndex(gen, static_cast<int>(opts.slips.size()))];
  cfg.slip_lateral = (1.0 - cfg.slip_intended) / 2.0;
  cfg.cell_d = 1 + UniformIndex(gen, 2);
  cfg.cell_spacing = 1 + UniformIndex(gen, 2 * cfg.cell_d + 1);
  GridMdp mdp(Grid({h, w}), std::move(tiles), cfg);
  const Grid& grid = mdp.grid();

  Corridor corridor{{MakeCell(grid, grid.State(UniformIndex(gen, h * w)), cfg.cell_d)},
                    std::nullopt};
  const int cells = 1 + UniformIndex(gen, opts.max_cells);
  for (int tries = 0; corridor.length() < cells && tries < 20; ++tries) {
    const auto edges = TerminalEdges(grid, corridor.last());
    if (edges.empty()) break;
    try {
      corridor = ExtendCorridor(grid, corridor,
                                edges[UniformIndex(gen, static_cast<int>(edges.size()))],
                                cfg.cell_spacing);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kOffGrid) throw;
    }
  }
  const auto edges = TerminalEdges(grid, corridor.last());
  if (edges.empty()) return std::nullopt;
  corridor.edge = edges[UniformIndex(gen, static_cast<int>(edges.size()))].spec;
  Partition part = PartitionStates(grid, corridor);
  if (part.in.empty()) return std::nullopt;
  return RandomInstance{seed, std::move(mdp), std::move(corridor), std::move(part)};
}

}  // namespace

RandomInstance MakeRandomInstance(std::uint64_t seed,
                                  const RandomInstanceOptions& opts) {
  if (opts.min_side < 2 || opts.max_side < opts.min_side || opts.max_cells < 1 ||
      opts.gammas.empty() || opts.slips.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "invalid random instance options");
  }
  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    if (auto inst = TryInstance(seed, attempt, opts)) return std::move(*inst);
  }
  throw Error(ErrorCode::kCapExhausted, "no valid random instance found");
}

SuiteReport RunConstructionSuite(int count, std::uint64_t base_seed,
                                 const RandomInstanceOptions& opts) {
  const Timer timer;
  SuiteReport report;
  report.suite = "lemmas";
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
    const RandomInstance inst = MakeRandomInstance(seed, opts);
    const TabularMdp& base = inst.mdp.tabular();
    std::mt19937_64 gen = StreamRng(seed, 1u << 20);
    const Policy pi = RandomPolicy(gen, base.num_states(), base.num_actions());
    const AugmentedPolicy switching{RandomPolicy(gen, base.num_states(), base.num_actions()),
                                    RandomPolicy(gen, base.num_states(), base.num_actions())};
    InstanceResult r;
    r.seed = seed;
    r.label = Describe(inst);
    const Partition& part = inst.partition;
    r.checks.push_back(
        {"augmented_equals_base", CheckAugmentedMatchesBase(base, part, pi)});
    r.checks.push_back({"absorbing_suffix_equals_switching",
                        CheckAbsorbingSuffixMatchesSwitching(base, part, switching)});
    r.checks.push_back({"zeroed_suffix_below_absorbing",
                        CheckZeroedSuffixBelowAbsorbing(base, part, switching)});
    report.instances.push_back(std::move(r));
  }
  Finish(report, timer);
  return report;
}

SuiteReport RunLocalBoundSuite(int count, std::uint64_t base_seed,
                               const RandomInstanceOptions& opts) {
  const Timer timer;
  SuiteReport report;
  report.suite = "theorem1";
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
    const RandomInstance inst = MakeRandomInstance(seed, opts);
    const TabularMdp& base = inst.mdp.tabular();
    const ValueIterationResult vi = ValueIteration(base);
    const Policy pi_star = GreedyPolicy(vi.q);
    const LocalSolution local =
        SolveLocalExact(BuildLocalMdp(base, inst.partition, vi.v));
    const LocalBoundReport t1 =
        VerifyLocalValueBound(base, inst.partition, local.pi, pi_star);

    // Same relation with the value-iteration local optimum in place of the
    // exact evaluation of its greedy policy.
    double gap = -std::numeric_limits<double>::infinity();
    StateId worst = -1;
    for (StateId s : inst.partition.in) {
      const double g = local.v[s] - t1.switched_value[s];
      if (g > gap) {
        gap = g;
        worst = s;
      }
    }
    InstanceResult r;
    r.seed = seed;
    r.label = Describe(inst);
    r.checks.push_back({"local_policy_value_below_switched", t1.check});
    r.checks.push_back(
        {"local_optimum_below_switched", OrderCheck(gap, worst, kLocalBoundTolerance)});
    report.instances.push_back(std::move(r));
  }
  Finish(report, timer);
  return report;
}

SuiteReport RunSuccessBoundSuite(const GridMdp& mdp, const SearchConfig& cfg,
                                 const SuccessBoundOptions& opts) {
  const Timer timer;
  SuiteReport report;
  report.suite = "theorem2";
  const TabularMdp& base = mdp.tabular();
  const ValueIterationResult vi = ValueIteration(base);
  const SearchResult found = CorridorSearch(mdp, vi.q, cfg);
  const StateId s0 = mdp.grid().Id(cfg.start);
  for (std::size_t i = 0; i < found.options.size(); ++i) {
    const PolicyOption& opt = found.options[i];
    const SimReport sim = SimulateOption(base, opt, found.pi_star, s0, opts.sim);
    const double exact =
        ExactSuccessProbability(base, opt.partition, opt.solution->pi, s0);
    const double n = static_cast<double>(sim.n);
    InstanceResult r;
    r.seed = opts.sim.seed;
    r.label = opt.key() + " rate=" + std::to_string(sim.rate) +
              " exact=" + std::to_string(exact) +
              " bound=" + std::to_string(opt.bound.value.raw);
    r.checks.push_back(
        {"rate_above_bound",
         OrderCheck(opt.bound.value.raw - opts.interval_widths * sim.interval.half_width() -
                        sim.rate,
                    s0, 0.0)});
    r.checks.push_back(
        {"exact_above_bound", OrderCheck(opt.bound.value.clamped - exact, s0, 0.0)});
    // 99.9% normal band around the exact probability.
    r.checks.push_back(
        {"rate_matches_exact",
         OrderCheck(std::abs(sim.rate - exact) -
                        3.29 * std::sqrt(exact * (1.0 - exact) / n) - 1.0 / n,
                    s0, 0.0)});
    report.instances.push_back(std::move(r));
  }
  Finish(report, timer);
  return report;
}

}  // namespace dna
