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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "dna/corridor.h"
#include "dna/guarantees.h"
#include "dna/local_problem.h"
#include "dna/suites.h"
#include "dna/value_solver.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace dna {
namespace {

Partition CorridorPartition(const Grid& grid, const std::vector<GridState>& centers, int d,
                            EdgeSpec edge) {
  Corridor c;
  for (const GridState& g : centers) c.cells.push_back(MakeCell(grid, g, d));
  c.edge = edge;
  return PartitionStates(grid, c);
}

// 6x6 crop of the bundled map with a goal in the far corner.
GridMdp BundledCrop() {
  const GridMdp full = testing::LoadData("lake10");
  std::vector<Tile> tiles;
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 6; ++x) tiles.push_back(full.tile(full.grid().Id({y, x})));
  }
  tiles.back() = Tile::kGoal;
  return GridMdp(Grid({6, 6}), tiles, full.config());
}

TEST(AugmentedTest, SwitchingRowsCarryTheBit) {
  const GridMdp mdp = testing::LoadData("lake10");
  const Partition part = CorridorPartition(mdp.grid(), {{0, 0}, {3, 0}}, 2, {0, 1});
  const AugmentedMdp aug = BuildAugmented(AugmentedVariant::kSwitching, mdp.tabular(), part);
  const int n = mdp.num_states();
  EXPECT_EQ(aug.mdp.num_states(), 2 * n);
  for (StateId s = 0; s < n; ++s) {
    for (ActionId a = 0; a < mdp.num_actions(); ++a) {
      const auto base = mdp.tabular().row(s, a);
      for (int delta = 0; delta <= 1; ++delta) {
        const auto row = aug.mdp.row(aug.Index(s, delta), a);
        std::map<StateId, double> expected;
        for (const Transition& t : base) {
          const bool next_delta = delta == 1 || !part.IsIn(t.next);
          expected[aug.Index(t.next, next_delta)] += t.prob;
        }
        std::map<StateId, double> got;
        for (const Transition& t : row) got[t.next] += t.prob;
        EXPECT_EQ(got, expected);
        EXPECT_EQ(aug.mdp.reward(aug.Index(s, delta), a), mdp.tabular().reward(s, a));
      }
    }
  }
}

TEST(AugmentedTest, SuffixVariants) {
  const GridMdp mdp = BundledCrop();
  const Partition part = CorridorPartition(mdp.grid(), {{0, 0}, {3, 0}}, 2, {0, 1});
  std::mt19937_64 gen(4);
  const AugmentedPolicy pi{RandomPolicy(gen, mdp.num_states(), 4),
                           RandomPolicy(gen, mdp.num_states(), 4)};
  const AugmentedMdp sw = BuildAugmented(AugmentedVariant::kSwitching, mdp.tabular(), part);
  const ValueTable v = EvaluateAugmented(sw, pi);
  const AugmentedMdp absorbing =
      BuildAugmented(AugmentedVariant::kAbsorbingSuffix, mdp.tabular(), part, &v);
  const AugmentedMdp zeroed =
      BuildAugmented(AugmentedVariant::kZeroedSuffix, mdp.tabular(), part, &v);
  const double gamma = mdp.gamma();
  for (StateId s = 0; s < mdp.num_states(); ++s) {
    const StateId hi = sw.Index(s, true);
    for (ActionId a = 0; a < 4; ++a) {
      for (const AugmentedMdp* aug : {&absorbing, &zeroed}) {
        const auto row = aug->mdp.row(hi, a);
        ASSERT_EQ(row.size(), 1u);
        EXPECT_EQ(row[0].next, hi);
      }
      EXPECT_NEAR(absorbing.mdp.reward(hi, a), (1 - gamma) * v[hi], 1e-15);
      if (part.IsOmega(s)) {
        EXPECT_EQ(zeroed.mdp.reward(hi, a), absorbing.mdp.reward(hi, a));
      } else {
        EXPECT_EQ(zeroed.mdp.reward(hi, a), 0.0);
      }
    }
  }
  EXPECT_THROW(BuildAugmented(AugmentedVariant::kZeroedSuffix, mdp.tabular(), part), Error);
  std::vector<bool> in_delta(mdp.num_states(), false), omega(mdp.num_states(), false);
  omega[0] = true;
  EXPECT_THROW(BuildAugmented(AugmentedVariant::kSwitching, mdp.tabular(), in_delta, omega),
               Error);
}

TEST(ChainChecksTest, DeterministicChainIsExact) {
  const GridMdp mdp = LoadGridMap("SFFFG", testing::DeterministicConfig());
  const Partition part = CorridorPartition(mdp.grid(), {{0, 1}}, 1, {1, 1});
  const Policy east{std::vector<ActionId>(5, kEast)};
  const CheckReport r = CheckAugmentedMatchesBase(mdp.tabular(), part, east);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.max_gap, 1e-12);
}

TEST(ChainChecksTest, BundledCrop) {
  const GridMdp mdp = BundledCrop();
  const Partition part = CorridorPartition(mdp.grid(), {{0, 0}, {3, 0}, {3, 3}}, 2, {1, 1});
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 5; ++trial) {
    const Policy pi = RandomPolicy(gen, mdp.num_states(), 4);
    const AugmentedPolicy sw{RandomPolicy(gen, mdp.num_states(), 4),
                             RandomPolicy(gen, mdp.num_states(), 4)};
    EXPECT_TRUE(CheckAugmentedMatchesBase(mdp.tabular(), part, pi).pass);
    EXPECT_TRUE(CheckAbsorbingSuffixMatchesSwitching(mdp.tabular(), part, sw).pass);
    EXPECT_TRUE(CheckZeroedSuffixBelowAbsorbing(mdp.tabular(), part, sw).pass);
  }
}

TEST(ChainChecksTest, DegeneratePartitions) {
  const GridMdp mdp = BundledCrop();
  const int n = mdp.num_states();
  std::mt19937_64 gen(2);
  const AugmentedPolicy pi{RandomPolicy(gen, n, 4), RandomPolicy(gen, n, 4)};

  // Everything interior: no switch can happen.
  const Partition all_in = Partition::FromRegions(std::vector<Region>(n, Region::kIn));
  const CheckReport none = CheckAbsorbingSuffixMatchesSwitching(mdp.tabular(), all_in, pi);
  EXPECT_TRUE(none.pass);
  EXPECT_LT(none.max_gap, 1e-12);

  // S_omega = S_delta: the zeroed suffix changes nothing.
  std::vector<Region> region(n, Region::kOmega);
  for (StateId s : MakeCell(mdp.grid(), {2, 2}, 1).members) region[s] = Region::kIn;
  const CheckReport same =
      CheckZeroedSuffixBelowAbsorbing(mdp.tabular(), Partition::FromRegions(region), pi);
  EXPECT_TRUE(same.pass);
  EXPECT_LE(std::abs(same.max_gap), 1e-12);

  // Empty S_omega: only prefix rewards remain.
  for (auto& r : region) {
    if (r == Region::kOmega) r = Region::kOut;
  }
  EXPECT_TRUE(
      CheckZeroedSuffixBelowAbsorbing(mdp.tabular(), Partition::FromRegions(region), pi).pass);
}

TEST(ChainChecksTest, SwitchingValueMatchesDenseOracle) {
  const GridMdp mdp = BundledCrop();
  const Partition part = CorridorPartition(mdp.grid(), {{0, 0}, {3, 0}}, 2, {1, 1});
  std::mt19937_64 gen(13);
  const AugmentedPolicy pi{RandomPolicy(gen, mdp.num_states(), 4),
                           RandomPolicy(gen, mdp.num_states(), 4)};
  const AugmentedMdp sw = BuildAugmented(AugmentedVariant::kSwitching, mdp.tabular(), part);
  const ValueTable v = EvaluateAugmented(sw, pi);
  const auto oracle =
      testing::SwitchingValue(mdp.tabular(), part, pi.before.actions, pi.after.actions);
  for (StateId s = 0; s < mdp.num_states(); ++s) {
    EXPECT_NEAR(v[sw.Index(s, false)], oracle[s], 1e-10);
  }
}

TEST(LocalValueBoundTest, DeterministicCorridorIsTight) {
  MdpConfig cfg = testing::DeterministicConfig();
  cfg.gamma = 0.9;
  const GridMdp mdp = LoadGridMap("SFFFF\nFFFFG", cfg);
  const Partition part = CorridorPartition(mdp.grid(), {{0, 1}}, 1, {1, 1});
  const auto vi = ValueIteration(mdp.tabular());
  const Policy star = GreedyPolicy(vi.q);
  const LocalSolution local = SolveLocalExact(BuildLocalMdp(mdp.tabular(), part, vi.v));
  const LocalBoundReport r = VerifyLocalValueBound(mdp.tabular(), part, local.pi, star);
  EXPECT_TRUE(r.check.pass);
  for (StateId s : part.in) {
    EXPECT_NEAR(r.local_value[s], r.switched_value[s], 1e-9);
  }
}

TEST(LocalValueBoundTest, MatchesOracleOnBundledMap) {
  const GridMdp mdp = testing::LoadData("lake10");
  const Partition part =
      CorridorPartition(mdp.grid(), {{0, 0}, {3, 0}, {6, 0}, {6, 3}, {9, 3}}, 2, {1, 1});
  const auto vi = ValueIteration(mdp.tabular());
  const Policy star = GreedyPolicy(vi.q);
  const LocalSolution local = SolveLocalExact(BuildLocalMdp(mdp.tabular(), part, vi.v));
  const LocalBoundReport r = VerifyLocalValueBound(mdp.tabular(), part, local.pi, star);
  EXPECT_TRUE(r.check.pass) << r.check.max_gap;
  const auto oracle = testing::SwitchingValue(mdp.tabular(), part, local.pi.actions, star.actions);
  for (StateId s = 0; s < mdp.num_states(); ++s) {
    EXPECT_NEAR(r.switched_value[s], oracle[s], 1e-9);
  }
}

TEST(LocalValueBoundTest, CorruptedLocalPolicyStillBounded) {
  const GridMdp mdp = testing::LoadData("lake10");
  const Partition part =
      CorridorPartition(mdp.grid(), {{0, 0}, {3, 0}, {6, 0}, {6, 3}}, 2, {1, 1});
  const auto vi = ValueIteration(mdp.tabular());
  const Policy star = GreedyPolicy(vi.q);
  Policy local = SolveLocalExact(BuildLocalMdp(mdp.tabular(), part, vi.v)).pi;
  const StateId victim = mdp.grid().Id({3, 1});
  ASSERT_TRUE(part.IsIn(victim));
  local.actions[victim] = (local.actions[victim] + 1) % 4;
  const LocalBoundReport r = VerifyLocalValueBound(mdp.tabular(), part, local, star);
  EXPECT_TRUE(r.check.pass) << r.check.max_gap;
}

TEST(LocalValueBoundTest, RandomInstances) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RandomInstance inst = MakeRandomInstance(seed);
    const auto vi = ValueIteration(inst.mdp.tabular());
    const LocalSolution local =
        SolveLocalExact(BuildLocalMdp(inst.mdp.tabular(), inst.partition, vi.v));
    const LocalBoundReport r =
        VerifyLocalValueBound(inst.mdp.tabular(), inst.partition, local.pi, GreedyPolicy(vi.q));
    EXPECT_TRUE(r.check.pass) << "seed " << seed << " gap " << r.check.max_gap;
  }
}

TEST(SuccessBoundTest, Examples) {
  const double gamma = 0.9;
  // Deterministic success: V_L = gamma^tau V*(edge).
  SuccessBound b = SuccessProbabilityBound({std::pow(gamma, 4) * 7.0, 0.0, gamma, 4, 7.0});
  EXPECT_NEAR(b.raw, 1.0, 1e-12);
  b = SuccessProbabilityBound({1.0 / (1 - gamma), 1.0, gamma, 3, 5.0});
  EXPECT_NEAR(b.raw, 0.0, 1e-12);
  b = SuccessProbabilityBound({0.5, 1.0, gamma, 3, 5.0});
  EXPECT_LT(b.raw, 0.0);
  EXPECT_EQ(b.clamped, 0.0);
  b = SuccessProbabilityBound({9.0, 0.0, gamma, 0, 5.0});
  EXPECT_GT(b.raw, 1.0);
  EXPECT_EQ(b.clamped, 1.0);
  try {
    SuccessProbabilityBound({1.0, 0.0, gamma, 2, 0.0});
    FAIL() << "expected UndefinedBound";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefinedBound);
  }
  EXPECT_THROW(SuccessProbabilityBound({1.0, 0.0, gamma, -1, 1.0}), Error);
}

TEST(SuccessBoundTest, ManhattanTau) {
  const Grid grid({10, 10});
  const TerminalEdge bottom = MakeTerminalEdge(grid, MakeCell(grid, {7, 8}, 2), {0, 1});
  EXPECT_EQ(ManhattanTau(grid, {0, 0}, bottom), 15);
  const TerminalEdge west = MakeTerminalEdge(grid, MakeCell(grid, {8, 5}, 2), {1, -1});
  ASSERT_EQ(west.members.size(), 4u);
  EXPECT_EQ(ManhattanTau(grid, {0, 0}, west), 9);
  EXPECT_EQ(ManhattanTau(grid, {9, 7}, bottom), 0);
  EXPECT_THROW(ManhattanTau(grid, {0, 0}, TerminalEdge{}), Error);
}

TEST(SuccessBoundTest, MaxInteriorReward) {
  const GridMdp mdp = LoadGridMap("SFG", testing::DeterministicConfig());
  const Policy east{std::vector<ActionId>(3, kEast)};
  std::vector<Region> region{Region::kIn, Region::kIn, Region::kIn};
  EXPECT_EQ(MaxInteriorReward(mdp.tabular(), Partition::FromRegions(region), east), 1.0);
  region[2] = Region::kOmega;
  EXPECT_EQ(MaxInteriorReward(mdp.tabular(), Partition::FromRegions(region), east), 0.0);
}

TEST(EpsilonCheckTest, Ratio) {
  EXPECT_TRUE(EpsilonCheck(9.0, 10.0, 0.9));
  EXPECT_FALSE(EpsilonCheck(8.9, 10.0, 0.9));
  try {
    EpsilonCheck(1.0, 0.0, 0.5);
    FAIL() << "expected ZeroBenchmark";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroBenchmark);
  }
}

TEST(SuiteTest, ConstructionSuiteSmall) {
  const SuiteReport r = RunConstructionSuite(5, 100);
  EXPECT_EQ(r.instances.size(), 5u);
  EXPECT_EQ(r.passed, 5);
  EXPECT_TRUE(r.pass);
  for (const InstanceResult& inst : r.instances) EXPECT_EQ(inst.checks.size(), 3u);
}

TEST(SuiteTest, LocalBoundSuiteSmall) {
  const SuiteReport r = RunLocalBoundSuite(5, 200);
  EXPECT_EQ(r.passed, 5);
  EXPECT_TRUE(r.pass);
}

TEST(SuiteTest, RandomInstancesAreReproducibleAndValid) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RandomInstance a = MakeRandomInstance(seed);
    const RandomInstance b = MakeRandomInstance(seed);
    EXPECT_EQ(a.mdp.ToMapText(), b.mdp.ToMapText());
    EXPECT_EQ(CorridorKey(a.corridor), CorridorKey(b.corridor));
    EXPECT_LE(a.mdp.grid().extent(0), 6);
    EXPECT_FALSE(a.partition.in.empty());
    EXPECT_FALSE(a.partition.omega.empty());
    for (int i = 1; i < a.corridor.length(); ++i) {
      EXPECT_TRUE(CellsAdjacent(a.mdp.grid(), a.corridor.cells[i - 1], a.corridor.cells[i]));
    }
  }
}

}  // namespace
}  // namespace dna
