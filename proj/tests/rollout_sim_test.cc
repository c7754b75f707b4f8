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

#include "dna/corridor.h"
#include "dna/json_io.h"
#include "dna/local_problem.h"
#include "dna/rollout_sim.h"
#include "dna/search.h"
#include "dna/value_solver.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace dna {
namespace {

PolicyOption MakeOption(const GridMdp& mdp, const ValueTable& vstar,
                        std::vector<GridState> centers, int d, EdgeSpec edge) {
  PolicyOption o;
  for (const GridState& c : centers) o.corridor.cells.push_back(MakeCell(mdp.grid(), c, d));
  o.corridor.edge = edge;
  o.partition = PartitionStates(mdp.grid(), o.corridor);
  o.solution = std::make_shared<const LocalSolution>(
      SolveLocalExact(BuildLocalMdp(mdp.tabular(), o.partition, vstar)));
  o.v_local_start = o.solution->v[mdp.start()];
  return o;
}

TEST(WilsonTest, KnownValues) {
  const WilsonInterval half = Wilson(50, 100);
  EXPECT_NEAR(half.low, 0.4038, 1e-4);
  EXPECT_NEAR(half.high, 0.5962, 1e-4);
  const WilsonInterval all = Wilson(500, 500);
  EXPECT_NEAR(all.high, 1.0, 1e-12);
  EXPECT_NEAR(all.low, 0.99238, 1e-4);
  const WilsonInterval none = Wilson(0, 500);
  EXPECT_EQ(none.low, 0.0);
  EXPECT_NEAR(none.high, 0.00762, 1e-4);
  EXPECT_THROW(Wilson(1, 0), Error);
  EXPECT_THROW(Wilson(5, 4), Error);
  for (int k = 0; k <= 40; ++k) {
    const WilsonInterval w = Wilson(k, 40);
    EXPECT_LE(w.low, k / 40.0);
    EXPECT_GE(w.high, k / 40.0);
  }
}

TEST(SimulateTest, DeterministicCorridorAlwaysSucceeds) {
  MdpConfig cfg = testing::DeterministicConfig();
  cfg.gamma = 0.9;
  const GridMdp mdp = LoadGridMap("SFFFF\nFFFFG", cfg);
  const auto vi = ValueIteration(mdp.tabular());
  PolicyOption o = MakeOption(mdp, vi.v, {{0, 1}}, 1, {1, 1});
  o.bound.value = SuccessProbabilityBound({o.v_local_start, 0.0, 0.9, 2, vi.v[mdp.grid().Id({0, 2})]});
  EXPECT_NEAR(o.bound.value.raw, 1.0, 1e-9);
  SimOptions opts;
  opts.n = 500;
  const SimReport r = SimulateOption(mdp.tabular(), o, GreedyPolicy(vi.q), mdp.start(), opts);
  EXPECT_EQ(r.successes, 500);
  EXPECT_EQ(r.rate, 1.0);
  EXPECT_EQ(r.terminations[static_cast<int>(Termination::kReachedEdge)], 500);
  EXPECT_EQ(r.bound.raw, o.bound.value.raw);
}

TEST(SimulateTest, ImmediateExitAlwaysFails) {
  const GridMdp mdp = LoadGridMap("SFFFF\nFFFFG", testing::DeterministicConfig());
  const auto vi = ValueIteration(mdp.tabular());
  PolicyOption o = MakeOption(mdp, vi.v, {{0, 1}}, 1, {1, 1});
  auto broken = std::make_shared<LocalSolution>(*o.solution);
  // Single-state interior whose local policy steps straight out of it.
  std::vector<Region> region(mdp.num_states(), Region::kOut);
  region[mdp.grid().Id({0, 0})] = Region::kIn;
  region[mdp.grid().Id({0, 2})] = Region::kOmega;
  o.partition = Partition::FromRegions(region);
  broken->pi.actions.assign(mdp.num_states(), kSouth);
  o.solution = broken;
  const SimReport r =
      SimulateOption(mdp.tabular(), o, GreedyPolicy(vi.q), mdp.start(), SimOptions{});
  EXPECT_EQ(r.successes, 0);
  EXPECT_EQ(r.rate, 0.0);
  EXPECT_EQ(r.terminations[static_cast<int>(Termination::kExitedCorridor)], r.n);
}

class BundledSim : public ::testing::Test {
 protected:
  void SetUp() override {
    mdp_ = std::make_unique<GridMdp>(testing::LoadData("lake10"));
    vi_ = ValueIteration(mdp_->tabular());
    option_ = MakeOption(*mdp_, vi_.v, {{0, 0}, {3, 0}, {6, 0}, {6, 3}, {9, 3}}, 2, {1, 1});
    star_ = GreedyPolicy(vi_.q);
  }
  std::unique_ptr<GridMdp> mdp_;
  ValueIterationResult vi_;
  PolicyOption option_;
  Policy star_;
};

TEST_F(BundledSim, ReportInvariantsAndReproducibility) {
  SimOptions opts;
  opts.n = 2000;
  opts.seed = 7;
  opts.samples = 5;
  const SimReport a = SimulateOption(mdp_->tabular(), option_, star_, mdp_->start(), opts, "x");
  EXPECT_LE(a.successes, a.n);
  EXPECT_DOUBLE_EQ(a.rate, static_cast<double>(a.successes) / a.n);
  EXPECT_LE(a.interval.low, a.rate);
  EXPECT_GE(a.interval.high, a.rate);
  std::int64_t total = 0;
  for (auto c : a.terminations) total += c;
  EXPECT_EQ(total, a.n);
  EXPECT_EQ(a.samples.size(), 5u);
  EXPECT_EQ(a.option_id, "x");

  opts.threads = 4;
  const SimReport b = SimulateOption(mdp_->tabular(), option_, star_, mdp_->start(), opts, "x");
  EXPECT_EQ(CanonicalDump(SimReportToJson(mdp_->grid(), a)),
            CanonicalDump(SimReportToJson(mdp_->grid(), b)));
  opts.seed = 8;
  const SimReport c = SimulateOption(mdp_->tabular(), option_, star_, mdp_->start(), opts, "x");
  EXPECT_NE(CanonicalDump(SimReportToJson(mdp_->grid(), a)),
            CanonicalDump(SimReportToJson(mdp_->grid(), c)));
}

TEST_F(BundledSim, RejectsBadOptions) {
  SimOptions opts;
  opts.n = 0;
  EXPECT_THROW(SimulateOption(mdp_->tabular(), option_, star_, mdp_->start(), opts), Error);
  opts.n = 10;
  opts.samples = kMaxSampleTrajectories + 1;
  EXPECT_THROW(SimulateOption(mdp_->tabular(), option_, star_, mdp_->start(), opts), Error);
  EXPECT_THROW(CompareOptions(mdp_->tabular(), {}, star_, mdp_->start(), SimOptions{}), Error);
}

TEST_F(BundledSim, ExactProbabilityMatchesIterationOracle) {
  const double exact =
      ExactSuccessProbability(mdp_->tabular(), option_.partition, option_.solution->pi,
                              mdp_->start());
  const double oracle = testing::AbsorptionByIteration(mdp_->tabular(), option_.partition,
                                                       option_.solution->pi.actions,
                                                       mdp_->start());
  EXPECT_NEAR(exact, oracle, 1e-9);
  EXPECT_GT(exact, 0.0);
  EXPECT_LT(exact, 1.0);
}

TEST_F(BundledSim, LargeSampleWithinNinetyNinePercentOfExact) {
  SimOptions opts;
  opts.n = 100'000;
  opts.seed = 3;
  const SimReport r = SimulateOption(mdp_->tabular(), option_, star_, mdp_->start(), opts);
  const double p = ExactSuccessProbability(mdp_->tabular(), option_.partition,
                                           option_.solution->pi, mdp_->start());
  const double half = 2.576 * std::sqrt(p * (1 - p) / opts.n);
  EXPECT_NEAR(r.rate, p, half);
}

TEST_F(BundledSim, MeanReturnMatchesExactEvaluation) {
  // The switching policy's value at (s0, 0), from the dense oracle.
  const auto v = testing::SwitchingValue(mdp_->tabular(), option_.partition,
                                         option_.solution->pi.actions, star_.actions);
  SimOptions opts;
  opts.n = 20'000;
  opts.seed = 11;
  opts.step_cap = 2000;
  const SimReport r = SimulateOption(mdp_->tabular(), option_, star_, mdp_->start(), opts);
  EXPECT_NEAR(r.mean_return, v[mdp_->start()], 0.05 * v[mdp_->start()]);
}

TEST(CompareTest, GoldenComparisonOnBundledMap) {
  const GridMdp mdp = testing::LoadData("lake10");
  const auto vi = ValueIteration(mdp.tabular());
  const Json golden = ReadJsonFile(testing::GoldenPath("lake10_compare_seed7.json"));
  SearchConfig cfg;
  cfg.start = {0, 0};
  cfg.epsilon = golden["epsilon"].get<double>();
  cfg.cells = 5;
  cfg.d = 2;
  cfg.spacing = 3;
  const SearchResult found = CorridorSearch(mdp, vi.q, cfg);
  SimOptions opts;
  opts.n = golden["n"].get<std::int64_t>();
  opts.seed = golden["seed"].get<std::uint64_t>();
  const auto rows = CompareOptions(mdp.tabular(), found.options, found.pi_star, mdp.start(), opts);
  ASSERT_EQ(rows.size(), golden["rows"].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].report.successes, golden["rows"][i]["successes"].get<std::int64_t>());
    EXPECT_EQ(found.options[i].key(), golden["rows"][i]["key"].get<std::string>());
    EXPECT_GE(rows[i].report.rate, rows[i].report.bound.clamped);
    if (i > 0) EXPECT_GE(rows[i - 1].epsilon_ratio, rows[i].epsilon_ratio);
  }
  const auto single = CompareOptions(mdp.tabular(), {found.options.front()}, found.pi_star,
                                     mdp.start(), opts);
  EXPECT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].report.successes, rows[0].report.successes);
  const std::string csv = ComparisonToCsv(rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

}  // namespace
}  // namespace dna
