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

#include <algorithm>
#include <map>
#include <set>

#include "dna/json_io.h"
#include "dna/local_problem.h"
#include "dna/search.h"
#include "dna/suites.h"
#include "dna/value_solver.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace dna {
namespace {

SearchConfig BundledConfig(double eps) {
  SearchConfig cfg;
  cfg.start = {0, 0};
  cfg.epsilon = eps;
  cfg.cells = 5;
  cfg.d = 2;
  cfg.spacing = 3;
  return cfg;
}

class BundledSearch : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    mdp_ = new GridMdp(testing::LoadData("lake10"));
    vi_ = new ValueIterationResult(ValueIteration(mdp_->tabular()));
  }
  static void TearDownTestSuite() {
    delete mdp_;
    delete vi_;
  }
  static SearchResult Run(double eps, int threads = 1) {
    SearchConfig cfg = BundledConfig(eps);
    cfg.threads = threads;
    return CorridorSearch(*mdp_, vi_->q, cfg);
  }
  static std::set<std::string> Keys(const SearchResult& r) {
    std::set<std::string> keys;
    for (const PolicyOption& o : r.options) keys.insert(o.key());
    return keys;
  }
  static GridMdp* mdp_;
  static ValueIterationResult* vi_;
};

GridMdp* BundledSearch::mdp_ = nullptr;
ValueIterationResult* BundledSearch::vi_ = nullptr;

void ExpectReportInvariants(const SearchReport& r) {
  EXPECT_EQ(r.enumerated + r.prefix_pruned + r.geometry_skipped, r.upper_bound);
  EXPECT_EQ(r.prefiltered + r.solved + r.deduplicated, r.enumerated);
  EXPECT_LE(r.solved, r.enumerated);
  EXPECT_LE(r.enumerated, r.upper_bound);
  EXPECT_LE(r.passed, r.solved + r.deduplicated);
}

TEST(CountBoundTest, Examples) {
  EXPECT_EQ(CorridorCountUpperBound(2, 0), 4u);
  EXPECT_EQ(CorridorCountUpperBound(2, 1), 20u);
  EXPECT_EQ(CorridorCountUpperBound(1, 0), 2u);
  EXPECT_EQ(CorridorCountUpperBound(2, 4), 4u + 16u + 64u + 256u + 1024u);
}

TEST_F(BundledSearch, GoldenCountsAndOrder) {
  const Json golden = ReadJsonFile(testing::GoldenPath("lake10_search_counts.json"));
  for (const auto& [eps_text, count] : golden["counts"].items()) {
    const SearchResult r = Run(std::stod(eps_text));
    EXPECT_EQ(r.options.size(), count.get<std::size_t>()) << "eps " << eps_text;
    ExpectReportInvariants(r.report);
    for (std::size_t i = 1; i < r.options.size(); ++i) {
      EXPECT_GE(r.options[i - 1].epsilon_ratio, r.options[i].epsilon_ratio);
    }
  }
  const SearchResult top = Run(0.99);
  std::vector<std::string> keys;
  for (const PolicyOption& o : top.options) keys.push_back(o.key());
  EXPECT_EQ(keys, golden["top_at_0.99"].get<std::vector<std::string>>());
  EXPECT_NEAR(top.v_star_start, vi_->v[mdp_->start()], 0.0);
}

TEST_F(BundledSearch, OptionsAreFullLengthAndSound) {
  const SearchResult r = Run(0.9);
  ASSERT_FALSE(r.options.empty());
  for (const PolicyOption& o : r.options) {
    EXPECT_EQ(o.corridor.length(), 5);
    ASSERT_TRUE(o.corridor.edge.has_value());
    EXPECT_GE(o.epsilon_ratio, 0.9);
    // Re-solve the local problem with an independent construction and solver.
    const TabularMdp shaped =
        testing::ShapedLocalModel(mdp_->tabular(), o.partition, vi_->v.values);
    const auto pi = testing::PolicyIteration(shaped);
    EXPECT_GE(pi.values[mdp_->start()], 0.9 * r.v_star_start - 1e-9) << o.key();
    EXPECT_NEAR(pi.values[mdp_->start()], o.v_local_start, 1e-8);
    EXPECT_EQ(o.v_local_start, o.solution->v[mdp_->start()]);
    EXPECT_LE(o.bound.value.clamped, 1.0);
    EXPECT_GE(o.bound.value.clamped, 0.0);
    for (int i = 1; i < o.corridor.length(); ++i) {
      EXPECT_TRUE(CellsAdjacent(mdp_->grid(), o.corridor.cells[i - 1], o.corridor.cells[i]));
    }
  }
}

TEST_F(BundledSearch, MonotoneInEpsilon) {
  std::set<std::string> previous;
  bool first = true;
  for (double eps : {0.99, 0.97, 0.95, 0.92, 0.9, 0.85}) {
    const std::set<std::string> keys = Keys(Run(eps));
    if (!first) {
      EXPECT_TRUE(std::includes(keys.begin(), keys.end(), previous.begin(), previous.end()))
          << "eps " << eps;
    }
    previous = keys;
    first = false;
  }
}

TEST_F(BundledSearch, ThreadCountDoesNotChangeResults) {
  const SearchResult one = Run(0.9, 1);
  const SearchResult four = Run(0.9, 4);
  ASSERT_EQ(one.options.size(), four.options.size());
  for (std::size_t i = 0; i < one.options.size(); ++i) {
    EXPECT_EQ(one.options[i].key(), four.options[i].key());
    EXPECT_EQ(one.options[i].epsilon_ratio, four.options[i].epsilon_ratio);
    EXPECT_EQ(one.options[i].solution->q.values(), four.options[i].solution->q.values());
  }
  EXPECT_EQ(one.report.solved, four.report.solved);
  EXPECT_EQ(one.report.prefix_pruned, four.report.prefix_pruned);
}

TEST_F(BundledSearch, DuplicatesShareOneSolution) {
  const SearchResult r = Run(0.85);
  std::map<std::string, const LocalSolution*> by_problem;
  for (const PolicyOption& o : r.options) {
    const std::string key = LocalProblemKey(o.partition);
    auto [it, inserted] = by_problem.emplace(key, o.solution.get());
    if (!inserted) EXPECT_EQ(it->second, o.solution.get()) << o.key();
    // An independent solve of the same problem gives the same values.
    const LocalSolution fresh = SolveLocalExact(BuildLocalMdp(mdp_->tabular(), o.partition, vi_->v));
    EXPECT_EQ(fresh.v.values, o.solution->v.values);
  }
  EXPECT_GT(r.report.deduplicated, 0u);
}

TEST_F(BundledSearch, EpsilonOneSolvesLittle) {
  const SearchResult r = Run(1.0);
  ExpectReportInvariants(r.report);
  EXPECT_LT(r.report.solved * 10, r.report.upper_bound);
}

TEST_F(BundledSearch, ProgressIsReportedPerLevel) {
  std::vector<int> depths;
  CorridorSearch(*mdp_, vi_->q, BundledConfig(0.95),
                 [&](const SearchReport& r) { depths.push_back(r.depth); });
  ASSERT_FALSE(depths.empty());
  EXPECT_EQ(depths.front(), 1);
  EXPECT_TRUE(std::is_sorted(depths.begin(), depths.end()));
}

TEST_F(BundledSearch, QLearningModeIsReproducible) {
  SearchConfig cfg = BundledConfig(0.95);
  cfg.cells = 2;
  cfg.mode = SolverMode::kQLearning;
  cfg.qlearn.max_episodes = 20'000;
  cfg.qlearn.seed = 5;
  const SearchResult a = CorridorSearch(*mdp_, vi_->q, cfg);
  cfg.threads = 3;
  const SearchResult b = CorridorSearch(*mdp_, vi_->q, cfg);
  ASSERT_EQ(a.options.size(), b.options.size());
  for (std::size_t i = 0; i < a.options.size(); ++i) {
    EXPECT_EQ(a.options[i].key(), b.options[i].key());
    EXPECT_EQ(a.options[i].epsilon_ratio, b.options[i].epsilon_ratio);
    EXPECT_TRUE(a.options[i].solution->learning.has_value());
  }
}

TEST(SearchTest, SmallDeterministicMapMatchesBruteForce) {
  const GridMdp mdp = LoadGridMap("SFF\nFFF\nFFG", testing::DeterministicConfig(1, 1));
  const auto vi = ValueIteration(mdp.tabular());
  SearchConfig cfg;
  cfg.start = {0, 0};
  cfg.epsilon = 0.5;
  cfg.cells = 2;
  cfg.d = 1;
  cfg.spacing = 1;
  const SearchResult r = CorridorSearch(mdp, vi.q, cfg);
  const auto brute = testing::BruteForceSearch(mdp, vi.v.values, {0, 0}, 0.5, 2, 1, 1);
  std::vector<std::string> got, want;
  for (const PolicyOption& o : r.options) got.push_back(o.key());
  for (const auto& o : brute.options) want.push_back(o.key);
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, want);
  EXPECT_FALSE(got.empty());
  ExpectReportInvariants(r.report);
}

TEST(SearchTest, TinyEpsilonSolvesEveryDistinctProblem) {
  const GridMdp mdp = LoadGridMap("SFF\nFFF\nFFG", testing::DeterministicConfig(1, 1));
  const auto vi = ValueIteration(mdp.tabular());
  SearchConfig cfg;
  cfg.start = {0, 0};
  cfg.epsilon = 1e-6;
  cfg.cells = 2;
  cfg.d = 1;
  cfg.spacing = 1;
  const SearchResult r = CorridorSearch(mdp, vi.q, cfg);
  const auto brute = testing::BruteForceSearch(mdp, vi.v.values, {0, 0}, 1e-6, 2, 1, 1);
  EXPECT_EQ(r.options.size(), brute.options.size());
  EXPECT_EQ(r.report.prefiltered, 0u);
  std::set<std::string> problems;
  for (const PolicyOption& o : r.options) problems.insert(LocalProblemKey(o.partition));
  EXPECT_LE(problems.size(), r.report.solved);
}

// The search may miss options the brute force finds (see the acceptance
// report), but every option it returns must be one the brute force returns.
TEST(SearchTest, RandomInstancesReturnOnlyBruteForceOptions) {
  RandomInstanceOptions opts;
  opts.max_side = 5;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const RandomInstance inst = MakeRandomInstance(seed, opts);
    const auto vi = ValueIteration(inst.mdp.tabular());
    const StateId s0 = inst.mdp.start();
    if (!(vi.v[s0] > 0.0)) continue;
    SearchConfig cfg;
    cfg.start = inst.mdp.grid().State(s0);
    cfg.epsilon = 0.6;
    cfg.cells = 1 + static_cast<int>(seed % 3);
    cfg.d = 1;
    cfg.spacing = 1 + static_cast<int>(seed % 2);
    const SearchResult r = CorridorSearch(inst.mdp, vi.q, cfg);
    ExpectReportInvariants(r.report);
    const auto brute = testing::BruteForceSearch(inst.mdp, vi.v.values, cfg.start, cfg.epsilon,
                                                 cfg.cells, cfg.d, cfg.spacing);
    std::map<std::string, double> want;
    for (const auto& o : brute.options) want[o.key] = o.ratio;
    for (const PolicyOption& o : r.options) {
      auto it = want.find(o.key());
      ASSERT_NE(it, want.end()) << "seed " << seed << " extra option " << o.key();
      EXPECT_NEAR(it->second, o.epsilon_ratio, 1e-8);
    }
    EXPECT_LE(r.report.enumerated, static_cast<std::uint64_t>(brute.enumerated) +
                                       r.report.upper_bound);
  }
}

TEST(SearchTest, ZeroBenchmarkIsAnError) {
  const GridMdp mdp = LoadGridMap("SHG", testing::DeterministicConfig());
  const auto vi = ValueIteration(mdp.tabular());
  SearchConfig cfg;
  cfg.start = {0, 0};
  cfg.d = 1;
  try {
    CorridorSearch(mdp, vi.q, cfg);
    FAIL() << "expected ZeroBenchmark";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroBenchmark);
  }
}

TEST(SearchTest, ConfigValidation) {
  const GridMdp mdp = testing::LoadData("det4");
  const auto vi = ValueIteration(mdp.tabular());
  SearchConfig cfg;
  cfg.start = {0, 0};
  cfg.d = 1;
  for (auto mutate : std::vector<std::function<void(SearchConfig&)>>{
           [](SearchConfig& c) { c.epsilon = 0.0; },
           [](SearchConfig& c) { c.epsilon = 1.5; },
           [](SearchConfig& c) { c.cells = 0; },
           [](SearchConfig& c) { c.cells = kMaxCorridorCells + 1; },
           [](SearchConfig& c) { c.d = 0; },
           [](SearchConfig& c) { c.spacing = 0; },
           [](SearchConfig& c) { c.start = {4, 0}; },
       }) {
    SearchConfig bad = cfg;
    mutate(bad);
    EXPECT_THROW(CorridorSearch(mdp, vi.q, bad), Error);
  }
  EXPECT_THROW(CorridorSearch(mdp, QTable(2, 4, 0.95), cfg), Error);
  EXPECT_EQ(ParseSolverMode("qlearn"), SolverMode::kQLearning);
  EXPECT_STREQ(SolverModeName(SolverMode::kExact), "exact");
  EXPECT_THROW(ParseSolverMode("dqn"), Error);
}

}  // namespace
}  // namespace dna
