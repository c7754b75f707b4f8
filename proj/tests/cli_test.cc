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

#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "dna/json_io.h"
#include "support/fixtures.h"

namespace dna::tools {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult Dna(std::vector<std::string> args) {
  args.insert(args.begin(), "dna");
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dna_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("DNA_SEED");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    unsetenv("DNA_SEED");
  }

  std::string P(const std::string& name) const { return (dir_ / name).string(); }

  // Search on the bundled map; returns the options path.
  std::string Search(double epsilon, const std::string& name) {
    const std::string out = P(name);
    const RunResult r = Dna({"search", "--map", map_, "--config", config_, "--epsilon",
                             std::to_string(epsilon), "--cells", "5", "--out", out});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return out;
  }

  fs::path dir_;
  const std::string map_ = testing::DataPath("lake10.txt");
  const std::string config_ = testing::DataPath("lake10.json");
};

TEST_F(CliTest, SolveWritesTablesAndManifest) {
  const RunResult r = Dna({"solve", "--map", map_, "--config", config_, "--out-dir", P("s")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json v = ReadJsonFile(P("s/vstar.json"));
  const GridMdp mdp = testing::LoadData("lake10");
  int goals = 0;
  for (StateId s = 0; s < mdp.num_states(); ++s) {
    if (mdp.tile(s) != Tile::kGoal) continue;
    const GridState g = mdp.grid().State(s);
    const std::string key = std::to_string(g[0]) + "," + std::to_string(g[1]);
    // Sweeps stop at residual tol, leaving at most tol * gamma / (1 - gamma).
    EXPECT_NEAR(v["values"][key].get<double>(), 1.0 / (1.0 - 0.95),
                kDefaultValueTolerance * 0.95 / 0.05);
    ++goals;
  }
  EXPECT_GT(goals, 0);
  for (const char* f : {"vstar.csv", "qstar.json", "qstar.csv", "policy.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(P(std::string("s/") + f))) << f;
  }
  EXPECT_EQ(ReadTextFile(P("s/vstar.csv")),
            ReadTextFile(testing::GoldenPath("lake10_vstar.csv")));

  const Json m = ReadJsonFile(P("s/manifest.json"));
  EXPECT_EQ(m["schema"], "dna.manifest/v1");
  EXPECT_EQ(m["subcommand"], "solve");
  EXPECT_EQ(m["seed"], 0);
  EXPECT_EQ(m["config_hash"], HexDigest(StableHash(CanonicalDump(m["inputs"]))));
  EXPECT_EQ(m["inputs"]["map_path"], map_);
  EXPECT_EQ(m["outputs"].size(), 5u);
  EXPECT_FALSE(m["started_at"].get<std::string>().empty());
}

TEST_F(CliTest, QLearnSolveIsDeterministicPerSeed) {
  auto solve = [&](const std::string& sub, const std::string& seed) {
    const RunResult r = Dna({"solve", "--map", map_, "--config", config_, "--mode", "qlearn",
                             "--episodes", "3000", "--seed", seed, "--out-dir", P(sub)});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return ReadTextFile(P(sub + "/qtable.json"));
  };
  const std::string a = solve("a", "3");
  EXPECT_EQ(a, solve("b", "3"));
  EXPECT_NE(a, solve("c", "4"));
  EXPECT_NE(a.find("\"diagnostics\""), std::string::npos);
}

TEST_F(CliTest, UsageAndIoErrorsExitTwo) {
  const std::string missing = P("nope.txt");
  RunResult r = Dna({"solve", "--map", missing});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find(missing), std::string::npos) << r.err;

  EXPECT_EQ(Dna({}).code, kExitUsage);
  EXPECT_EQ(Dna({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Dna({"search", "--map", map_, "--epsilon", "1.5"}).code, kExitUsage);
  EXPECT_EQ(Dna({"search", "--map", map_, "--start", "x"}).code, kExitUsage);
  EXPECT_EQ(Dna({"verify", "--suite", "everything"}).code, kExitUsage);
  EXPECT_EQ(Dna({"verify", "--suite", "theorem2"}).code, kExitUsage);
  EXPECT_EQ(Dna({"solve", "--map", map_, "--mode", "qlearn", "--exploration", "2"}).code,
            kExitUsage);
  EXPECT_EQ(Dna({"--help"}).code, kExitOk);

  setenv("DNA_SEED", "-4", 1);
  r = Dna({"solve", "--map", map_, "--out-dir", P("x")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("DNA_SEED"), std::string::npos);
}

TEST_F(CliTest, SearchListsGrowAsEpsilonDrops) {
  const OptionsBundle tight = ParseOptionsDocument(ReadJsonFile(Search(0.99, "o99.json")));
  const OptionsBundle loose = ParseOptionsDocument(ReadJsonFile(Search(0.90, "o90.json")));
  std::set<std::string> keys;
  for (const PolicyOption& o : loose.options) keys.insert(o.key());
  EXPECT_GT(loose.options.size(), tight.options.size());
  for (const PolicyOption& o : tight.options) EXPECT_TRUE(keys.count(o.key())) << o.key();
  EXPECT_TRUE(fs::exists(P("o99.json.manifest.json")));

  // stdout and --out produce the same bytes.
  const RunResult r = Dna({"search", "--map", map_, "--config", config_, "--epsilon", "0.99",
                           "--cells", "5"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, ReadTextFile(P("o99.json")));
}

TEST_F(CliTest, SimulateRepeatsBitForBit) {
  const std::string opts = Search(0.99, "o.json");
  auto sim = [&](const std::string& out, std::vector<std::string> extra) {
    std::vector<std::string> args{"simulate", "--options", opts, "--n", "500", "--out", P(out)};
    args.insert(args.end(), extra.begin(), extra.end());
    const RunResult r = Dna(args);
    EXPECT_EQ(r.code, kExitOk) << r.err;
    return ReadTextFile(P(out));
  };
  const std::string a = sim("a.json", {"--seed", "7", "--csv", P("a.csv")});
  EXPECT_EQ(a, sim("b.json", {"--seed", "7"}));
  setenv("DNA_SEED", "7", 1);
  EXPECT_EQ(a, sim("c.json", {}));
  unsetenv("DNA_SEED");
  EXPECT_NE(a, sim("d.json", {"--seed", "8"}));

  const Json doc = Json::parse(a);
  const Json golden = ReadJsonFile(testing::GoldenPath("lake10_compare_seed7.json"));
  ASSERT_EQ(doc["rows"].size(), golden["rows"].size());
  for (std::size_t i = 0; i < doc["rows"].size(); ++i) {
    const Json& rep = doc["rows"][i]["report"];
    EXPECT_EQ(rep["successes"], golden["rows"][i]["successes"]);
    EXPECT_GE(rep["rate"].get<double>(), rep["bound"]["clamped"].get<double>());
  }
  const std::string csv = ReadTextFile(P("a.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);

  const Json one = Json::parse(sim("e.json", {"--seed", "7", "--option", "o1"}));
  ASSERT_EQ(one["rows"].size(), 1u);
  EXPECT_EQ(one["rows"][0]["report"]["option_id"], "o1");
  EXPECT_EQ(Dna({"simulate", "--options", opts, "--option", "o9"}).code, kExitUsage);
  EXPECT_EQ(Dna({"simulate", "--options", opts, "--n", "0"}).code, kExitUsage);
}

TEST_F(CliTest, VerifySuitesReportAndExitCodes) {
  RunResult r = Dna({"verify", "--suite", "lemmas", "--seeds", "20", "--out", P("l.json")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  Json rep = ReadJsonFile(P("l.json"));
  EXPECT_EQ(rep["passed"], 20);
  EXPECT_EQ(rep["total"], 20);
  EXPECT_TRUE(rep["pass"].get<bool>());

  r = Dna({"verify", "--suite", "theorem1", "--seeds", "3"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Json::parse(r.out)["passed"], 3);

  r = Dna({"verify", "--suite", "theorem2", "--map", map_, "--config", config_, "--epsilon",
           "0.99", "--n", "500", "--seed", "7"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Json::parse(r.out)["total"], 3);

  // Nothing to check counts as a failed check.
  r = Dna({"verify", "--suite", "theorem2", "--map", map_, "--config", config_, "--epsilon",
           "1.0", "--n", "10"});
  EXPECT_EQ(r.code, kExitCheckFailed);
}

TEST_F(CliTest, RenderEmitsLayersAndDiff) {
  const std::string opts = Search(0.99, "o.json");
  const RunResult r = Dna({"render", "--options", opts, "--diff", "o1,o2", "--out", P("r.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json render = ReadJsonFile(P("r.json"));
  EXPECT_EQ(render["schema"], "dna.render/v1");
  ASSERT_EQ(render["layers"].size(), 7u);
  const Json& diff = render["layers"].back();
  EXPECT_EQ(diff["type"], "diff");

  // Independent recomputation of the differing states from the documents.
  const OptionsBundle b = ParseOptionsDocument(ReadJsonFile(opts));
  const PolicyOption& o1 = b.Find("o1");
  const PolicyOption& o2 = b.Find("o2");
  std::set<StateId> in2(o2.partition.in.begin(), o2.partition.in.end());
  Json expected = Json::array();
  for (StateId s : o1.partition.in) {
    if (in2.count(s) && o1.solution->pi[s] != o2.solution->pi[s]) {
      expected.push_back(StateToJson(b.mdp.grid().State(s)));
    }
  }
  EXPECT_EQ(diff["states"], expected);
  EXPECT_FALSE(expected.empty());

  EXPECT_EQ(Dna({"render", "--options", opts, "--diff", "o1"}).code, kExitUsage);
}

TEST_F(CliTest, SchemaErrorsNameOffendingPath) {
  const std::string opts = Search(0.99, "o.json");
  Json doc = ReadJsonFile(opts);
  doc["options"][0]["policy"] = "north";
  WriteTextFile(P("bad.json"), doc.dump());
  RunResult r = Dna({"render", "--options", P("bad.json")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("$.options[0].policy"), std::string::npos) << r.err;

  WriteTextFile(P("cfg.json"), R"({"gamma": 0.9, "slip": 0.1})");
  r = Dna({"solve", "--map", map_, "--config", P("cfg.json"), "--out-dir", P("s")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("$.slip"), std::string::npos) << r.err;
}

}  // namespace
}  // namespace dna::tools
