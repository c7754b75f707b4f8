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

#include "cli.h"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <set>

#include <CLI11.hpp>

#include "dna/error.h"
#include "dna/json_io.h"
#include "dna/rollout_sim.h"
#include "dna/search.h"
#include "dna/suites.h"
#include "service.h"

#ifndef DNA_VERSION
#define DNA_VERSION "0.0.0"
#endif

namespace dna::tools {

namespace {

namespace fs = std::filesystem;

struct Environment {
  std::string map_path;
  std::string map_text;
  std::string config_path;
  MdpConfig config;
  std::unique_ptr<GridMdp> mdp;
};

Environment LoadEnvironment(const std::string& map_path, const std::string& config_path) {
  Environment env;
  env.map_path = map_path;
  env.config_path = config_path;
  env.map_text = ReadTextFile(map_path);
  if (!config_path.empty()) env.config = MdpConfigFromJson(ReadJsonFile(config_path));
  env.mdp = std::make_unique<GridMdp>(LoadGridMap(env.map_text, env.config));
  return env;
}

std::string UtcNow() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Written before any output so an interrupted run still records its inputs.
void WriteManifest(const fs::path& path, const std::string& subcommand,
                   const std::vector<std::string>& args, const Json& inputs,
                   std::uint64_t seed, const std::vector<std::string>& outputs) {
  const Json manifest = {{"schema", "dna.manifest/v1"},
                         {"subcommand", subcommand},
                         {"argv", args},
                         {"inputs", inputs},
                         {"config_hash", HexDigest(StableHash(CanonicalDump(inputs)))},
                         {"seed", seed},
                         {"tool_version", DNA_VERSION},
                         {"started_at", UtcNow()},
                         {"outputs", outputs}};
  WriteTextFile(path, CanonicalDump(manifest));
}

Json EnvironmentInputs(const Environment& env) {
  return {{"map_path", env.map_path},
          {"map", env.map_text},
          {"config_path", env.config_path},
          {"config", MdpConfigToJson(env.config)}};
}

void Emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    WriteTextFile(path, text);
  }
}

std::string ManifestFor(const std::string& explicit_path, const std::string& out_path) {
  if (!explicit_path.empty()) return explicit_path;
  if (out_path.empty() || out_path == "-") return "";
  return out_path + ".manifest.json";
}

struct Common {
  int threads = 1;
  std::optional<std::uint64_t> seed;
  std::string manifest;

  std::uint64_t ResolveSeed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("DNA_SEED"); env != nullptr && *env != '\0') {
      char* end = nullptr;
      errno = 0;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (errno != 0 || *end != '\0' || *env == '-') {
        throw Error(ErrorCode::kInvalidArgument,
                    "DNA_SEED must be an unsigned integer, got '" + std::string(env) + "'");
      }
      return v;
    }
    return 0;
  }
};

struct QLearnFlags {
  std::int64_t episodes = QLearnConfig{}.max_episodes;
  int max_steps = QLearnConfig{}.max_steps_per_episode;
  std::string schedule = "inverse_sqrt";
  double learning_rate = QLearnConfig{}.learning_rate;
  std::optional<double> exploration;

  void Register(CLI::App* cmd) {
    cmd->add_option("--episodes", episodes, "Q-learning episode cap")->check(CLI::PositiveNumber);
    cmd->add_option("--max-steps", max_steps, "Q-learning steps per episode")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--schedule", schedule, "learning-rate schedule")
        ->check(CLI::IsMember({"inverse_sqrt", "rescaled_linear", "constant"}));
    cmd->add_option("--learning-rate", learning_rate, "base learning rate");
    cmd->add_option("--exploration", exploration, "fixed exploration rate (default: decaying)")
        ->check(CLI::Range(0.0, 1.0));
  }

  QLearnConfig Build(std::uint64_t seed) const {
    QLearnConfig c;
    c.max_episodes = episodes;
    c.max_steps_per_episode = max_steps;
    c.learning_rate = learning_rate;
    c.seed = seed;
    if (exploration) c.exploration_start = c.exploration_end = *exploration;
    if (schedule == "rescaled_linear") c.schedule = LearningRateSchedule::kRescaledLinear;
    if (schedule == "constant") c.schedule = LearningRateSchedule::kConstant;
    c.Validate();
    return c;
  }
};

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string map, config, mode = "exact", out_dir = ".";
  QLearnFlags qlearn;
};

int CmdSolve(const SolveArgs& a, const Common& common, const std::vector<std::string>& argv,
             std::ostream& out) {
  const Environment env = LoadEnvironment(a.map, a.config);
  const SolverMode mode = ParseSolverMode(a.mode);
  const std::uint64_t seed = common.ResolveSeed();
  const Grid& grid = env.mdp->grid();
  const TabularMdp& mdp = env.mdp->tabular();

  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  std::vector<std::string> outputs;
  for (const char* name : {"vstar.json", "vstar.csv", "qstar.json", "qstar.csv", "policy.json"}) {
    outputs.push_back((dir / name).string());
  }
  if (mode == SolverMode::kQLearning) {
    for (const char* name : {"qtable.json", "qtable.csv"}) outputs.push_back((dir / name).string());
  }
  Json inputs = EnvironmentInputs(env);
  inputs["mode"] = a.mode;
  if (mode == SolverMode::kQLearning) {
    inputs["qlearn"] = {{"episodes", a.qlearn.episodes},
                        {"max_steps", a.qlearn.max_steps},
                        {"schedule", a.qlearn.schedule},
                        {"learning_rate", a.qlearn.learning_rate}};
    if (a.qlearn.exploration) inputs["qlearn"]["exploration"] = *a.qlearn.exploration;
  }
  const std::string manifest =
      common.manifest.empty() ? (dir / "manifest.json").string() : common.manifest;
  WriteManifest(manifest, "solve", argv, inputs, seed, outputs);

  const ValueIterationResult vi = ValueIteration(mdp);
  const Policy pi = GreedyPolicy(vi.q);
  Json vjson = ValuesToJson(grid, vi.v, mdp.gamma());
  vjson["diagnostics"] = {{"iterations", vi.stats.iterations}, {"residual", vi.stats.residual}};
  WriteTextFile(dir / "vstar.json", CanonicalDump(vjson));
  WriteTextFile(dir / "vstar.csv", ValuesToCsv(grid, vi.v));
  WriteTextFile(dir / "qstar.json", CanonicalDump(QTableToJson(grid, vi.q)));
  WriteTextFile(dir / "qstar.csv", QTableToCsv(grid, vi.q));
  Json names = Json::array();
  for (ActionId a : pi.actions) names.push_back(ActionName(a, grid.dims()));
  WriteTextFile(dir / "policy.json",
                CanonicalDump({{"schema", "dna.policy/v1"},
                               {"shape", grid.extents()},
                               {"actions", pi.actions},
                               {"names", names}}));
  out << "V*(start) = " << vi.v[env.mdp->start()] << " after " << vi.stats.iterations
      << " sweeps\n";

  if (mode == SolverMode::kQLearning) {
    const QLearnResult learned = QLearning(mdp, a.qlearn.Build(seed));
    Json qjson = QTableToJson(grid, learned.q);
    const QLearnDiagnostics& d = learned.diagnostics;
    qjson["diagnostics"] = {{"episodes", d.episodes},
                            {"steps", d.steps},
                            {"converged", d.converged},
                            {"last_window_change", d.last_window_change},
                            {"bellman_residual", d.bellman_residual},
                            {"seed", seed}};
    WriteTextFile(dir / "qtable.json", CanonicalDump(qjson));
    WriteTextFile(dir / "qtable.csv", QTableToCsv(grid, learned.q));
    out << "Q-learning: " << d.episodes << " episodes, converged=" << std::boolalpha
        << d.converged << ", residual " << d.bellman_residual << "\n";
  }
  return kExitOk;
}

// ---- search ----------------------------------------------------------------

struct SearchArgs {
  std::string map, config, start, mode = "exact", out;
  double epsilon = 0.9;
  int cells = 5;
  std::optional<int> d, spacing;
  QLearnFlags qlearn;
};

int CmdSearch(const SearchArgs& a, const Common& common, const std::vector<std::string>& argv,
              std::ostream& out, std::ostream& err) {
  const Environment env = LoadEnvironment(a.map, a.config);
  const std::uint64_t seed = common.ResolveSeed();
  SearchConfig cfg;
  cfg.start = a.start.empty() ? env.mdp->grid().State(env.mdp->start()) : ParseStateText(a.start);
  cfg.epsilon = a.epsilon;
  cfg.cells = a.cells;
  cfg.d = a.d.value_or(env.config.cell_d);
  cfg.spacing = a.spacing.value_or(env.config.cell_spacing);
  cfg.mode = ParseSolverMode(a.mode);
  if (cfg.mode == SolverMode::kQLearning) cfg.qlearn = a.qlearn.Build(seed);
  cfg.threads = common.threads;
  cfg.Validate(env.mdp->grid());

  if (const std::string m = ManifestFor(common.manifest, a.out); !m.empty()) {
    Json inputs = EnvironmentInputs(env);
    inputs["search"] = SearchConfigToJson(cfg);
    WriteManifest(m, "search", argv, inputs, seed, {a.out});
  }
  const ValueIterationResult vi = ValueIteration(env.mdp->tabular());
  const SearchResult result = CorridorSearch(*env.mdp, vi.q, cfg);
  Emit(a.out, CanonicalDump(OptionsDocument(*env.mdp, cfg, result)), out);
  const SearchReport& r = result.report;
  (a.out.empty() || a.out == "-" ? err : out)
      << result.options.size() << " option(s); enumerated " << r.enumerated << ", solved "
      << r.solved << ", prefiltered " << r.prefiltered << ", prefix-pruned " << r.prefix_pruned
      << ", deduplicated " << r.deduplicated << " (bound " << r.upper_bound << ")\n";
  return kExitOk;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string options, out, csv;
  std::vector<std::string> ids;
  std::int64_t n = 500;
  int samples = 0;
};

int CmdSimulate(const SimulateArgs& a, const Common& common,
                const std::vector<std::string>& argv, std::ostream& out) {
  const Json doc = ReadJsonFile(a.options);
  const OptionsBundle bundle = ParseOptionsDocument(doc);
  if (bundle.options.empty()) {
    throw Error(ErrorCode::kInvalidArgument, a.options + " contains no options to simulate");
  }
  const std::uint64_t seed = common.ResolveSeed();
  std::vector<PolicyOption> chosen;
  std::vector<std::string> ids = a.ids.empty() ? bundle.ids : a.ids;
  for (const std::string& id : ids) chosen.push_back(bundle.Find(id));

  if (const std::string m = ManifestFor(common.manifest, a.out); !m.empty()) {
    std::vector<std::string> outputs{a.out};
    if (!a.csv.empty()) outputs.push_back(a.csv);
    const Json inputs = {{"options_path", a.options},
                         {"options_hash", HexDigest(StableHash(CanonicalDump(doc)))},
                         {"ids", ids},
                         {"n", a.n},
                         {"samples", a.samples}};
    WriteManifest(m, "simulate", argv, inputs, seed, outputs);
  }
  SimOptions sim;
  sim.n = a.n;
  sim.seed = seed;
  sim.samples = a.samples;
  sim.threads = common.threads;
  const TabularMdp& mdp = bundle.mdp.tabular();
  const Policy pi_star = GreedyPolicy(ValueIteration(mdp).q);
  const StateId s0 = bundle.mdp.grid().Id(bundle.config.start);
  const auto rows = CompareOptions(mdp, chosen, pi_star, s0, sim, ids);

  Json table = Json::array();
  for (const ComparisonRow& row : rows) {
    table.push_back({{"epsilon_ratio", row.epsilon_ratio},
                     {"report", SimReportToJson(bundle.mdp.grid(), row.report)}});
  }
  const Json result = {{"schema", "dna.comparison/v1"}, {"n", a.n}, {"seed", seed}, {"rows", table}};
  Emit(a.out, CanonicalDump(result), out);
  if (!a.csv.empty()) WriteTextFile(a.csv, ComparisonToCsv(rows));
  return kExitOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string suite, out, map, config, start;
  std::optional<int> seeds;
  double epsilon = 0.9;
  int cells = 5;
  std::int64_t n = 10000;
};

Json SuiteToJson(const SuiteReport& report) {
  Json instances = Json::array();
  for (const InstanceResult& r : report.instances) {
    Json checks = Json::array();
    for (const NamedCheck& c : r.checks) {
      checks.push_back({{"name", c.name},
                        {"max_gap", c.report.max_gap},
                        {"worst_state", c.report.worst_state},
                        {"tolerance", c.report.tolerance},
                        {"pass", c.report.pass}});
    }
    instances.push_back({{"seed", r.seed}, {"label", r.label}, {"pass", r.pass}, {"checks", checks}});
  }
  return {{"suite", report.suite},
          {"pass", report.pass},
          {"passed", report.passed},
          {"total", report.instances.size()},
          {"instances", instances}};
}

int CmdVerify(const VerifyArgs& a, const Common& common, const std::vector<std::string>& argv,
              std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = common.ResolveSeed();
  Json inputs = {{"suite", a.suite}, {"seeds", a.seeds ? Json(*a.seeds) : Json(nullptr)}};
  std::optional<Environment> env;
  if (a.suite == "theorem2") {
    if (a.map.empty()) throw Error(ErrorCode::kInvalidArgument, "--suite theorem2 needs --map");
    env = LoadEnvironment(a.map, a.config);
    inputs["environment"] = EnvironmentInputs(*env);
    inputs["n"] = a.n;
  }
  if (const std::string m = ManifestFor(common.manifest, a.out); !m.empty()) {
    WriteManifest(m, "verify", argv, inputs, seed, {a.out});
  }

  SuiteReport report;
  if (a.suite == "lemmas") {
    report = RunConstructionSuite(a.seeds.value_or(20), seed);
  } else if (a.suite == "theorem1") {
    report = RunLocalBoundSuite(a.seeds.value_or(50), seed);
  } else {
    SearchConfig cfg;
    cfg.start = a.start.empty() ? env->mdp->grid().State(env->mdp->start())
                                : ParseStateText(a.start);
    cfg.epsilon = a.epsilon;
    cfg.cells = a.cells;
    cfg.d = env->config.cell_d;
    cfg.spacing = env->config.cell_spacing;
    cfg.threads = common.threads;
    SuccessBoundOptions opts;
    opts.sim.n = a.n;
    opts.sim.threads = common.threads;
    report.suite = "theorem2";
    for (int i = 0; i < a.seeds.value_or(1); ++i) {
      opts.sim.seed = seed + static_cast<std::uint64_t>(i);
      SuiteReport part = RunSuccessBoundSuite(*env->mdp, cfg, opts);
      for (InstanceResult& r : part.instances) report.instances.push_back(std::move(r));
      report.seconds += part.seconds;
    }
    report.passed = 0;
    for (const InstanceResult& r : report.instances) report.passed += r.pass;
    report.pass = !report.instances.empty() &&
                  report.passed == static_cast<int>(report.instances.size());
  }
  Emit(a.out, CanonicalDump(SuiteToJson(report)), out);
  (a.out.empty() || a.out == "-" ? err : out)
      << report.suite << ": " << report.passed << "/" << report.instances.size() << " pass in "
      << report.seconds << " s\n";
  return report.pass ? kExitOk : kExitCheckFailed;
}

// ---- render ----------------------------------------------------------------

struct RenderArgs {
  std::string options, out, diff;
  std::vector<std::string> ids;
};

int CmdRender(const RenderArgs& a, const Common& common, const std::vector<std::string>& argv,
              std::ostream& out) {
  const Json doc = ReadJsonFile(a.options);
  const OptionsBundle bundle = ParseOptionsDocument(doc);
  const Grid& grid = bundle.mdp.grid();
  if (const std::string m = ManifestFor(common.manifest, a.out); !m.empty()) {
    const Json inputs = {{"options_path", a.options},
                         {"options_hash", HexDigest(StableHash(CanonicalDump(doc)))},
                         {"ids", a.ids},
                         {"diff", a.diff}};
    WriteManifest(m, "render", argv, inputs, common.ResolveSeed(), {a.out});
  }
  Json layers = Json::array();
  const std::vector<std::string> ids = a.ids.empty() ? bundle.ids : a.ids;
  for (const std::string& id : ids) {
    const PolicyOption& opt = bundle.Find(id);
    Json in = Json::array(), omega = Json::array();
    for (StateId s : opt.partition.in) in.push_back(StateToJson(grid.State(s)));
    for (StateId s : opt.partition.omega) omega.push_back(StateToJson(grid.State(s)));
    layers.push_back({{"type", "corridor"},
                      {"option", id},
                      {"corridor", CorridorToJson(opt.corridor)},
                      {"s_in", in},
                      {"s_omega", omega}});
    layers.push_back({{"type", "arrows"},
                      {"option", id},
                      {"arrows", ArrowsToJson(grid, opt.partition, opt.solution->pi)}});
  }
  if (!a.diff.empty()) {
    const auto comma = a.diff.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "--diff expects two ids as a,b");
    }
    const std::string first = a.diff.substr(0, comma), second = a.diff.substr(comma + 1);
    Json states = Json::array();
    for (StateId s : ActionDiff(bundle.Find(first), bundle.Find(second))) {
      states.push_back(StateToJson(grid.State(s)));
    }
    layers.push_back({{"type", "diff"}, {"options", {first, second}}, {"states", states}});
  }
  Json tiles = Json::array();
  std::istringstream rows(bundle.mdp.ToMapText());
  for (std::string line; std::getline(rows, line);) tiles.push_back(line);
  const Json render = {{"schema", "dna.render/v1"},
                       {"shape", grid.extents()},
                       {"tiles", tiles},
                       {"start", StateToJson(bundle.config.start)},
                       {"layers", layers}};
  Emit(a.out, CanonicalDump(render), out);
  return kExitOk;
}

// ---- serve -----------------------------------------------------------------

struct ServeArgs {
  std::string maps, host = "127.0.0.1", jobs_dir;
  int port = 8080;
  int workers = 1;
};

int CmdServe(const ServeArgs& a, const Common& common, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(a.maps)) {
    throw Error(ErrorCode::kIo, "map directory " + a.maps + " does not exist");
  }
  ServiceConfig cfg;
  cfg.maps_dir = a.maps;
  if (!a.jobs_dir.empty()) cfg.jobs_dir = fs::path(a.jobs_dir);
  cfg.workers = a.workers;
  cfg.threads = common.threads;
  Service service(std::move(cfg));
  HttpServer server(service);
  const int port = server.Bind(a.host, a.port);
  if (port < 0) {
    err << "dna: error: cannot bind " << a.host << ":" << a.port << "\n";
    return kExitUsage;
  }
  out << "serving " << a.maps << " on http://" << a.host << ":" << port << "/api/v1\n"
      << std::flush;
  return server.Serve() ? kExitOk : kExitUsage;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diverse near-optimal corridor policies on grid MDPs", "dna"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DNA_VERSION);
  Common common;
  app.add_option("--threads", common.threads, "worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  auto add_seed = [&common](CLI::App* cmd) {
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&common](const std::uint64_t& v) { common.seed = v; },
        "random seed (falls back to DNA_SEED, then 0)");
    cmd->add_option("--manifest", common.manifest, "manifest path");
  };

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Value iteration and optional Q-learning tables");
  solve_cmd->add_option("--map", solve.map, "map file")->required();
  solve_cmd->add_option("--config", solve.config, "config JSON");
  solve_cmd->add_option("--mode", solve.mode, "exact|qlearn")
      ->check(CLI::IsMember({"exact", "qlearn"}));
  solve_cmd->add_option("--out-dir", solve.out_dir, "output directory");
  solve.qlearn.Register(solve_cmd);
  add_seed(solve_cmd);

  SearchArgs search;
  CLI::App* search_cmd = app.add_subcommand("search", "Corridor search for near-optimal options");
  search_cmd->add_option("--map", search.map, "map file")->required();
  search_cmd->add_option("--config", search.config, "config JSON");
  search_cmd->add_option("--start", search.start, "start state y,x (default: S tile)");
  search_cmd->add_option("--epsilon", search.epsilon, "ratio threshold in (0, 1]");
  search_cmd->add_option("--cells", search.cells, "corridor length in cells (B + 1)");
  search_cmd->add_option("--d", search.d, "cell half-width (default: config)");
  search_cmd->add_option("--spacing", search.spacing, "cell spacing (default: config)");
  search_cmd->add_option("--mode", search.mode, "local solver exact|qlearn")
      ->check(CLI::IsMember({"exact", "qlearn"}));
  search_cmd->add_option("--out", search.out, "options JSON (default stdout)");
  search.qlearn.Register(search_cmd);
  add_seed(search_cmd);

  SimulateArgs simulate;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo success statistics");
  sim_cmd->add_option("--options", simulate.options, "options JSON from search")->required();
  sim_cmd->add_option("--option", simulate.ids, "option id (repeatable; default all)");
  sim_cmd->add_option("--n", simulate.n, "rollouts per option")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--samples", simulate.samples, "trajectories kept per option")
      ->check(CLI::Range(0, kMaxSampleTrajectories));
  sim_cmd->add_option("--out", simulate.out, "report JSON (default stdout)");
  sim_cmd->add_option("--csv", simulate.csv, "comparison table CSV");
  add_seed(sim_cmd);

  VerifyArgs verify;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Executable guarantee checks");
  verify_cmd->add_option("--suite", verify.suite, "lemmas|theorem1|theorem2")
      ->required()
      ->check(CLI::IsMember({"lemmas", "theorem1", "theorem2"}));
  verify_cmd->add_option("--seeds", verify.seeds, "instances (or simulation seeds)")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--out", verify.out, "report JSON (default stdout)");
  verify_cmd->add_option("--map", verify.map, "map file (theorem2)");
  verify_cmd->add_option("--config", verify.config, "config JSON (theorem2)");
  verify_cmd->add_option("--start", verify.start, "start y,x (theorem2)");
  verify_cmd->add_option("--epsilon", verify.epsilon, "ratio threshold (theorem2)");
  verify_cmd->add_option("--cells", verify.cells, "corridor cells (theorem2)");
  verify_cmd->add_option("--n", verify.n, "rollouts per option (theorem2)")
      ->check(CLI::PositiveNumber);
  add_seed(verify_cmd);

  RenderArgs render;
  CLI::App* render_cmd = app.add_subcommand("render", "Overlay data for plotting");
  render_cmd->add_option("--options", render.options, "options JSON from search")->required();
  render_cmd->add_option("--option", render.ids, "option id (repeatable; default all)");
  render_cmd->add_option("--diff", render.diff, "two ids a,b for an action-diff layer");
  render_cmd->add_option("--out", render.out, "render JSON (default stdout)");
  add_seed(render_cmd);

  ServeArgs serve;
  CLI::App* serve_cmd = app.add_subcommand("serve", "HTTP API for the explorer");
  serve_cmd->add_option("--maps", serve.maps, "directory of <id>.txt maps")->required();
  serve_cmd->add_option("--port", serve.port, "TCP port (0 = any)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", serve.host, "bind address");
  serve_cmd->add_option("--jobs-dir", serve.jobs_dir, "persist finished jobs here");
  serve_cmd->add_option("--workers", serve.workers, "concurrent search jobs")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve_cmd) return CmdSolve(solve, common, args, out);
    if (*search_cmd) return CmdSearch(search, common, args, out, err);
    if (*sim_cmd) return CmdSimulate(simulate, common, args, out);
    if (*verify_cmd) return CmdVerify(verify, common, args, out, err);
    if (*render_cmd) return CmdRender(render, common, args, out);
    if (*serve_cmd) return CmdServe(serve, common, out, err);
  } catch (const Error& e) {
    err << "dna: error (" << ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "dna: error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace dna::tools
