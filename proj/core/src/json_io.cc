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

#include "dna/json_io.h"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "dna/error.h"

namespace dna {

namespace {

[[noreturn]] void SchemaError(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kSchema, path + ": " + what);
}

void RequireObject(const Json& j, const std::string& path) {
  if (!j.is_object()) SchemaError(path, "expected an object");
}

void RejectUnknownKeys(const Json& j, const std::string& path,
                       std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (std::string_view k : known) ok = ok || key == k;
    if (!ok) SchemaError(path + "." + key, "unknown key");
  }
}

const Json& Require(const Json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) SchemaError(path + "." + key, "missing");
  return *it;
}

double NumberAt(const Json& j, const std::string& path) {
  if (!j.is_number()) SchemaError(path, "expected a number");
  return j.get<double>();
}

std::int64_t IntegerAt(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) SchemaError(path, "expected an integer");
  return j.get<std::int64_t>();
}

bool BoolAt(const Json& j, const std::string& path) {
  if (!j.is_boolean()) SchemaError(path, "expected a boolean");
  return j.get<bool>();
}

std::string StringAt(const Json& j, const std::string& path) {
  if (!j.is_string()) SchemaError(path, "expected a string");
  return j.get<std::string>();
}

template <typename T, typename Get>
void Optional(const Json& j, const std::string& path, const char* key, T& out,
              Get get) {
  auto it = j.find(key);
  if (it != j.end()) out = static_cast<T>(get(*it, path + "." + key));
}

std::string StateKey(const GridState& s) {
  std::string key;
  for (int k = 0; k < s.dims(); ++k) {
    if (k > 0) key += ',';
    key += std::to_string(s[k]);
  }
  return key;
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvHeader(const Grid& grid) {
  std::string h = "id";
  if (grid.dims() == 2) return h + ",y,x";
  for (int k = 0; k < grid.dims(); ++k) h += ",c" + std::to_string(k);
  return h;
}

const char* ScheduleName(LearningRateSchedule s) {
  switch (s) {
    case LearningRateSchedule::kInverseSqrtVisits:
      return "inverse_sqrt";
    case LearningRateSchedule::kRescaledLinear:
      return "rescaled_linear";
    case LearningRateSchedule::kConstant:
      return "constant";
  }
  return "unknown";
}

LearningRateSchedule ParseSchedule(const std::string& name, const std::string& path) {
  if (name == "inverse_sqrt") return LearningRateSchedule::kInverseSqrtVisits;
  if (name == "rescaled_linear") return LearningRateSchedule::kRescaledLinear;
  if (name == "constant") return LearningRateSchedule::kConstant;
  SchemaError(path, "unknown schedule '" + name + "'");
}

Json QLearnConfigToJson(const QLearnConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"schedule", ScheduleName(c.schedule)},
          {"exploration_start", c.exploration_start},
          {"exploration_end", c.exploration_end},
          {"exploration_decay_episodes", c.exploration_decay_episodes},
          {"max_episodes", c.max_episodes},
          {"max_steps_per_episode", c.max_steps_per_episode},
          {"convergence_tol", c.convergence_tol},
          {"convergence_window", c.convergence_window},
          {"seed", c.seed},
          {"require_convergence", c.require_convergence}};
}

QLearnConfig QLearnConfigFromJson(const Json& j, const std::string& path) {
  RequireObject(j, path);
  RejectUnknownKeys(j, path,
                    {"learning_rate", "schedule", "exploration_start",
                     "exploration_end", "exploration_decay_episodes",
                     "max_episodes", "max_steps_per_episode", "convergence_tol",
                     "convergence_window", "seed", "require_convergence"});
  QLearnConfig c;
  Optional(j, path, "learning_rate", c.learning_rate, NumberAt);
  if (auto it = j.find("schedule"); it != j.end()) {
    c.schedule = ParseSchedule(StringAt(*it, path + ".schedule"), path + ".schedule");
  }
  Optional(j, path, "exploration_start", c.exploration_start, NumberAt);
  Optional(j, path, "exploration_end", c.exploration_end, NumberAt);
  Optional(j, path, "exploration_decay_episodes", c.exploration_decay_episodes,
           IntegerAt);
  Optional(j, path, "max_episodes", c.max_episodes, IntegerAt);
  Optional(j, path, "max_steps_per_episode", c.max_steps_per_episode, IntegerAt);
  Optional(j, path, "convergence_tol", c.convergence_tol, NumberAt);
  Optional(j, path, "convergence_window", c.convergence_window, IntegerAt);
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) SchemaError(path + ".seed", "expected an unsigned integer");
    c.seed = it->get<std::uint64_t>();
  }
  Optional(j, path, "require_convergence", c.require_convergence, BoolAt);
  return c;
}

}  // namespace

std::string CanonicalDump(const Json& doc) { return doc.dump(2) + "\n"; }

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Json ReadJsonFile(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kSchema, path.string() + ": " + e.what());
  }
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

MdpConfig MdpConfigFromJson(const Json& j) {
  const std::string path = "$";
  RequireObject(j, path);
  RejectUnknownKeys(j, path,
                    {"gamma", "slip_intended", "slip_lateral", "goal_reward",
                     "cell_d", "cell_spacing"});
  MdpConfig c;
  Optional(j, path, "gamma", c.gamma, NumberAt);
  Optional(j, path, "slip_intended", c.slip_intended, NumberAt);
  Optional(j, path, "slip_lateral", c.slip_lateral, NumberAt);
  Optional(j, path, "goal_reward", c.goal_reward, NumberAt);
  Optional(j, path, "cell_d", c.cell_d, IntegerAt);
  Optional(j, path, "cell_spacing", c.cell_spacing, IntegerAt);
  c.Validate();
  return c;
}

Json MdpConfigToJson(const MdpConfig& c) {
  return {{"gamma", c.gamma},
          {"slip_intended", c.slip_intended},
          {"slip_lateral", c.slip_lateral},
          {"goal_reward", c.goal_reward},
          {"cell_d", c.cell_d},
          {"cell_spacing", c.cell_spacing}};
}

Json StateToJson(const GridState& s) { return Json(s.coords); }

GridState StateFromJson(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) SchemaError(path, "expected a coordinate array");
  std::vector<int> coords;
  for (std::size_t i = 0; i < j.size(); ++i) {
    coords.push_back(static_cast<int>(IntegerAt(j[i], path + "[" + std::to_string(i) + "]")));
  }
  return GridState(std::move(coords));
}

GridState ParseStateText(std::string_view text) {
  std::vector<int> coords;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "state '" + std::string(text) + "' is not of the form y,x");
    }
    coords.push_back(v);
  }
  if (coords.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty state");
  }
  return GridState(std::move(coords));
}

Json CorridorToJson(const Corridor& corridor) {
  Json cells = Json::array();
  for (const Cell& c : corridor.cells) {
    cells.push_back({{"center", StateToJson(c.center)}, {"d", c.d}});
  }
  Json out = {{"cells", cells}};
  if (corridor.edge) {
    out["edge"] = {{"k", corridor.edge->k}, {"alpha", corridor.edge->alpha}};
  }
  return out;
}

Corridor CorridorFromJson(const Grid& grid, const Json& j, const std::string& path) {
  RequireObject(j, path);
  RejectUnknownKeys(j, path, {"cells", "edge"});
  const Json& cells = Require(j, path, "cells");
  if (!cells.is_array() || cells.empty()) {
    SchemaError(path + ".cells", "expected a non-empty array");
  }
  Corridor corridor;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string cp = path + ".cells[" + std::to_string(i) + "]";
    RequireObject(cells[i], cp);
    RejectUnknownKeys(cells[i], cp, {"center", "d"});
    const GridState center = StateFromJson(Require(cells[i], cp, "center"), cp + ".center");
    const int d = static_cast<int>(IntegerAt(Require(cells[i], cp, "d"), cp + ".d"));
    if (center.dims() != grid.dims() || !grid.Contains(center)) {
      SchemaError(cp + ".center", "off the grid");
    }
    if (d < 1) SchemaError(cp + ".d", "must be >= 1");
    Cell cell = MakeCell(grid, center, d);
    if (!corridor.cells.empty() && !CellsAdjacent(grid, corridor.last(), cell)) {
      SchemaError(cp, "not adjacent to the previous cell");
    }
    corridor.cells.push_back(std::move(cell));
  }
  if (auto it = j.find("edge"); it != j.end()) {
    const std::string ep = path + ".edge";
    RequireObject(*it, ep);
    RejectUnknownKeys(*it, ep, {"k", "alpha"});
    EdgeSpec spec{static_cast<int>(IntegerAt(Require(*it, ep, "k"), ep + ".k")),
                  static_cast<int>(IntegerAt(Require(*it, ep, "alpha"), ep + ".alpha"))};
    if (spec.k < 0 || spec.k >= grid.dims()) SchemaError(ep + ".k", "out of range");
    if (spec.alpha != -1 && spec.alpha != 1) SchemaError(ep + ".alpha", "must be -1 or 1");
    if (MakeTerminalEdge(grid, corridor.last(), spec).members.empty()) {
      SchemaError(ep, "edge lies outside the grid");
    }
    corridor.edge = spec;
  }
  return corridor;
}

Json ValuesToJson(const Grid& grid, const ValueTable& v, double gamma) {
  Json values = Json::object();
  for (StateId s = 0; s < v.size(); ++s) values[StateKey(grid.State(s))] = v[s];
  return {{"schema", kValuesSchema},
          {"shape", grid.extents()},
          {"gamma", gamma},
          {"values", values}};
}

Json QTableToJson(const Grid& grid, const QTable& q) {
  Json values = Json::object();
  for (StateId s = 0; s < q.num_states(); ++s) {
    Json row = Json::array();
    for (ActionId a = 0; a < q.num_actions(); ++a) row.push_back(q(s, a));
    values[StateKey(grid.State(s))] = row;
  }
  Json names = Json::array();
  for (ActionId a = 0; a < q.num_actions(); ++a) names.push_back(ActionName(a, grid.dims()));
  return {{"schema", kQTableSchema},
          {"shape", grid.extents()},
          {"gamma", q.gamma()},
          {"actions", names},
          {"q", values}};
}

ValueTable ValuesFromJson(const Grid& grid, const Json& j) {
  RequireObject(j, "$");
  if (StringAt(Require(j, "$", "schema"), "$.schema") != kValuesSchema) {
    SchemaError("$.schema", "expected " + std::string(kValuesSchema));
  }
  const Json& values = Require(j, "$", "values");
  RequireObject(values, "$.values");
  ValueTable v{std::vector<double>(grid.num_states(), 0.0)};
  std::vector<bool> seen(grid.num_states(), false);
  for (const auto& [key, value] : values.items()) {
    const std::string p = "$.values." + key;
    GridState s;
    try {
      s = ParseStateText(key);
    } catch (const Error&) {
      SchemaError(p, "bad state key");
    }
    if (s.dims() != grid.dims() || !grid.Contains(s)) SchemaError(p, "off the grid");
    v[grid.Id(s)] = NumberAt(value, p);
    seen[grid.Id(s)] = true;
  }
  for (StateId s = 0; s < grid.num_states(); ++s) {
    if (!seen[s]) SchemaError("$.values", "missing state " + StateKey(grid.State(s)));
  }
  return v;
}

std::string ValuesToCsv(const Grid& grid, const ValueTable& v) {
  std::string out = CsvHeader(grid) + ",value\n";
  for (StateId s = 0; s < v.size(); ++s) {
    out += std::to_string(s) + "," + StateKey(grid.State(s)) + "," +
           FormatDouble(v[s]) + "\n";
  }
  return out;
}

std::string QTableToCsv(const Grid& grid, const QTable& q) {
  std::string out = CsvHeader(grid);
  for (ActionId a = 0; a < q.num_actions(); ++a) out += ",q" + std::to_string(a);
  out += "\n";
  for (StateId s = 0; s < q.num_states(); ++s) {
    out += std::to_string(s) + "," + StateKey(grid.State(s));
    for (ActionId a = 0; a < q.num_actions(); ++a) out += "," + FormatDouble(q(s, a));
    out += "\n";
  }
  return out;
}

ValueTable ValuesFromCsv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kSchema, "empty CSV");
  ValueTable v;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(line.substr(comma + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (comma == std::string::npos || used == 0) {
      throw Error(ErrorCode::kSchema, "CSV row " + std::to_string(row) + ": bad value");
    }
    v.values.push_back(value);
  }
  return v;
}

Json SearchConfigToJson(const SearchConfig& cfg) {
  Json out = {{"start", StateToJson(cfg.start)},
              {"epsilon", cfg.epsilon},
              {"cells", cfg.cells},
              {"d", cfg.d},
              {"spacing", cfg.spacing},
              {"mode", SolverModeName(cfg.mode)}};
  if (cfg.mode == SolverMode::kQLearning) out["qlearn"] = QLearnConfigToJson(cfg.qlearn);
  return out;
}

SearchConfig SearchConfigFromJson(const Json& j, const MdpConfig& env,
                                  const std::string& path) {
  RequireObject(j, path);
  RejectUnknownKeys(j, path, {"start", "epsilon", "cells", "d", "spacing", "mode", "qlearn"});
  SearchConfig cfg;
  cfg.d = env.cell_d;
  cfg.spacing = env.cell_spacing;
  cfg.start = StateFromJson(Require(j, path, "start"), path + ".start");
  Optional(j, path, "epsilon", cfg.epsilon, NumberAt);
  Optional(j, path, "cells", cfg.cells, IntegerAt);
  Optional(j, path, "d", cfg.d, IntegerAt);
  Optional(j, path, "spacing", cfg.spacing, IntegerAt);
  if (auto it = j.find("mode"); it != j.end()) {
    try {
      cfg.mode = ParseSolverMode(StringAt(*it, path + ".mode"));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kSchema) throw;
      SchemaError(path + ".mode", e.what());
    }
  }
  if (auto it = j.find("qlearn"); it != j.end()) {
    cfg.qlearn = QLearnConfigFromJson(*it, path + ".qlearn");
  }
  return cfg;
}

Json SearchReportToJson(const SearchReport& r) {
  return {{"enumerated", r.enumerated},
          {"prefiltered", r.prefiltered},
          {"prefix_pruned", r.prefix_pruned},
          {"geometry_skipped", r.geometry_skipped},
          {"deduplicated", r.deduplicated},
          {"solved", r.solved},
          {"passed", r.passed},
          {"upper_bound", r.upper_bound},
          {"depth", r.depth}};
}

Json ArrowsToJson(const Grid& grid, const Partition& part, const Policy& pi) {
  Json arrows = Json::array();
  for (StateId s : part.in) {
    arrows.push_back({{"state", StateToJson(grid.State(s))},
                      {"action", pi[s]},
                      {"name", ActionName(pi[s], grid.dims())}});
  }
  return arrows;
}

std::string OptionId(std::size_t index) { return "o" + std::to_string(index); }

Json OptionToJson(const Grid& grid, const PolicyOption& option, const std::string& id) {
  if (!option.solution) {
    throw Error(ErrorCode::kInvalidArgument, "option has no local solution");
  }
  const LocalSolution& sol = *option.solution;
  Json omega = Json::array();
  for (StateId s : option.partition.omega) omega.push_back(StateToJson(grid.State(s)));
  Json solver = {{"iterations", sol.stats.iterations}, {"residual", sol.stats.residual}};
  if (sol.learning) {
    solver["learning"] = {{"episodes", sol.learning->episodes},
                          {"steps", sol.learning->steps},
                          {"converged", sol.learning->converged},
                          {"last_window_change", sol.learning->last_window_change}};
  }
  Json out = {{"id", id},
              {"key", option.key()},
              {"corridor", CorridorToJson(option.corridor)},
              {"s_omega", omega},
              {"v_local_start", option.v_local_start},
              {"epsilon_ratio", option.epsilon_ratio},
              {"bound",
               {{"raw", option.bound.value.raw},
                {"clamped", option.bound.value.clamped},
                {"tau", option.bound.tau},
                {"max_r_in", option.bound.max_r_in},
                {"max_edge_value", option.bound.max_edge_value}}},
              {"policy", sol.pi.actions},
              {"v_local", sol.v.values},
              {"arrows", ArrowsToJson(grid, option.partition, sol.pi)},
              {"solver", solver}};
  if (option.empirical_success_rate) {
    out["empirical_success_rate"] = *option.empirical_success_rate;
  }
  return out;
}

Json OptionsDocument(const GridMdp& mdp, const SearchConfig& cfg,
                     const SearchResult& result) {
  Json rows = Json::array();
  std::istringstream in(mdp.ToMapText());
  for (std::string line; std::getline(in, line);) rows.push_back(line);
  Json options = Json::array();
  for (std::size_t i = 0; i < result.options.size(); ++i) {
    options.push_back(OptionToJson(mdp.grid(), result.options[i], OptionId(i)));
  }
  return {{"schema", kOptionsSchema},
          {"environment", {{"map", rows}, {"config", MdpConfigToJson(mdp.config())}}},
          {"search", SearchConfigToJson(cfg)},
          {"v_star_start", result.v_star_start},
          {"report", SearchReportToJson(result.report)},
          {"options", options}};
}

const PolicyOption& OptionsBundle::Find(const std::string& id) const {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == id) return options[i];
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown option id '" + id + "'");
}

namespace {

GridMdp EnvironmentFromJson(const Json& env, const std::string& path) {
  RequireObject(env, path);
  RejectUnknownKeys(env, path, {"map", "config"});
  const Json& rows = Require(env, path, "map");
  if (!rows.is_array()) SchemaError(path + ".map", "expected an array of rows");
  std::string text;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    text += StringAt(rows[i], path + ".map[" + std::to_string(i) + "]") + "\n";
  }
  MdpConfig cfg;
  try {
    cfg = MdpConfigFromJson(Require(env, path, "config"));
  } catch (const Error& e) {
    SchemaError(path + ".config", e.what());
  }
  return LoadGridMap(text, cfg);
}

}  // namespace

OptionsBundle ParseOptionsDocument(const Json& doc) {
  RequireObject(doc, "$");
  const std::string schema = StringAt(Require(doc, "$", "schema"), "$.schema");
  if (schema != kOptionsSchema) {
    SchemaError("$.schema", "expected " + std::string(kOptionsSchema) + ", got " + schema);
  }
  GridMdp mdp = EnvironmentFromJson(Require(doc, "$", "environment"), "$.environment");
  SearchConfig cfg = SearchConfigFromJson(Require(doc, "$", "search"), mdp.config(), "$.search");
  const double v0 = NumberAt(Require(doc, "$", "v_star_start"), "$.v_star_start");
  OptionsBundle bundle{std::move(mdp), std::move(cfg), v0, {}, {}};
  const Grid& grid = bundle.mdp.grid();
  const int n = grid.num_states();
  const int m = bundle.mdp.num_actions();

  const Json& options = Require(doc, "$", "options");
  if (!options.is_array()) SchemaError("$.options", "expected an array");
  for (std::size_t i = 0; i < options.size(); ++i) {
    const std::string p = "$.options[" + std::to_string(i) + "]";
    const Json& o = options[i];
    RequireObject(o, p);
    PolicyOption opt;
    opt.corridor = CorridorFromJson(grid, Require(o, p, "corridor"), p + ".corridor");
    if (!opt.corridor.edge) SchemaError(p + ".corridor.edge", "missing");
    opt.partition = PartitionStates(grid, opt.corridor);
    opt.v_local_start = NumberAt(Require(o, p, "v_local_start"), p + ".v_local_start");
    opt.epsilon_ratio = NumberAt(Require(o, p, "epsilon_ratio"), p + ".epsilon_ratio");
    const Json& b = Require(o, p, "bound");
    RequireObject(b, p + ".bound");
    opt.bound.value.raw = NumberAt(Require(b, p + ".bound", "raw"), p + ".bound.raw");
    opt.bound.value.clamped =
        NumberAt(Require(b, p + ".bound", "clamped"), p + ".bound.clamped");
    opt.bound.tau = static_cast<int>(IntegerAt(Require(b, p + ".bound", "tau"), p + ".bound.tau"));
    opt.bound.max_r_in =
        NumberAt(Require(b, p + ".bound", "max_r_in"), p + ".bound.max_r_in");
    opt.bound.max_edge_value =
        NumberAt(Require(b, p + ".bound", "max_edge_value"), p + ".bound.max_edge_value");

    auto sol = std::make_shared<LocalSolution>();
    const Json& policy = Require(o, p, "policy");
    const Json& values = Require(o, p, "v_local");
    if (!policy.is_array() || static_cast<int>(policy.size()) != n) {
      SchemaError(p + ".policy", "expected " + std::to_string(n) + " actions");
    }
    if (!values.is_array() || static_cast<int>(values.size()) != n) {
      SchemaError(p + ".v_local", "expected " + std::to_string(n) + " values");
    }
    for (int s = 0; s < n; ++s) {
      const std::string ap = p + ".policy[" + std::to_string(s) + "]";
      const auto a = IntegerAt(policy[s], ap);
      if (a < 0 || a >= m) SchemaError(ap, "action out of range");
      sol->pi.actions.push_back(static_cast<ActionId>(a));
      sol->v.values.push_back(NumberAt(values[s], p + ".v_local[" + std::to_string(s) + "]"));
    }
    opt.solution = std::move(sol);
    if (auto it = o.find("empirical_success_rate"); it != o.end()) {
      opt.empirical_success_rate = NumberAt(*it, p + ".empirical_success_rate");
    }
    const std::string id = o.contains("id") ? StringAt(o["id"], p + ".id") : OptionId(i);
    bundle.ids.push_back(id);
    bundle.options.push_back(std::move(opt));
  }
  return bundle;
}

Json TrajectoryToJson(const Grid& grid, const Trajectory& t) {
  Json states = Json::array(), delta = Json::array(), actions = Json::array();
  for (const AugmentedState& l : t.states) {
    states.push_back(StateToJson(grid.State(l.s)));
    delta.push_back(l.delta ? 1 : 0);
  }
  for (ActionId a : t.actions) actions.push_back(ActionName(a, grid.dims()));
  return {{"states", states},
          {"delta", delta},
          {"actions", actions},
          {"termination", TerminationName(t.reason)},
          {"success", t.success},
          {"switch_index", t.switch_index ? Json(*t.switch_index) : Json(nullptr)},
          {"discounted_return", t.discounted_return}};
}

Json SimReportToJson(const Grid& grid, const SimReport& r) {
  Json terminations = Json::object();
  for (int k = 0; k < kTerminationKinds; ++k) {
    terminations[TerminationName(static_cast<Termination>(k))] = r.terminations[k];
  }
  Json samples = Json::array();
  for (const Trajectory& t : r.samples) samples.push_back(TrajectoryToJson(grid, t));
  return {{"schema", kSimSchema},
          {"option_id", r.option_id},
          {"n", r.n},
          {"successes", r.successes},
          {"rate", r.rate},
          {"wilson95", {{"low", r.interval.low}, {"high", r.interval.high}}},
          {"bound", {{"raw", r.bound.raw}, {"clamped", r.bound.clamped}}},
          {"mean_return", r.mean_return},
          {"terminations", terminations},
          {"samples", samples}};
}

std::string ComparisonToCsv(const std::vector<ComparisonRow>& rows) {
  std::string out =
      "option_id,epsilon_ratio,n,successes,rate,wilson_low,wilson_high,"
      "bound_raw,bound_clamped,mean_return\n";
  for (const ComparisonRow& row : rows) {
    const SimReport& r = row.report;
    out += r.option_id + "," + FormatDouble(row.epsilon_ratio) + "," +
           std::to_string(r.n) + "," + std::to_string(r.successes) + "," +
           FormatDouble(r.rate) + "," + FormatDouble(r.interval.low) + "," +
           FormatDouble(r.interval.high) + "," + FormatDouble(r.bound.raw) + "," +
           FormatDouble(r.bound.clamped) + "," + FormatDouble(r.mean_return) + "\n";
  }
  return out;
}

std::vector<StateId> ActionDiff(const PolicyOption& a, const PolicyOption& b) {
  if (a.partition.num_states() != b.partition.num_states()) {
    throw Error(ErrorCode::kSizeMismatch, "options belong to different environments");
  }
  std::vector<StateId> out;
  for (StateId s : a.partition.in) {
    if (b.partition.IsIn(s) && a.solution->pi[s] != b.solution->pi[s]) out.push_back(s);
  }
  return out;
}

std::uint64_t StableHash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string HexDigest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

}  // namespace dna
