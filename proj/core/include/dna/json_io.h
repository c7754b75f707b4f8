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

#ifndef DNA_JSON_IO_H_
#define DNA_JSON_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dna/corridor.h"
#include "dna/grid_mdp.h"
#include "dna/rollout_sim.h"
#include "dna/search.h"
#include "dna/value_solver.h"

namespace dna {

using Json = nlohmann::json;

inline constexpr std::string_view kOptionsSchema = "dna.options/v1";
inline constexpr std::string_view kValuesSchema = "dna.values/v1";
inline constexpr std::string_view kQTableSchema = "dna.qtable/v1";
inline constexpr std::string_view kSimSchema = "dna.simulation/v1";

// Sorted keys, two-space indent, trailing newline. Equal documents give equal
// bytes.
std::string CanonicalDump(const Json& doc);

std::string ReadTextFile(const std::filesystem::path& path);
Json ReadJsonFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// Missing keys keep their defaults; unknown keys and wrong types raise
// kSchema naming the offending JSON path.
MdpConfig MdpConfigFromJson(const Json& j);
Json MdpConfigToJson(const MdpConfig& cfg);

Json StateToJson(const GridState& s);
GridState StateFromJson(const Json& j, const std::string& path);
// "y,x" as used on the command line.
GridState ParseStateText(std::string_view text);

Json CorridorToJson(const Corridor& corridor);
Corridor CorridorFromJson(const Grid& grid, const Json& j,
                          const std::string& path = "$");

// {"y,x": value} keyed tables.
Json ValuesToJson(const Grid& grid, const ValueTable& v, double gamma);
Json QTableToJson(const Grid& grid, const QTable& q);
ValueTable ValuesFromJson(const Grid& grid, const Json& j);

// Golden format: header line, then one row per state id in order, every
// number printed with 17 significant digits.
std::string ValuesToCsv(const Grid& grid, const ValueTable& v);
std::string QTableToCsv(const Grid& grid, const QTable& q);
ValueTable ValuesFromCsv(std::string_view text);

Json SearchConfigToJson(const SearchConfig& cfg);
// d and spacing default to the environment's cell settings.
SearchConfig SearchConfigFromJson(const Json& j, const MdpConfig& env,
                                  const std::string& path = "$");
Json SearchReportToJson(const SearchReport& report);

// Policy arrows over the corridor interior.
Json ArrowsToJson(const Grid& grid, const Partition& part, const Policy& pi);
Json OptionToJson(const Grid& grid, const PolicyOption& option,
                  const std::string& id);

// Option ids inside a document are "o<index>" in list order.
std::string OptionId(std::size_t index);

// Self-contained search output: environment, config, report and options.
Json OptionsDocument(const GridMdp& mdp, const SearchConfig& cfg,
                     const SearchResult& result);

struct OptionsBundle {
  GridMdp mdp;
  SearchConfig config;
  double v_star_start = 0.0;
  std::vector<std::string> ids;
  std::vector<PolicyOption> options;

  // Throws kInvalidArgument for an unknown id.
  const PolicyOption& Find(const std::string& id) const;
};

OptionsBundle ParseOptionsDocument(const Json& doc);

Json TrajectoryToJson(const Grid& grid, const Trajectory& t);
Json SimReportToJson(const Grid& grid, const SimReport& report);
std::string ComparisonToCsv(const std::vector<ComparisonRow>& rows);

// States interior to both corridors whose local actions differ, in id order.
std::vector<StateId> ActionDiff(const PolicyOption& a, const PolicyOption& b);

// 64-bit FNV-1a, stable across platforms; used for manifest hashes.
std::uint64_t StableHash(std::string_view bytes);
std::string HexDigest(std::uint64_t h);

}  // namespace dna

#endif  // DNA_JSON_IO_H_
