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

#include "support/fixtures.h"

#include <filesystem>

namespace dna::testing {

std::string DataPath(const std::string& name) {
  return (std::filesystem::path(DNA_DATA_DIR) / name).string();
}

std::string GoldenPath(const std::string& name) {
  return (std::filesystem::path(DNA_GOLDEN_DIR) / name).string();
}

GridMdp LoadData(const std::string& stem) {
  const MdpConfig cfg = MdpConfigFromJson(ReadJsonFile(DataPath(stem + ".json")));
  return LoadGridMap(ReadTextFile(DataPath(stem + ".txt")), cfg);
}

MdpConfig DeterministicConfig(int d, int spacing) {
  MdpConfig cfg;
  cfg.slip_intended = 1.0;
  cfg.slip_lateral = 0.0;
  cfg.cell_d = d;
  cfg.cell_spacing = spacing;
  return cfg;
}

}  // namespace dna::testing
