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

#ifndef DNA_TESTS_SUPPORT_FIXTURES_H_
#define DNA_TESTS_SUPPORT_FIXTURES_H_

#include <string>

#include "dna/grid_mdp.h"
#include "dna/json_io.h"

namespace dna::testing {

std::string DataPath(const std::string& name);
std::string GoldenPath(const std::string& name);

// Map and config from the data directory, e.g. LoadData("lake10").
GridMdp LoadData(const std::string& stem);

// Deterministic (no-slip) config with the given cell geometry.
MdpConfig DeterministicConfig(int d = 1, int spacing = 1);

}  // namespace dna::testing

#endif  // DNA_TESTS_SUPPORT_FIXTURES_H_
