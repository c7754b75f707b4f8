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

#ifndef DNA_RNG_H_
#define DNA_RNG_H_

#include <cstdint>
#include <random>
#include <span>

#include "dna/tabular_mdp.h"

namespace dna {

// Independent stream for item `index` of a batch seeded with `base_seed`.
inline std::mt19937_64 StreamRng(std::uint64_t base_seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(base_seed),
                    static_cast<std::uint32_t>(base_seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// Uniform in [0, 1) from the top 53 bits; identical across standard libraries.
inline double UnitDouble(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline StateId SampleSuccessor(std::span<const Transition> row, double u) {
  for (const Transition& t : row) {
    if (u < t.prob) return t.next;
    u -= t.prob;
  }
  return row.back().next;
}

}  // namespace dna

#endif  // DNA_RNG_H_
