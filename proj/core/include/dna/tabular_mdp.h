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

#ifndef DNA_TABULAR_MDP_H_
#define DNA_TABULAR_MDP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dna {

using StateId = std::int32_t;
using ActionId = std::int32_t;

struct Transition {
  StateId next = 0;
  double prob = 0.0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

// Successor distribution of one (state, action) pair. Sorted by successor id,
// no duplicates, probabilities summing to one.
using TransitionRow = std::vector<Transition>;

// Dense-indexed finite MDP with sparse transition rows. Every solver in the
// library runs on this representation: the base grid, local problems and the
// augmented switching MDPs are all lowered to it.
class TabularMdp {
 public:
  class Builder {
   public:
    Builder(int num_states, int num_actions, double gamma);

    // Rows may be given unsorted or with repeated successors; they are merged.
    Builder& Set(StateId s, ActionId a, TransitionRow row, double reward);

    // Validates stochasticity, reward sign and completeness. Leaves the
    // builder empty.
    TabularMdp Build();

   private:
    int num_states_;
    int num_actions_;
    double gamma_;
    std::vector<TransitionRow> rows_;
    std::vector<double> rewards_;
    std::vector<bool> set_;
  };

  TabularMdp() = default;

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  double gamma() const { return gamma_; }

  std::span<const Transition> row(StateId s, ActionId a) const {
    const std::size_t i = index(s, a);
    return {transitions_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  double reward(StateId s, ActionId a) const { return rewards_[index(s, a)]; }

  // True when every action keeps the state in place with probability one.
  bool IsAbsorbing(StateId s) const;

  // States reachable from `from` with positive probability under some policy,
  // `from` included.
  std::vector<bool> Reachable(StateId from) const;

  // Copy with every reward multiplied by `factor` (> 0).
  TabularMdp ScaledRewards(double factor) const;

 private:
  std::size_t index(StateId s, ActionId a) const {
    return static_cast<std::size_t>(s) * num_actions_ + a;
  }

  int num_states_ = 0;
  int num_actions_ = 0;
  double gamma_ = 0.0;
  std::vector<std::size_t> offsets_;
  std::vector<Transition> transitions_;
  std::vector<double> rewards_;
};

// Tolerance used when checking that a row sums to one.
inline constexpr double kRowSumTolerance = 1e-12;

}  // namespace dna

#endif  // DNA_TABULAR_MDP_H_
