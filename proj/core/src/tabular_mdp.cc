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

#include "dna/tabular_mdp.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "dna/error.h"

namespace dna {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kOutOfBounds:
      return "OutOfBounds";
    case ErrorCode::kMapParse:
      return "MapParse";
    case ErrorCode::kNotConverged:
      return "NotConverged";
    case ErrorCode::kCapExhausted:
      return "CapExhausted";
    case ErrorCode::kOffGrid:
      return "OffGrid";
    case ErrorCode::kSizeMismatch:
      return "SizeMismatch";
    case ErrorCode::kZeroBenchmark:
      return "ZeroBenchmark";
    case ErrorCode::kUndefinedBound:
      return "UndefinedBound";
    case ErrorCode::kSchema:
      return "Schema";
    case ErrorCode::kIo:
      return "Io";
  }
  return "Unknown";
}

TabularMdp::Builder::Builder(int num_states, int num_actions, double gamma)
    : num_states_(num_states),
      num_actions_(num_actions),
      gamma_(gamma),
      rows_(static_cast<std::size_t>(num_states) * num_actions),
      rewards_(rows_.size(), 0.0),
      set_(rows_.size(), false) {
  if (num_states <= 0 || num_actions <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "MDP needs at least one state and one action");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "discount must lie in [0, 1), got " + std::to_string(gamma));
  }
}

TabularMdp::Builder& TabularMdp::Builder::Set(StateId s, ActionId a,
                                              TransitionRow row,
                                              double reward) {
  if (s < 0 || s >= num_states_ || a < 0 || a >= num_actions_) {
    throw Error(ErrorCode::kOutOfBounds, "state/action index out of range");
  }
  std::sort(row.begin(), row.end(),
            [](const Transition& x, const Transition& y) {
              return x.next < y.next;
            });
  TransitionRow merged;
  merged.reserve(row.size());
  for (const Transition& t : row) {
    if (t.next < 0 || t.next >= num_states_) {
      throw Error(ErrorCode::kOutOfBounds, "successor index out of range");
    }
    if (!(t.prob >= 0.0 && t.prob <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "transition probability outside [0, 1]");
    }
    if (t.prob == 0.0) continue;
    if (!merged.empty() && merged.back().next == t.next) {
      merged.back().prob += t.prob;
    } else {
      merged.push_back(t);
    }
  }
  const std::size_t i = static_cast<std::size_t>(s) * num_actions_ + a;
  rows_[i] = std::move(merged);
  rewards_[i] = reward;
  set_[i] = true;
  return *this;
}

TabularMdp TabularMdp::Builder::Build() {
  TabularMdp mdp;
  mdp.num_states_ = num_states_;
  mdp.num_actions_ = num_actions_;
  mdp.gamma_ = gamma_;
  mdp.offsets_.reserve(rows_.size() + 1);
  mdp.offsets_.push_back(0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (!set_[i]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "transition row for state " +
                      std::to_string(i / num_actions_) + " action " +
                      std::to_string(i % num_actions_) + " never set");
    }
    double sum = 0.0;
    for (const Transition& t : rows_[i]) sum += t.prob;
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw Error(ErrorCode::kInvalidArgument,
                  "transition row does not sum to one (sum=" +
                      std::to_string(sum) + ")");
    }
    if (!(rewards_[i] >= 0.0) || !std::isfinite(rewards_[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "rewards must be finite and nonnegative");
    }
    mdp.transitions_.insert(mdp.transitions_.end(), rows_[i].begin(),
                            rows_[i].end());
    mdp.offsets_.push_back(mdp.transitions_.size());
  }
  mdp.rewards_ = std::move(rewards_);
  return mdp;
}

bool TabularMdp::IsAbsorbing(StateId s) const {
  for (ActionId a = 0; a < num_actions_; ++a) {
    const auto r = row(s, a);
    if (r.size() != 1 || r[0].next != s) return false;
  }
  return true;
}

std::vector<bool> TabularMdp::Reachable(StateId from) const {
  std::vector<bool> seen(num_states_, false);
  std::deque<StateId> frontier{from};
  seen[from] = true;
  while (!frontier.empty()) {
    const StateId s = frontier.front();
    frontier.pop_front();
    for (ActionId a = 0; a < num_actions_; ++a) {
      for (const Transition& t : row(s, a)) {
        if (!seen[t.next]) {
          seen[t.next] = true;
          frontier.push_back(t.next);
        }
      }
    }
  }
  return seen;
}

TabularMdp TabularMdp::ScaledRewards(double factor) const {
  if (!(factor > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "scale factor must be positive");
  }
  TabularMdp copy = *this;
  for (double& r : copy.rewards_) r *= factor;
  return copy;
}

}  // namespace dna
