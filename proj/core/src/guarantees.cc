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

#include "dna/guarantees.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dna/error.h"
#include "dna/local_problem.h"

namespace dna {

const char* AugmentedVariantName(AugmentedVariant v) {
  switch (v) {
    case AugmentedVariant::kSwitching:
      return "switching";
    case AugmentedVariant::kAbsorbingSuffix:
      return "absorbing_suffix";
    case AugmentedVariant::kZeroedSuffix:
      return "zeroed_suffix";
  }
  return "unknown";
}

namespace {

// Rounding in the LU solve can leave -1e-17 where the value is zero.
double SuffixReward(double gamma, double value) {
  if (value < 0.0) {
    if (value < -1e-9) {
      throw Error(ErrorCode::kInvalidArgument,
                  "switching values must be nonnegative");
    }
    value = 0.0;
  }
  return (1.0 - gamma) * value;
}

}  // namespace

AugmentedMdp BuildAugmented(AugmentedVariant variant, const TabularMdp& base,
                            const std::vector<bool>& switch_set,
                            const std::vector<bool>& omega,
                            const ValueTable* v_switching) {
  const int n = base.num_states();
  const int m = base.num_actions();
  if (static_cast<int>(switch_set.size()) != n ||
      static_cast<int>(omega.size()) != n) {
    throw Error(ErrorCode::kSizeMismatch, "switch/omega sets must cover S");
  }
  for (StateId s = 0; s < n; ++s) {
    if (omega[s] && !switch_set[s]) {
      throw Error(ErrorCode::kInvalidArgument, "S_omega must lie inside S_delta");
    }
  }
  const bool suffix = variant != AugmentedVariant::kSwitching;
  if (suffix && (v_switching == nullptr || v_switching->size() != 2 * n)) {
    throw Error(ErrorCode::kInvalidArgument,
                "suffix variants need the switching value table over 2|S|");
  }
  const double gamma = base.gamma();
  AugmentedMdp aug;
  aug.variant = variant;
  aug.base_states = n;
  aug.switch_set = switch_set;
  aug.omega = omega;
  TabularMdp::Builder builder(2 * n, m, gamma);
  for (int delta = 0; delta <= 1; ++delta) {
    for (StateId s = 0; s < n; ++s) {
      const StateId lambda = AugmentedMdp::Index(s, delta, n);
      for (ActionId a = 0; a < m; ++a) {
        if (suffix && delta == 1) {
          double r = 0.0;
          if (variant == AugmentedVariant::kAbsorbingSuffix || omega[s]) {
            r = SuffixReward(gamma, (*v_switching)[lambda]);
          }
          builder.Set(lambda, a, {{lambda, 1.0}}, r);
          continue;
        }
        TransitionRow row;
        for (const Transition& t : base.row(s, a)) {
          const bool next_delta = delta == 1 || switch_set[t.next];
          row.push_back({AugmentedMdp::Index(t.next, next_delta, n), t.prob});
        }
        builder.Set(lambda, a, std::move(row), base.reward(s, a));
      }
    }
  }
  aug.mdp = std::move(builder).Build();
  return aug;
}

AugmentedMdp BuildAugmented(AugmentedVariant variant, const TabularMdp& base,
                            const Partition& part,
                            const ValueTable* v_switching) {
  const int n = base.num_states();
  if (part.num_states() != n) {
    throw Error(ErrorCode::kSizeMismatch, "partition size mismatch");
  }
  std::vector<bool> switch_set(n), omega(n);
  for (StateId s = 0; s < n; ++s) {
    switch_set[s] = !part.IsIn(s);
    omega[s] = part.IsOmega(s);
  }
  return BuildAugmented(variant, base, switch_set, omega, v_switching);
}

Policy LiftPolicy(const AugmentedPolicy& pi, int base_states) {
  if (pi.before.size() != base_states || pi.after.size() != base_states) {
    throw Error(ErrorCode::kSizeMismatch, "augmented policy size mismatch");
  }
  Policy lifted;
  lifted.actions = pi.before.actions;
  lifted.actions.insert(lifted.actions.end(), pi.after.actions.begin(),
                        pi.after.actions.end());
  return lifted;
}

ValueTable EvaluateAugmented(const AugmentedMdp& aug, const AugmentedPolicy& pi) {
  return EvaluatePolicyExact(aug.mdp, LiftPolicy(pi, aug.base_states));
}

namespace {

CheckReport Finish(CheckReport report) {
  report.pass = report.max_gap <= report.tolerance;
  return report;
}

}  // namespace

CheckReport CheckAugmentedMatchesBase(const TabularMdp& base,
                                      const Partition& part, const Policy& pi) {
  const int n = base.num_states();
  const ValueTable v = EvaluatePolicyExact(base, pi);
  const AugmentedMdp aug = BuildAugmented(AugmentedVariant::kSwitching, base, part);
  const ValueTable v_lambda = EvaluateAugmented(aug, AugmentedPolicy::Stationary(pi));
  CheckReport report;
  report.tolerance = kChainEqualityTolerance;
  for (StateId s = 0; s < n; ++s) {
    const double gap = std::abs(v[s] - v_lambda[aug.Index(s, false)]);
    if (report.worst_state < 0 || gap > report.max_gap) {
      report.max_gap = gap;
      report.worst_state = s;
    }
  }
  return Finish(report);
}

CheckReport CheckAbsorbingSuffixMatchesSwitching(const TabularMdp& base,
                                                 const Partition& part,
                                                 const AugmentedPolicy& pi) {
  const int n = base.num_states();
  const AugmentedMdp switching =
      BuildAugmented(AugmentedVariant::kSwitching, base, part);
  const ValueTable v_lambda = EvaluateAugmented(switching, pi);
  const AugmentedMdp absorbing =
      BuildAugmented(AugmentedVariant::kAbsorbingSuffix, base, part, &v_lambda);
  const ValueTable v_tilde = EvaluateAugmented(absorbing, pi);
  CheckReport report;
  report.tolerance = kChainEqualityTolerance;
  for (StateId s = 0; s < n; ++s) {
    const StateId lambda = switching.Index(s, false);
    const double gap = std::abs(v_lambda[lambda] - v_tilde[lambda]);
    if (report.worst_state < 0 || gap > report.max_gap) {
      report.max_gap = gap;
      report.worst_state = s;
    }
  }
  return Finish(report);
}

CheckReport CheckZeroedSuffixBelowAbsorbing(const TabularMdp& base,
                                            const Partition& part,
                                            const AugmentedPolicy& pi) {
  const AugmentedMdp switching =
      BuildAugmented(AugmentedVariant::kSwitching, base, part);
  const ValueTable v_lambda = EvaluateAugmented(switching, pi);
  const AugmentedMdp absorbing =
      BuildAugmented(AugmentedVariant::kAbsorbingSuffix, base, part, &v_lambda);
  const AugmentedMdp zeroed =
      BuildAugmented(AugmentedVariant::kZeroedSuffix, base, part, &v_lambda);
  const ValueTable v_tilde = EvaluateAugmented(absorbing, pi);
  const ValueTable v_zero = EvaluateAugmented(zeroed, pi);
  CheckReport report;
  report.tolerance = kChainOrderTolerance;
  report.max_gap = -std::numeric_limits<double>::infinity();
  for (StateId lambda = 0; lambda < v_tilde.size(); ++lambda) {
    const double gap = v_zero[lambda] - v_tilde[lambda];
    if (gap > report.max_gap) {
      report.max_gap = gap;
      report.worst_state = lambda;
    }
  }
  return Finish(report);
}

LocalBoundReport VerifyLocalValueBound(const TabularMdp& base,
                                       const Partition& part,
                                       const Policy& pi_local,
                                       const Policy& pi_star) {
  const int n = base.num_states();
  const ValueTable v_star = EvaluatePolicyExact(base, pi_star);
  const LocalMdp local = BuildLocalMdp(base, part, v_star);
  const ValueTable v_local = EvaluatePolicyExact(local.mdp, pi_local);
  const AugmentedMdp switching =
      BuildAugmented(AugmentedVariant::kSwitching, base, part);
  const ValueTable v_hat = EvaluateAugmented(switching, {pi_local, pi_star});

  LocalBoundReport report;
  report.local_value = v_local.values;
  report.switched_value.resize(n);
  for (StateId s = 0; s < n; ++s) {
    report.switched_value[s] = v_hat[switching.Index(s, false)];
  }
  report.check.tolerance = kLocalBoundTolerance;
  report.check.max_gap = -std::numeric_limits<double>::infinity();
  for (StateId s : part.in) {
    const double gap = v_local[s] - report.switched_value[s];
    if (gap > report.check.max_gap) {
      report.check.max_gap = gap;
      report.check.worst_state = s;
    }
  }
  if (part.in.empty()) report.check.max_gap = 0.0;
  report.check = Finish(report.check);
  return report;
}

SuccessBound SuccessProbabilityBound(const BoundInputs& in) {
  if (!(in.max_edge_value > 0.0)) {
    throw Error(ErrorCode::kUndefinedBound,
                "terminal edge has no positive benchmark value");
  }
  if (!(in.gamma > 0.0 && in.gamma < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bound needs gamma in (0, 1)");
  }
  if (in.tau < 0) {
    throw Error(ErrorCode::kInvalidArgument, "tau must be nonnegative");
  }
  const double numerator = in.v_local - in.max_r_in / (1.0 - in.gamma);
  const double raw =
      numerator / (std::pow(in.gamma, in.tau) * in.max_edge_value);
  return {raw, std::clamp(raw, 0.0, 1.0)};
}

double MaxInteriorReward(const TabularMdp& mdp, const Partition& part,
                         const Policy& pi) {
  double best = 0.0;
  for (StateId s : part.in) best = std::max(best, mdp.reward(s, pi[s]));
  return best;
}

int ManhattanTau(const Grid& grid, const GridState& s, const TerminalEdge& edge) {
  if (edge.members.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "terminal edge is empty");
  }
  int best = std::numeric_limits<int>::max();
  for (StateId e : edge.members) {
    best = std::min(best, ManhattanDistance(s, grid.State(e)));
  }
  return best;
}

bool EpsilonCheck(double v_local, double v_star, double eps) {
  if (!(v_star > 0.0)) {
    throw Error(ErrorCode::kZeroBenchmark,
                "benchmark value must be positive for a ratio test");
  }
  return v_local / v_star >= eps;
}

}  // namespace dna
