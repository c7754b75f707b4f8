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

#ifndef DNA_GUARANTEES_H_
#define DNA_GUARANTEES_H_

#include <optional>
#include <vector>

#include "dna/alt_policy.h"
#include "dna/corridor.h"
#include "dna/tabular_mdp.h"
#include "dna/value_solver.h"

namespace dna {

// The three switching MDPs over augmented states lambda = (s, delta) used to
// certify the local-value lower bound. Augmented id = s + delta * |S|.
enum class AugmentedVariant {
  kSwitching,        // base dynamics and rewards, delta tracks S_delta visits
  kAbsorbingSuffix,  // delta = 1 absorbing with reward (1 - gamma) V_lambda
  kZeroedSuffix,     // as above but zero reward off S_omega
};

const char* AugmentedVariantName(AugmentedVariant v);

// Action for delta = 0 and for delta = 1.
struct AugmentedPolicy {
  Policy before;
  Policy after;

  static AugmentedPolicy Stationary(const Policy& pi) { return {pi, pi}; }
};

struct AugmentedMdp {
  AugmentedVariant variant = AugmentedVariant::kSwitching;
  int base_states = 0;
  std::vector<bool> switch_set;  // S_delta
  std::vector<bool> omega;       // S_omega, subset of S_delta
  TabularMdp mdp;

  static StateId Index(StateId s, bool delta, int base_states) {
    return s + (delta ? base_states : 0);
  }
  StateId Index(StateId s, bool delta) const {
    return Index(s, delta, base_states);
  }
};

// `v_switching` (values of kSwitching under the policy, 2|S| entries) is
// required for the two suffix variants and ignored otherwise.
AugmentedMdp BuildAugmented(AugmentedVariant variant, const TabularMdp& base,
                            const std::vector<bool>& switch_set,
                            const std::vector<bool>& omega,
                            const ValueTable* v_switching = nullptr);

// S_delta = S \ S_in, S_omega = the terminal edge.
AugmentedMdp BuildAugmented(AugmentedVariant variant, const TabularMdp& base,
                            const Partition& part,
                            const ValueTable* v_switching = nullptr);

Policy LiftPolicy(const AugmentedPolicy& pi, int base_states);

// Exact value of `pi` on an augmented MDP.
ValueTable EvaluateAugmented(const AugmentedMdp& aug, const AugmentedPolicy& pi);

struct CheckReport {
  double max_gap = 0.0;  // largest violation of the checked relation
  StateId worst_state = -1;
  double tolerance = 0.0;
  bool pass = false;
};

inline constexpr double kChainEqualityTolerance = 1e-9;
inline constexpr double kChainOrderTolerance = 1e-12;
inline constexpr double kLocalBoundTolerance = 1e-9;

// |V^pi(s) - V_lambda^pi((s,0))| over every s, pi stationary on S.
CheckReport CheckAugmentedMatchesBase(const TabularMdp& base,
                                      const Partition& part, const Policy& pi);

// |V_lambda^pi((s,0)) - V~_lambda^pi((s,0))| over every s.
CheckReport CheckAbsorbingSuffixMatchesSwitching(const TabularMdp& base,
                                                 const Partition& part,
                                                 const AugmentedPolicy& pi);

// max(V~_R0^pi((s,d)) - V~_lambda^pi((s,d))) over every augmented state.
CheckReport CheckZeroedSuffixBelowAbsorbing(const TabularMdp& base,
                                            const Partition& part,
                                            const AugmentedPolicy& pi);

struct LocalBoundReport {
  CheckReport check;                 // max over S_in of V_L - V^pi_hat
  std::vector<double> local_value;   // V_L^{pi_local}, per state
  std::vector<double> switched_value;  // V^{pi_hat}((s,0)), per state
};

// Evaluates the local value of `pi_local` on the shaped problem built from
// V^{pi_star} and the value of the switching policy (pi_local, pi_star) on the
// switching MDP, and checks V_L(s) <= V^pi_hat((s,0)) + tol on S_in.
LocalBoundReport VerifyLocalValueBound(const TabularMdp& base,
                                       const Partition& part,
                                       const Policy& pi_local,
                                       const Policy& pi_star);

struct BoundInputs {
  double v_local = 0.0;
  double max_r_in = 0.0;
  double gamma = 0.0;
  int tau = 0;
  double max_edge_value = 0.0;
};

struct SuccessBound {
  double raw = 0.0;
  double clamped = 0.0;
};

// (V_L(s_t) - max r_in / (1 - gamma)) / (gamma^tau max_{S_omega} V*). Throws
// kUndefinedBound when the edge value is not positive.
SuccessBound SuccessProbabilityBound(const BoundInputs& in);

// max over S_in of R(s, pi(s)); zero when the interior is empty.
double MaxInteriorReward(const TabularMdp& mdp, const Partition& part,
                         const Policy& pi);

// Smallest Manhattan distance from s to the edge members.
int ManhattanTau(const Grid& grid, const GridState& s, const TerminalEdge& edge);

// v_local / v_star >= eps. Throws kZeroBenchmark when v_star <= 0.
bool EpsilonCheck(double v_local, double v_star, double eps);

}  // namespace dna

#endif  // DNA_GUARANTEES_H_
