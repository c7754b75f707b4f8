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

#include "dna/rollout_sim.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "dna/error.h"
#include "dna/parallel.h"

namespace dna {

WilsonInterval Wilson(std::int64_t successes, std::int64_t n, double z) {
  if (n <= 0 || successes < 0 || successes > n) {
    throw Error(ErrorCode::kInvalidArgument, "Wilson interval needs 0 <= k <= n, n >= 1");
  }
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  // Clamp rounding so the interval always contains the rate.
  return {std::min(p, std::max(0.0, center - half)),
          std::max(p, std::min(1.0, center + half))};
}

SimReport SimulateOption(const TabularMdp& mdp, const PolicyOption& option,
                         const Policy& pi_star, StateId start,
                         const SimOptions& opts, std::string option_id) {
  if (opts.n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  if (opts.samples < 0 || opts.samples > kMaxSampleTrajectories) {
    throw Error(ErrorCode::kInvalidArgument,
                "samples must lie in [0, " + std::to_string(kMaxSampleTrajectories) + "]");
  }
  if (!option.solution) {
    throw Error(ErrorCode::kInvalidArgument, "option has no local solution");
  }
  const Policy& pi_local = option.solution->pi;
  RolloutOptions ropts;
  ropts.step_cap = opts.step_cap > 0 ? opts.step_cap : 10 * mdp.num_states();
  // Follow the benchmark policy to the cap so returns cover the whole run.
  ropts.tail_steps = ropts.step_cap;

  const auto n = static_cast<std::size_t>(opts.n);
  std::vector<unsigned char> success(n);
  std::vector<unsigned char> reason(n);
  std::vector<double> returns(n);
  std::vector<Trajectory> samples(std::min<std::size_t>(n, opts.samples));
  ParallelFor(n, opts.threads, [&](std::size_t i) {
    Trajectory t = Rollout(mdp, option.partition, pi_local, pi_star, start,
                           opts.seed, i, ropts);
    success[i] = t.success;
    reason[i] = static_cast<unsigned char>(t.reason);
    returns[i] = t.discounted_return;
    if (i < samples.size()) samples[i] = std::move(t);
  });

  SimReport report;
  report.option_id = std::move(option_id);
  report.n = opts.n;
  for (std::size_t i = 0; i < n; ++i) {
    report.successes += success[i];
    ++report.terminations[reason[i]];
  }
  report.rate = static_cast<double>(report.successes) / static_cast<double>(n);
  report.interval = Wilson(report.successes, opts.n);
  report.bound = option.bound.value;
  report.mean_return = std::accumulate(returns.begin(), returns.end(), 0.0) /
                       static_cast<double>(n);
  report.samples = std::move(samples);
  return report;
}

std::vector<ComparisonRow> CompareOptions(const TabularMdp& mdp,
                                          const std::vector<PolicyOption>& options,
                                          const Policy& pi_star, StateId start,
                                          const SimOptions& opts,
                                          const std::vector<std::string>& ids) {
  if (options.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one option");
  }
  if (!ids.empty() && ids.size() != options.size()) {
    throw Error(ErrorCode::kSizeMismatch, "one id per option required");
  }
  std::vector<ComparisonRow> rows;
  rows.reserve(options.size());
  for (std::size_t i = 0; i < options.size(); ++i) {
    const std::string id = ids.empty() ? options[i].key() : ids[i];
    rows.push_back({SimulateOption(mdp, options[i], pi_star, start, opts, id),
                    options[i].epsilon_ratio});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ComparisonRow& a, const ComparisonRow& b) {
                     return a.epsilon_ratio > b.epsilon_ratio;
                   });
  return rows;
}

double ExactSuccessProbability(const TabularMdp& mdp, const Partition& part,
                               const Policy& pi_local, StateId start) {
  const int n = mdp.num_states();
  if (part.num_states() != n || pi_local.size() != n) {
    throw Error(ErrorCode::kSizeMismatch, "partition/policy size mismatch");
  }
  if (!part.IsIn(start)) return part.IsOmega(start) ? 1.0 : 0.0;

  // Interior states with a positive-probability path to the edge.
  std::vector<std::vector<StateId>> preds(n);
  std::vector<bool> live(n, false);
  std::deque<StateId> queue;
  for (StateId s : part.in) {
    for (const Transition& t : mdp.row(s, pi_local[s])) {
      if (part.IsIn(t.next)) {
        preds[t.next].push_back(s);
      } else if (part.IsOmega(t.next) && !live[s]) {
        live[s] = true;
        queue.push_back(s);
      }
    }
  }
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    for (StateId p : preds[s]) {
      if (!live[p]) {
        live[p] = true;
        queue.push_back(p);
      }
    }
  }
  if (!live[start]) return 0.0;

  std::vector<int> index(n, -1);
  int m = 0;
  for (StateId s : part.in) {
    if (live[s]) index[s] = m++;
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  for (StateId s : part.in) {
    if (index[s] < 0) continue;
    for (const Transition& t : mdp.row(s, pi_local[s])) {
      if (index[t.next] >= 0) {
        a(index[s], index[t.next]) -= t.prob;
      } else if (part.IsOmega(t.next)) {
        b(index[s]) += t.prob;
      }
    }
  }
  const Eigen::VectorXd p = a.partialPivLu().solve(b);
  return std::clamp(p(index[start]), 0.0, 1.0);
}

}  // namespace dna
