// Copyright 2026 The primalkit Authors
//
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

// Load balancing: route every task's workload to as few machines as possible
// so that losing any single machine still leaves the full demand covered.
// With tasks i, machines j and accessible sets N^i:
//
//   min  sum_j y_j
//   s.t. x_ij <= a_i y_j                            (link_i_j)
//        sum_{i: j in N^i} x_ij <= b_j              (cap_j)
//        sum_{j in N^i, j != j'} x_ij >= a_i        (robust_i_j')
//        y binary, 0 <= x_ij <= b_j
//
// The tightened variant replaces cap_j by sum_i x_ij <= b_j y_j and drops the
// link rows, which it dominates whenever every a_i < b_j.

#ifndef PRIMALKIT_HEURISTICS_LOAD_BALANCING_H_
#define PRIMALKIT_HEURISTICS_LOAD_BALANCING_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "primalkit/core/budget.h"
#include "primalkit/core/config.h"
#include "primalkit/core/milp.h"
#include "primalkit/core/trajectory.h"
#include "primalkit/lp/simplex.h"
#include "primalkit/mip/branch_and_bound.h"

namespace primalkit {

// The defaults give capacity-bound instances: each machine can host only a
// few tasks, so the number of open machines is driven by total demand rather
// than by the two-machine robustness requirement.
struct LoadBalancingProfile {
  int n_tasks = 30;
  int n_machines = 20;
  // Size range of each accessible set (clamped to n_machines).
  int min_access = 6;
  int max_access = 12;
  double demand_min = 1.0;
  double demand_max = 10.0;
  // Must exceed demand_max so that a_i < b_j always holds.
  double capacity_min = 12.0;
  double capacity_max = 20.0;

  static LoadBalancingProfile FromConfig(const Config& config);
};

struct LoadBalancingInstance {
  int n_tasks = 0;
  int n_machines = 0;
  std::vector<std::vector<int>> access;  // [task], sorted machine indices
  std::vector<double> a;                 // [task] demand
  std::vector<double> b;                 // [machine] capacity

  // Throws StructuralError unless every access set has at least two distinct
  // valid machines and a, b are positive.
  void Validate() const;
};

// Variable layout shared by both model variants: x_ij for every task and
// accessible machine (task-major, in access order), then y_j.
struct LoadBalancingLayout {
  std::vector<int> x_offset;  // [task], index of x for access[task][0]
  int y_offset = 0;

  explicit LoadBalancingLayout(const LoadBalancingInstance& inst);
  int X(int task, int slot) const { return x_offset[task] + slot; }
  int Y(int machine) const { return y_offset + machine; }
};

// Deterministic per seed. Capacities are raised where needed so that opening
// every machine is feasible. Throws std::invalid_argument for an inconsistent
// profile (fewer than two machines, empty ranges, demand_max >= capacity_min).
LoadBalancingInstance GenerateLoadBalancing(uint64_t seed,
                                            const LoadBalancingProfile& profile = {});

MilpInstance ToMilp(const LoadBalancingInstance& inst, bool tightened);

// Recovers the instance from either model variant written by ToMilp (matched
// by names). Returns nullopt for any other MILP.
std::optional<LoadBalancingInstance> LoadBalancingFromMilp(const MilpInstance& milp);

// Sets y_j = 1 wherever the LP opens machine j (y_j > tol_int or some flow
// into j is positive) and 0 elsewhere, and clips x_ij to a_i. Accepts the LP
// of either variant; the result is certified against the original model.
// Throws std::invalid_argument unless the LP is optimal.
Solution RoundUpAll(const LoadBalancingInstance& inst, const LpSolution& lp,
                    double tol_int = kIntegralityTolerance);

// Rounds up exactly the k largest fractional y (ties: lower index first),
// where k = target minus the number of y already at one, rounds the other
// fractional y down and re-solves x by an LP over the open machines. The
// result is returned unchecked; nullopt when k is negative or exceeds the
// number of fractional values.
std::optional<Solution> QuantileRound(const LoadBalancingInstance& inst,
                                      const LpSolution& lp, int target,
                                      double tol_int = kIntegralityTolerance);

// Flows for a fixed set of open machines: an LP over x with y fixed. Returns
// the full variable vector, or nullopt when the machines cannot carry the
// demand robustly.
std::optional<std::vector<double>> FlowsForOpenMachines(const LoadBalancingInstance& inst,
                                                        const std::vector<bool>& open,
                                                        const Budget& budget = Budget::Unlimited());

struct RoundingConfig {
  double rho = 1.05;
  double gap_threshold = 0.01;
  int max_rounds = 30;

  // Throws std::invalid_argument unless rho >= 1 and gap_threshold > 0.
  void Validate() const;
  static RoundingConfig FromConfig(const Config& config);
};

// Next bisection target: round((primal + dual) / 2) clamped to
// [lowest, primal - 1] and kept above `failed`, the largest target that did
// not round. nullopt when that range is empty.
std::optional<int> NextRoundingTarget(double primal, double dual, int failed, int lowest);

struct RoundingStep {
  int target = 0;
  bool feasible = false;
  double primal = 0.0;  // bounds after the step
  double dual = 0.0;
};

struct AdaptiveRoundingResult {
  Solution best;
  double primal_bound = kInfinity;
  double dual_bound = -kInfinity;
  // Root LP objectives of the original and tightened models.
  double original_lp = 0.0;
  double tightened_lp = 0.0;
  // Objective of RoundUpAll on the original LP.
  double round_up_objective = 0.0;
  std::vector<RoundingStep> steps;
  PrimalTrajectory trajectory;
  bool hit_max_rounds = false;
};

// Bisection on the objective. The primal bound starts at the RoundUpAll
// objective and the dual bound at rho times the best root LP bound. Each
// round targets round((primal + dual) / 2), kept strictly below the primal
// bound, above every failed target and no lower than the unamplified LP
// bound; QuantileRound is tried on the original and then the tightened LP
// solution. A certified rounding lowers the primal bound to the target, a
// failed one raises the dual bound to it. Stops when
// (primal - dual) / max(1, primal) < gap_threshold, no target is left, or
// after max_rounds. Throws std::runtime_error when a root LP is not optimal.
AdaptiveRoundingResult AdaptiveRounding(
    const LoadBalancingInstance& inst, const RoundingConfig& config = {},
    const Budget& budget = Budget::Unlimited(),
    const std::function<void(const Solution&)>& on_incumbent = {});

struct RinsResult {
  Solution solution;
  bool improved = false;
  int fixed = 0;  // y variables fixed by agreement
  std::optional<BnbStatus> status;
};

// Solves the tightened LP, fixes every y_j on which it agrees with the
// incumbent within tol_int, and solves the remaining sub-MIP of the tightened
// model from the incumbent. The better of incumbent and sub-MIP result is
// returned, certified on the original model. Throws std::invalid_argument for
// an infeasible incumbent.
RinsResult RinsImprove(const LoadBalancingInstance& inst, const Solution& incumbent,
                       const Budget& budget = Budget::Unlimited(),
                       int64_t node_limit = 1000);

}  // namespace primalkit

#endif  // PRIMALKIT_HEURISTICS_LOAD_BALANCING_H_
