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

// Heuristics for models whose discrete variables are indexed by time. Periods
// are inferred from the co-occurrence graph of discrete variables, then used
// by a rolling-horizon decomposition and by RENS. A capacitated lot-sizing
// generator with known periods provides test instances.

#ifndef PRIMALKIT_HEURISTICS_TEMPORAL_H_
#define PRIMALKIT_HEURISTICS_TEMPORAL_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "primalkit/core/budget.h"
#include "primalkit/core/config.h"
#include "primalkit/core/milp.h"
#include "primalkit/core/trajectory.h"
#include "primalkit/mip/branch_and_bound.h"
#include "primalkit/mip/submip.h"

namespace primalkit {

struct PeriodLabeling {
  // [variable] period of each discrete variable; -1 for continuous and
  // unlabeled variables.
  std::vector<int> period_of;
  int horizon = 1;
  // Discrete variables not reachable from the seed set, in index order.
  std::vector<int> unlabeled;

  // Period used by the decomposition: unlabeled discrete variables count as
  // the last period, continuous variables as -1.
  int EffectivePeriod(const MilpInstance& inst, int var) const;
};

// Labels discrete variables by breadth-first layer in the graph joining two
// discrete variables whenever they share a constraint. Seeds get period 0.
// Without explicit seeds, the discrete variables of the lowest-index
// constraint that has any are used. Throws StructuralError when the instance
// has no discrete variables or a seed is not a discrete variable.
PeriodLabeling InferPeriods(const MilpInstance& inst,
                            const std::optional<std::vector<int>>& seeds = std::nullopt);

// Single-item lot sizing per facility. For facility f and period t:
//
//   min  sum K_ft y_ft + c_ft p_ft + h_f s_ft
//   s.t. s_f,t-1 + p_ft - s_ft = d_ft                    (bal_f_t)
//        p_ft <= min(C_f, sum_{u >= t} d_fu) y_ft          (setup_f_t)
//        sum_f y_f,t-1 + y_ft <= W                        (crew_t)
//        y binary, 0 <= p <= C_f, s >= 0, s_f,-1 = 0
//
// A setup occupies one of W crews for two consecutive periods, which couples
// the setup decisions of neighboring periods.
struct LotSizingProfile {
  int n_facilities = 3;
  double demand_min = 5.0;
  double demand_max = 30.0;
  double setup_cost_min = 50.0;
  double setup_cost_max = 150.0;
  double unit_cost_min = 1.0;
  double unit_cost_max = 3.0;
  double holding_cost_min = 1.0;
  double holding_cost_max = 3.0;
  // C_f is drawn from [1, capacity_slack] times the largest two-period demand
  // of facility f, so setting up every other period is always feasible.
  double capacity_slack = 1.5;
  // W = ceil(crew_fraction * n_facilities); must be at least 1.
  double crew_fraction = 1.25;

  static LotSizingProfile FromConfig(const Config& config);
};

struct TemporalInstance {
  MilpInstance milp;
  // Ground truth: y_ft has period t.
  PeriodLabeling periods;
};

// Deterministic per seed. Variables are ordered period-major (y, p, s per
// facility); crew_0 is the first row. Throws std::invalid_argument when
// periods < 1 or the profile is inconsistent.
TemporalInstance GenerateLotSizing(uint64_t seed, int periods,
                                   const LotSizingProfile& profile = {});

// One rolling-horizon step over periods [0, H):
//   periods below `fix` are fixed at the previous step's values,
//   periods below `integral` keep integrality, later ones are relaxed,
//   constraints with a discrete variable at period `keep` or later are dropped.
struct HorizonStep {
  int fix = 0;
  int integral = 0;
  int keep = 0;

  friend bool operator==(const HorizonStep&, const HorizonStep&) = default;
};

struct HorizonSchedule {
  std::vector<HorizonStep> steps;
  // Failed steps are retried once with keep widened to
  // fix + ceil(growth * (keep - fix)).
  double growth = 1.5;

  // Throws std::invalid_argument unless every step has
  // 0 <= fix <= integral <= keep <= H, fix strictly increases, each fix is at
  // most the previous step's integral, and the last step has integral = H.
  void Validate(int horizon) const;

  // Integral windows of w = max(1, ceil(initial_fraction * H)) periods that
  // advance by max(1, w / 2), so consecutive windows overlap. Each step keeps
  // constraints one window beyond its integral periods.
  static HorizonSchedule Default(int horizon, double initial_fraction = 0.25,
                                 double growth = 1.5);
  // The whole instance in one step.
  static HorizonSchedule SingleStep(int horizon);
};

// Sub-MIP spec for one step. `previous` supplies fixed values; it may be
// empty only when step.fix is 0.
SubMipSpec HorizonSubMipSpec(const MilpInstance& inst, const PeriodLabeling& labels,
                             const HorizonStep& step,
                             const std::vector<double>& previous);

struct HorizonStepReport {
  HorizonStep step;
  BnbStatus status = BnbStatus::kNoSolutionLimit;
  // Sub-MIP objective; NaN when the step found nothing.
  double objective = 0.0;
  int64_t nodes = 0;
  bool widened = false;
};

struct RollingHorizonResult {
  std::optional<Solution> solution;
  std::vector<HorizonStepReport> steps;
  // Only solutions certified on the full instance.
  PrimalTrajectory trajectory;
  // Number of leading periods committed; H once the schedule completes.
  int committed = 0;
  bool repaired = false;
  bool aborted = false;
};

// Each step gets an equal share of the remaining budget. The final solution
// is checked on the full instance; if it fails, one repair sub-MIP frees the
// periods fixed during the last two steps.
RollingHorizonResult RollingHorizon(const MilpInstance& inst, const PeriodLabeling& labels,
                                    const HorizonSchedule& schedule,
                                    const Budget& budget = Budget::Unlimited(),
                                    const BnbOptions& bnb = {});

struct RensResult {
  Solution solution;
  bool improved = false;
  int fixed = 0;
  std::optional<BnbStatus> status;
};

// Fixes every discrete variable with period below floor(0.9 H) at the
// incumbent and re-solves the rest starting from the incumbent. Throws
// std::invalid_argument unless the incumbent is feasible.
RensResult RensImprove(const MilpInstance& inst, const PeriodLabeling& labels,
                       const Solution& incumbent,
                       const Budget& budget = Budget::Unlimited(),
                       const BnbOptions& bnb = {});

// floor(0.9 H): periods strictly below this are fixed by RensImprove.
int RensFixHorizon(int horizon);

}  // namespace primalkit

#endif  // PRIMALKIT_HEURISTICS_TEMPORAL_H_
