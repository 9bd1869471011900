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

#include "primalkit/heuristics/load_balancing.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "primalkit/core/config.h"
#include "primalkit/core/lp_format.h"
#include "primalkit/mip/branch_and_bound.h"

namespace primalkit {
namespace {

using ::testing::ElementsAre;

LoadBalancingInstance MakeInstance(std::vector<std::vector<int>> access, std::vector<double> a,
                                   std::vector<double> b) {
  LoadBalancingInstance inst;
  inst.n_tasks = static_cast<int>(access.size());
  inst.n_machines = static_cast<int>(b.size());
  inst.access = std::move(access);
  inst.a = std::move(a);
  inst.b = std::move(b);
  return inst;
}

// Small instances for exact comparisons.
LoadBalancingProfile SmallProfile() {
  LoadBalancingProfile p;
  p.n_tasks = 12;
  p.n_machines = 8;
  p.min_access = 3;
  p.max_access = 6;
  return p;
}

std::vector<double> YValues(const LoadBalancingInstance& inst, const std::vector<double>& v) {
  const LoadBalancingLayout layout(inst);
  return std::vector<double>(v.begin() + layout.y_offset, v.end());
}

// An optimal LP "solution" carrying the given y values (x left at zero).
LpSolution FakeLp(const LoadBalancingInstance& inst, const std::vector<double>& y) {
  const LoadBalancingLayout layout(inst);
  LpSolution lp;
  lp.status = LpStatus::kOptimal;
  lp.values.assign(layout.y_offset + inst.n_machines, 0.0);
  for (int j = 0; j < inst.n_machines; ++j) lp.values[layout.Y(j)] = y[j];
  return lp;
}

double OptimalValue(const LoadBalancingInstance& inst, bool tightened) {
  const BnbResult r = SolveBnb(ToMilp(inst, tightened));
  EXPECT_EQ(r.status, BnbStatus::kOptimal);
  return r.incumbent->objective;
}

TEST(GenerateLoadBalancingTest, DemandBelowCapacity) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const LoadBalancingInstance inst = GenerateLoadBalancing(seed);
    EXPECT_EQ(inst.n_tasks, 30);
    EXPECT_EQ(inst.n_machines, 20);
    for (int i = 0; i < inst.n_tasks; ++i) {
      EXPECT_GE(inst.access[i].size(), 2u);
      for (int j : inst.access[i]) EXPECT_LT(inst.a[i], inst.b[j]);
    }
  }
}

TEST(GenerateLoadBalancingTest, TwoMachinesForceFullAccess) {
  LoadBalancingProfile p;
  p.n_machines = 2;
  const LoadBalancingInstance inst = GenerateLoadBalancing(5, p);
  for (const auto& set : inst.access) EXPECT_THAT(set, ElementsAre(0, 1));
}

TEST(GenerateLoadBalancingTest, Deterministic) {
  const LoadBalancingInstance a = GenerateLoadBalancing(9);
  const LoadBalancingInstance b = GenerateLoadBalancing(9);
  EXPECT_EQ(a.access, b.access);
  EXPECT_EQ(a.a, b.a);
  EXPECT_EQ(a.b, b.b);
}

TEST(GenerateLoadBalancingTest, AllOpenIsFeasible) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const LoadBalancingInstance inst = GenerateLoadBalancing(seed);
    const auto flows = FlowsForOpenMachines(inst, std::vector<bool>(inst.n_machines, true));
    ASSERT_TRUE(flows.has_value());
    EXPECT_TRUE(CheckFeasibility(ToMilp(inst, false), *flows).feasible);
  }
}

TEST(GenerateLoadBalancingTest, RejectsInconsistentProfile) {
  LoadBalancingProfile p;
  p.capacity_min = 5.0;  // below demand_max
  EXPECT_THROW(GenerateLoadBalancing(0, p), std::invalid_argument);
  p = {};
  p.n_machines = 1;
  EXPECT_THROW(GenerateLoadBalancing(0, p), std::invalid_argument);
  p = {};
  p.min_access = 1;
  EXPECT_THROW(GenerateLoadBalancing(0, p), std::invalid_argument);
}

TEST(GenerateLoadBalancingTest, ProfileFromConfig) {
  const LoadBalancingProfile p =
      LoadBalancingProfile::FromConfig(Config::Parse("n_tasks = 7\ncapacity_max = 25\n"));
  EXPECT_EQ(p.n_tasks, 7);
  EXPECT_EQ(p.n_machines, 20);
  EXPECT_DOUBLE_EQ(p.capacity_max, 25.0);
}

TEST(ToMilpTest, OriginalCounts) {
  const LoadBalancingInstance inst = MakeInstance({{0, 1}}, {3.0}, {10.0, 10.0});
  const MilpInstance m = ToMilp(inst, false);
  int link = 0, cap = 0, robust = 0;
  for (const LinearConstraint& c : m.constraints) {
    link += c.name.rfind("link_", 0) == 0;
    cap += c.name.rfind("cap_", 0) == 0;
    robust += c.name.rfind("robust_", 0) == 0;
  }
  EXPECT_EQ(link, 2);
  EXPECT_EQ(cap, 2);
  EXPECT_EQ(robust, 2);
  EXPECT_EQ(m.num_variables(), 4);
}

TEST(ToMilpTest, TightenedCounts) {
  const LoadBalancingInstance inst = MakeInstance({{0, 1}}, {3.0}, {10.0, 10.0});
  const MilpInstance m = ToMilp(inst, true);
  EXPECT_EQ(m.num_constraints(), 4);
  for (const LinearConstraint& c : m.constraints) {
    EXPECT_NE(c.name.rfind("link_", 0), 0u);
    if (c.name.rfind("cap_", 0) == 0) {
      ASSERT_EQ(c.terms.size(), 2u);
      EXPECT_EQ(c.terms.back().coef, -10.0);
      EXPECT_EQ(c.rhs, 0.0);
    }
  }
}

TEST(ToMilpTest, RoundTripsThroughLpFormat) {
  const LoadBalancingInstance inst = GenerateLoadBalancing(1, SmallProfile());
  for (bool tightened : {false, true}) {
    const MilpInstance m = ToMilp(inst, tightened);
    const MilpInstance parsed = ParseLpFile(WriteLpFile(m));
    EXPECT_TRUE(SemanticallyEqual(parsed, m));
    const auto back = LoadBalancingFromMilp(parsed);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(back->access, inst.access);
    EXPECT_EQ(back->a, inst.a);
    EXPECT_EQ(back->b, inst.b);
  }
}

TEST(ToMilpTest, ForeignMilpIsNotRecognized) {
  MilpInstance m;
  m.variables.push_back({"z", 0, 1, Integrality::kBinary});
  EXPECT_FALSE(LoadBalancingFromMilp(m).has_value());
}

TEST(ToMilpTest, TightenedBoundDominatesOnDefaultProfile) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const LoadBalancingInstance inst = GenerateLoadBalancing(seed);
    const LpSolution original = SolveLp(ToMilp(inst, false));
    const LpSolution tightened = SolveLp(ToMilp(inst, true));
    ASSERT_TRUE(original.optimal());
    ASSERT_TRUE(tightened.optimal());
    EXPECT_GE(tightened.objective, original.objective - 1e-6) << "seed " << seed;
  }
}

// Dominance depends on the instance: with one task and two machines the
// robustness rows force x_ij >= a_i, so the link rows push both y to one
// while the tightened capacity rows only need y_j >= a_i / b_j.
TEST(ToMilpTest, TightenedBoundCanBeWeaker) {
  const LoadBalancingInstance inst = MakeInstance({{0, 1}}, {3.0}, {10.0, 10.0});
  const LpSolution original = SolveLp(ToMilp(inst, false));
  const LpSolution tightened = SolveLp(ToMilp(inst, true));
  EXPECT_NEAR(original.objective, 2.0, 1e-9);
  EXPECT_NEAR(tightened.objective, 0.6, 1e-9);
}

TEST(ToMilpTest, BothVariantsHaveTheSameOptimum) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const LoadBalancingInstance inst = GenerateLoadBalancing(seed, SmallProfile());
    EXPECT_NEAR(OptimalValue(inst, false), OptimalValue(inst, true), 1e-9) << "seed " << seed;
  }
}

TEST(RoundUpAllTest, OpensEveryNonzeroMachine) {
  const LoadBalancingInstance inst =
      MakeInstance({{0, 1, 2}}, {3.0}, {10.0, 10.0, 10.0});
  const Solution sol = RoundUpAll(inst, FakeLp(inst, {0.3, 0.0, 1.0}));
  EXPECT_THAT(YValues(inst, sol.values), ElementsAre(1.0, 0.0, 1.0));
}

TEST(RoundUpAllTest, IntegralSolutionUnchanged) {
  const LoadBalancingInstance inst = MakeInstance({{0, 1}}, {3.0}, {10.0, 10.0});
  const LpSolution lp = SolveLp(ToMilp(inst, false));
  ASSERT_TRUE(lp.optimal());
  const Solution sol = RoundUpAll(inst, lp);
  EXPECT_EQ(sol.values, lp.values);
  EXPECT_EQ(sol.feasible, FeasibilityStatus::kFeasible);
}

TEST(RoundUpAllTest, RejectsNonOptimalLp) {
  const LoadBalancingInstance inst = MakeInstance({{0, 1}}, {3.0}, {10.0, 10.0});
  LpSolution lp = FakeLp(inst, {0.5, 0.5});
  lp.status = LpStatus::kIterationLimit;
  EXPECT_THROW(RoundUpAll(inst, lp), std::invalid_argument);
}

TEST(RoundUpAllTest, FeasibleFromEitherRelaxation) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    LoadBalancingProfile p;
    p.n_tasks = 5 + static_cast<int>(seed % 10) * 5;
    const LoadBalancingInstance inst = GenerateLoadBalancing(seed, p);
    for (bool tightened : {false, true}) {
      const LpSolution lp = SolveLp(ToMilp(inst, tightened));
      ASSERT_TRUE(lp.optimal());
      const Solution sol = RoundUpAll(inst, lp);
      EXPECT_EQ(sol.feasible, FeasibilityStatus::kFeasible)
          << "seed " << seed << " tightened " << tightened;
      EXPECT_TRUE(CheckFeasibility(ToMilp(inst, false), sol).feasible);
    }
  }
}

TEST(QuantileRoundTest, RoundsUpTheLargestFractions) {
  const LoadBalancingInstance inst =
      MakeInstance({{0, 1, 2, 3, 4}}, {3.0}, {10.0, 10.0, 10.0, 10.0, 10.0});
  const LpSolution lp = FakeLp(inst, {1.0, 0.9, 0.6, 0.3, 0.05});
  const auto sol = QuantileRound(inst, lp, 3);
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ(sol->feasible, FeasibilityStatus::kUnchecked);
  EXPECT_THAT(YValues(inst, sol->values), ElementsAre(1.0, 1.0, 1.0, 0.0, 0.0));
  EXPECT_EQ(sol->objective, 3.0);
}

TEST(QuantileRoundTest, TiesFavorLowerIndex) {
  const LoadBalancingInstance inst =
      MakeInstance({{0, 1, 2, 3}}, {3.0}, {10.0, 10.0, 10.0, 10.0});
  const auto sol = QuantileRound(inst, FakeLp(inst, {0.5, 0.5, 0.5, 0.5}), 2);
  ASSERT_TRUE(sol.has_value());
  EXPECT_THAT(YValues(inst, sol->values), ElementsAre(1.0, 1.0, 0.0, 0.0));
}

TEST(QuantileRoundTest, FullTargetMatchesRoundUpAll) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const LoadBalancingInstance inst = GenerateLoadBalancing(seed, SmallProfile());
    const LpSolution lp = SolveLp(ToMilp(inst, true));
    const Solution up = RoundUpAll(inst, lp);
    const auto sol = QuantileRound(inst, lp, static_cast<int>(std::lround(up.objective)));
    ASSERT_TRUE(sol.has_value());
    EXPECT_EQ(YValues(inst, sol->values), YValues(inst, up.values));
  }
}

TEST(QuantileRoundTest, OutOfRangeTargetIsNoOp) {
  const LoadBalancingInstance inst =
      MakeInstance({{0, 1, 2}}, {3.0}, {10.0, 10.0, 10.0});
  const LpSolution lp = FakeLp(inst, {1.0, 0.5, 0.0});
  EXPECT_FALSE(QuantileRound(inst, lp, 0).has_value());
  EXPECT_FALSE(QuantileRound(inst, lp, 3).has_value());
  EXPECT_TRUE(QuantileRound(inst, lp, 2).has_value());
}

TEST(QuantileRoundTest, TargetBelowRobustMinimumFailsCertification) {
  // One task on three machines needs two of them open; a target of one
  // cannot be certified.
  const LoadBalancingInstance inst = MakeInstance({{0, 1, 2}}, {3.0}, {10.0, 10.0, 10.0});
  const MilpInstance original = ToMilp(inst, false);
  const LpSolution lp = SolveLp(original);
  ASSERT_TRUE(lp.optimal());
  EXPECT_NEAR(lp.objective, 1.5, 1e-9);
  const auto sol = QuantileRound(inst, lp, 1);
  ASSERT_TRUE(sol.has_value());
  EXPECT_FALSE(CheckFeasibility(original, *sol).feasible);
  const auto two = QuantileRound(inst, lp, 2);
  ASSERT_TRUE(two.has_value());
  EXPECT_TRUE(CheckFeasibility(original, *two).feasible);
}

TEST(NextRoundingTargetTest, Bisection) {
  const int none = std::numeric_limits<int>::min();
  EXPECT_EQ(NextRoundingTarget(10, 6, none, 0), 8);
  // After a success at 8 the interval is [6, 8]; after a failure, [8, 10].
  EXPECT_EQ(NextRoundingTarget(8, 6, none, 0), 7);
  EXPECT_EQ(NextRoundingTarget(10, 8, 8, 0), 9);
  EXPECT_EQ(NextRoundingTarget(10, 8, 9, 0), std::nullopt);
  // Never below the LP bound, never at the primal bound.
  EXPECT_EQ(NextRoundingTarget(10, 2, none, 7), 7);
  EXPECT_EQ(NextRoundingTarget(10, 9.9, none, 0), 9);
}

TEST(AdaptiveRoundingTest, IntegralLpNeedsNoRounds) {
  const LoadBalancingInstance inst = MakeInstance({{0, 1}}, {3.0}, {10.0, 10.0});
  const AdaptiveRoundingResult r = AdaptiveRounding(inst);
  EXPECT_TRUE(r.steps.empty());
  EXPECT_EQ(r.best.objective, 2.0);
  EXPECT_EQ(r.best.feasible, FeasibilityStatus::kFeasible);
}

TEST(AdaptiveRoundingTest, BoundsMoveMonotonically) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const LoadBalancingInstance inst = GenerateLoadBalancing(seed);
    const RoundingConfig config;
    const AdaptiveRoundingResult r = AdaptiveRounding(inst, config);
    double primal = r.round_up_objective;
    double dual = config.rho * std::max(r.original_lp, r.tightened_lp);
    int largest_failure = std::numeric_limits<int>::min();
    for (const RoundingStep& step : r.steps) {
      EXPECT_LE(step.primal, primal);
      EXPECT_GE(step.dual, dual);
      if (step.feasible) {
        EXPECT_EQ(step.primal, step.target);
      } else {
        largest_failure = std::max(largest_failure, step.target);
      }
      primal = step.primal;
      dual = step.dual;
    }
    EXPECT_EQ(primal, r.primal_bound);
    const bool converged = (r.primal_bound - r.dual_bound) / std::max(1.0, r.primal_bound) <
                           config.gap_threshold;
    const bool no_target_left = largest_failure + 1 >= r.primal_bound ||
                                std::ceil(std::max(r.original_lp, r.tightened_lp) - 1e-6) >=
                                    r.primal_bound;
    EXPECT_TRUE(converged || r.hit_max_rounds || no_target_left) << "seed " << seed;
    EXPECT_TRUE(CheckFeasibility(ToMilp(inst, false), r.best).feasible);
    EXPECT_EQ(r.best.objective, r.primal_bound);
    const auto& events = r.trajectory.events();
    for (size_t e = 1; e < events.size(); ++e) EXPECT_LT(events[e].bound, events[e - 1].bound);
  }
}

TEST(AdaptiveRoundingTest, NeverWorseThanRoundUpNeverBelowOptimum) {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    const LoadBalancingInstance inst = GenerateLoadBalancing(seed, SmallProfile());
    const AdaptiveRoundingResult r = AdaptiveRounding(inst);
    EXPECT_LE(r.primal_bound, r.round_up_objective);
    EXPECT_GE(r.primal_bound, OptimalValue(inst, true) - 1e-9);
  }
}

TEST(AdaptiveRoundingTest, MaxRoundsZeroKeepsRoundUp) {
  const LoadBalancingInstance inst = GenerateLoadBalancing(0);
  RoundingConfig config;
  config.max_rounds = 0;
  const AdaptiveRoundingResult r = AdaptiveRounding(inst, config);
  EXPECT_TRUE(r.steps.empty());
  EXPECT_LE(r.primal_bound, r.round_up_objective);
}

TEST(RoundingConfigTest, Validation) {
  RoundingConfig c;
  c.rho = 0.5;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c = {};
  c.gap_threshold = 0.0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  const RoundingConfig parsed =
      RoundingConfig::FromConfig(Config::Parse("rho = 1.2\nmax_rounds = 4\n"));
  EXPECT_DOUBLE_EQ(parsed.rho, 1.2);
  EXPECT_EQ(parsed.max_rounds, 4);
  EXPECT_DOUBLE_EQ(parsed.gap_threshold, 0.01);
}

TEST(RinsImproveTest, IntegralLpFixesEverything) {
  // a_i = b_j makes the tightened LP integral: both machines must carry the
  // whole demand.
  const LoadBalancingInstance inst = MakeInstance({{0, 1}}, {10.0}, {10.0, 10.0});
  const MilpInstance original = ToMilp(inst, false);
  const Solution incumbent = MakeCertifiedSolution(original, {10.0, 10.0, 1.0, 1.0});
  ASSERT_EQ(incumbent.feasible, FeasibilityStatus::kFeasible);
  const RinsResult r = RinsImprove(inst, incumbent);
  EXPECT_EQ(r.fixed, 2);
  EXPECT_FALSE(r.improved);
  EXPECT_EQ(r.solution.values, incumbent.values);
}

TEST(RinsImproveTest, RecoversOptimumFromOneExtraMachine) {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    const LoadBalancingInstance inst = GenerateLoadBalancing(seed, SmallProfile());
    const MilpInstance original = ToMilp(inst, false);
    const BnbResult exact = SolveBnb(original);
    ASSERT_EQ(exact.status, BnbStatus::kOptimal);
    const LoadBalancingLayout layout(inst);
    std::vector<bool> open(inst.n_machines);
    for (int j = 0; j < inst.n_machines; ++j) {
      open[j] = exact.incumbent->values[layout.Y(j)] > 0.5;
    }
    const auto closed = std::find(open.begin(), open.end(), false);
    ASSERT_NE(closed, open.end());
    *closed = true;
    const auto flows = FlowsForOpenMachines(inst, open);
    ASSERT_TRUE(flows.has_value());
    const Solution incumbent = MakeCertifiedSolution(original, *flows);
    ASSERT_EQ(incumbent.objective, exact.incumbent->objective + 1);
    const RinsResult r = RinsImprove(inst, incumbent);
    EXPECT_TRUE(r.improved) << "seed " << seed;
    EXPECT_EQ(r.solution.objective, exact.incumbent->objective);
    EXPECT_TRUE(CheckFeasibility(original, r.solution).feasible);
  }
}

TEST(RinsImproveTest, NeverWorse) {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    const LoadBalancingInstance inst = GenerateLoadBalancing(seed, SmallProfile());
    const Solution up = RoundUpAll(inst, SolveLp(ToMilp(inst, false)));
    const RinsResult r = RinsImprove(inst, up, Budget::Unlimited(), 50);
    EXPECT_LE(r.solution.objective, up.objective);
    EXPECT_TRUE(CheckFeasibility(ToMilp(inst, false), r.solution).feasible);
  }
}

TEST(RinsImproveTest, RejectsInfeasibleIncumbent) {
  const LoadBalancingInstance inst = MakeInstance({{0, 1}}, {3.0}, {10.0, 10.0});
  const Solution bad{{0.0, 0.0, 0.0, 0.0}, 0.0, FeasibilityStatus::kUnchecked};
  EXPECT_THROW(RinsImprove(inst, bad), std::invalid_argument);
}

}  // namespace
}  // namespace primalkit
