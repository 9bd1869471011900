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

#include "primalkit/heuristics/temporal.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "lot_sizing_oracle.h"
#include "primalkit/core/config.h"
#include "primalkit/heuristics/feasibility_pump.h"
#include "primalkit/lp/simplex.h"
#include "primalkit/mip/branch_and_bound.h"

namespace primalkit {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;

MilpInstance Binaries(int n) {
  MilpInstance m;
  for (int j = 0; j < n; ++j) {
    m.variables.push_back({"y" + std::to_string(j), 0.0, 1.0, Integrality::kBinary});
  }
  return m;
}

void AddRow(MilpInstance& m, const std::string& name, std::vector<Term> terms,
            ConstraintSense sense, double rhs) {
  m.constraints.push_back({name, std::move(terms), sense, rhs});
}

int VarIndex(const MilpInstance& m, const std::string& name) {
  for (int j = 0; j < m.num_variables(); ++j) {
    if (m.variables[j].name == name) return j;
  }
  ADD_FAILURE() << "no variable " << name;
  return -1;
}

int RowIndex(const MilpInstance& m, const std::string& name) {
  for (int i = 0; i < m.num_constraints(); ++i) {
    if (m.constraints[i].name == name) return i;
  }
  ADD_FAILURE() << "no row " << name;
  return -1;
}

double Optimum(const MilpInstance& m) {
  const BnbResult r = SolveBnb(m);
  EXPECT_EQ(r.status, BnbStatus::kOptimal);
  return r.incumbent->objective;
}

LotSizingProfile TwoFacilities() {
  LotSizingProfile p;
  p.n_facilities = 2;
  return p;
}

// ---------------------------------------------------------------------------

TEST(InferPeriodsTest, ChainIsLayeredFromSeed) {
  MilpInstance m = Binaries(3);
  AddRow(m, "c0", {{0, 1.0}, {1, 1.0}}, ConstraintSense::kLessEqual, 1.0);
  AddRow(m, "c1", {{1, 1.0}, {2, 1.0}}, ConstraintSense::kLessEqual, 1.0);
  const PeriodLabeling labels = InferPeriods(m, std::vector<int>{0});
  EXPECT_THAT(labels.period_of, ElementsAre(0, 1, 2));
  EXPECT_EQ(labels.horizon, 3);
  EXPECT_THAT(labels.unlabeled, IsEmpty());
}

TEST(InferPeriodsTest, CompleteGraphHasAtMostTwoPeriods) {
  MilpInstance m = Binaries(5);
  std::vector<Term> all;
  for (int j = 0; j < 5; ++j) all.push_back({j, 1.0});
  AddRow(m, "all", all, ConstraintSense::kLessEqual, 2.0);
  // Default seeds are the whole first row.
  EXPECT_EQ(InferPeriods(m).horizon, 1);
  const PeriodLabeling one_seed = InferPeriods(m, std::vector<int>{2});
  EXPECT_EQ(one_seed.horizon, 2);
  EXPECT_THAT(one_seed.period_of, ElementsAre(1, 1, 0, 1, 1));
}

TEST(InferPeriodsTest, DefaultSeedSkipsRowsWithoutDiscreteVariables) {
  MilpInstance m = Binaries(3);
  m.variables.push_back({"x", 0.0, 5.0, Integrality::kContinuous});
  AddRow(m, "cont", {{3, 1.0}}, ConstraintSense::kLessEqual, 4.0);
  AddRow(m, "c0", {{1, 1.0}, {3, 1.0}}, ConstraintSense::kLessEqual, 4.0);
  AddRow(m, "c1", {{1, 1.0}, {0, 1.0}, {2, 1.0}}, ConstraintSense::kLessEqual, 2.0);
  const PeriodLabeling labels = InferPeriods(m);
  EXPECT_THAT(labels.period_of, ElementsAre(1, 0, 1, -1));
  EXPECT_EQ(labels.horizon, 2);
}

TEST(InferPeriodsTest, ContinuousVariablesDoNotConnectPeriods) {
  // y0 and y1 only meet through the continuous x, so y1 is unreachable.
  MilpInstance m = Binaries(2);
  m.variables.push_back({"x", 0.0, 1.0, Integrality::kContinuous});
  AddRow(m, "a", {{0, 1.0}, {2, 1.0}}, ConstraintSense::kLessEqual, 1.0);
  AddRow(m, "b", {{1, 1.0}, {2, 1.0}}, ConstraintSense::kLessEqual, 1.0);
  const PeriodLabeling labels = InferPeriods(m);
  EXPECT_THAT(labels.period_of, ElementsAre(0, -1, -1));
  EXPECT_THAT(labels.unlabeled, ElementsAre(1));
  EXPECT_EQ(labels.horizon, 1);
}

TEST(InferPeriodsTest, UnlabeledCountAsLastPeriod) {
  MilpInstance m = Binaries(4);
  m.variables.push_back({"x", 0.0, 1.0, Integrality::kContinuous});
  AddRow(m, "c0", {{0, 1.0}, {1, 1.0}}, ConstraintSense::kLessEqual, 1.0);
  AddRow(m, "c1", {{1, 1.0}, {2, 1.0}}, ConstraintSense::kLessEqual, 1.0);
  AddRow(m, "lonely", {{3, 1.0}, {4, 1.0}}, ConstraintSense::kLessEqual, 1.0);
  const PeriodLabeling labels = InferPeriods(m, std::vector<int>{0});
  ASSERT_EQ(labels.horizon, 3);
  EXPECT_THAT(labels.unlabeled, ElementsAre(3));
  EXPECT_EQ(labels.EffectivePeriod(m, 3), 2);
  EXPECT_EQ(labels.EffectivePeriod(m, 4), -1);
  EXPECT_EQ(labels.EffectivePeriod(m, 1), 1);
}

TEST(InferPeriodsTest, RejectsInstancesWithoutDiscreteVariables) {
  MilpInstance m;
  m.variables.push_back({"x", 0.0, 1.0, Integrality::kContinuous});
  EXPECT_THROW(InferPeriods(m), StructuralError);
}

TEST(InferPeriodsTest, RejectsContinuousSeed) {
  MilpInstance m = Binaries(1);
  m.variables.push_back({"x", 0.0, 1.0, Integrality::kContinuous});
  EXPECT_THROW(InferPeriods(m, std::vector<int>{1}), StructuralError);
  EXPECT_THROW(InferPeriods(m, std::vector<int>{7}), StructuralError);
}

TEST(InferPeriodsTest, RecoversLotSizingPeriods) {
  for (int periods : {1, 2, 4, 6, 9}) {
    for (uint64_t seed = 0; seed < 5; ++seed) {
      const TemporalInstance t = GenerateLotSizing(seed, periods);
      const PeriodLabeling labels = InferPeriods(t.milp);
      EXPECT_EQ(labels.horizon, periods);
      int discrete = 0, matching = 0;
      for (int v = 0; v < t.milp.num_variables(); ++v) {
        if (!t.milp.variables[v].IsDiscrete()) continue;
        ++discrete;
        matching += labels.period_of[v] == t.periods.period_of[v];
      }
      EXPECT_GE(matching, 0.95 * discrete) << "T=" << periods << " seed " << seed;
    }
  }
}

TEST(InferPeriodsTest, InvariantUnderShufflingLaterConstraints) {
  std::mt19937_64 rng(7);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const TemporalInstance t = GenerateLotSizing(seed, 5);
    const PeriodLabeling base = InferPeriods(t.milp);
    MilpInstance shuffled = t.milp;
    std::shuffle(shuffled.constraints.begin() + 1, shuffled.constraints.end(), rng);
    const PeriodLabeling again = InferPeriods(shuffled);
    EXPECT_EQ(again.period_of, base.period_of);
    EXPECT_EQ(again.horizon, base.horizon);
  }
}

// ---------------------------------------------------------------------------

TEST(GenerateLotSizingTest, SinglePeriodHasNoLinks) {
  const TemporalInstance t = GenerateLotSizing(3, 1);
  EXPECT_EQ(t.periods.horizon, 1);
  EXPECT_EQ(InferPeriods(t.milp).horizon, 1);
  for (const LinearConstraint& c : t.milp.constraints) {
    if (c.name.rfind("bal_", 0) == 0) EXPECT_EQ(c.terms.size(), 2u) << c.name;
  }
}

TEST(GenerateLotSizingTest, CountsForFourPeriods) {
  const LotSizingProfile profile;
  const TemporalInstance t = GenerateLotSizing(0, 4, profile);
  const MilpInstance& m = t.milp;
  EXPECT_EQ(m.NumDiscrete(), 4 * profile.n_facilities);
  EXPECT_EQ(m.num_variables(), 12 * profile.n_facilities);
  EXPECT_EQ(m.num_constraints(), 4 + 8 * profile.n_facilities);
  for (int f = 0; f < profile.n_facilities; ++f) {
    int linking = 0;
    for (int t_ = 0; t_ < 4; ++t_) {
      const LinearConstraint& bal =
          m.constraints[RowIndex(m, "bal_" + std::to_string(f) + "_" + std::to_string(t_))];
      if (bal.terms.size() == 3) ++linking;
    }
    EXPECT_EQ(linking, 3);
  }
}

TEST(GenerateLotSizingTest, GroundTruthLabelsSetupsOnly) {
  const TemporalInstance t = GenerateLotSizing(1, 3, TwoFacilities());
  const MilpInstance& m = t.milp;
  EXPECT_EQ(t.periods.period_of[VarIndex(m, "y_1_2")], 2);
  EXPECT_EQ(t.periods.period_of[VarIndex(m, "y_0_0")], 0);
  EXPECT_EQ(t.periods.period_of[VarIndex(m, "p_0_1")], -1);
  EXPECT_EQ(t.periods.period_of[VarIndex(m, "s_1_0")], -1);
  EXPECT_EQ(m.constraints.front().name, "crew_0");
}

TEST(GenerateLotSizingTest, DeterministicPerSeed) {
  const TemporalInstance a = GenerateLotSizing(11, 5);
  const TemporalInstance b = GenerateLotSizing(11, 5);
  const TemporalInstance c = GenerateLotSizing(12, 5);
  EXPECT_TRUE(SemanticallyEqual(a.milp, b.milp));
  EXPECT_FALSE(SemanticallyEqual(a.milp, c.milp));
}

TEST(GenerateLotSizingTest, RejectsBadInput) {
  EXPECT_THROW(GenerateLotSizing(0, 0), std::invalid_argument);
  LotSizingProfile p;
  p.crew_fraction = 0.5;
  EXPECT_THROW(GenerateLotSizing(0, 3, p), std::invalid_argument);
  p = {};
  p.n_facilities = 0;
  EXPECT_THROW(GenerateLotSizing(0, 3, p), std::invalid_argument);
}

TEST(GenerateLotSizingTest, EveryOtherPeriodSetupsAreFeasible) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    for (int periods : {1, 4, 7}) {
      MilpInstance m = GenerateLotSizing(seed, periods).milp;
      for (VariableDef& v : m.variables) {
        if (!v.IsDiscrete()) continue;
        const int t = std::stoi(v.name.substr(v.name.rfind('_') + 1));
        v.lower = v.upper = t % 2 == 0 ? 1.0 : 0.0;
      }
      EXPECT_TRUE(SolveLp(m).optimal()) << "seed " << seed << " T=" << periods;
    }
  }
}

TEST(GenerateLotSizingTest, ThreePeriodOptimumMatchesEnumeration) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const MilpInstance m = GenerateLotSizing(seed, 3, TwoFacilities()).milp;
    const std::optional<double> reference = ExhaustiveBinaryOptimum(m);
    ASSERT_TRUE(reference.has_value());
    EXPECT_NEAR(Optimum(m), *reference, 1e-6 * std::abs(*reference)) << "seed " << seed;
  }
}

TEST(GenerateLotSizingTest, ProfileFromConfig) {
  const Config config = Config::Parse("n_facilities = 5\ncrew_fraction = 2\n");
  const LotSizingProfile p = LotSizingProfile::FromConfig(config);
  EXPECT_EQ(p.n_facilities, 5);
  EXPECT_EQ(p.crew_fraction, 2.0);
  EXPECT_EQ(p.demand_max, LotSizingProfile{}.demand_max);
}

// ---------------------------------------------------------------------------

TEST(HorizonScheduleTest, DefaultWindowsOverlap) {
  EXPECT_THAT(HorizonSchedule::Default(6).steps,
              ElementsAre(HorizonStep{0, 2, 4}, HorizonStep{1, 3, 5}, HorizonStep{2, 4, 6},
                          HorizonStep{3, 5, 6}, HorizonStep{4, 6, 6}));
  EXPECT_THAT(HorizonSchedule::Default(1).steps, ElementsAre(HorizonStep{0, 1, 1}));
  EXPECT_THAT(HorizonSchedule::Default(8, 0.5).steps,
              ElementsAre(HorizonStep{0, 4, 8}, HorizonStep{2, 6, 8}, HorizonStep{4, 8, 8}));
}

TEST(HorizonScheduleTest, DefaultIsAlwaysValid) {
  for (int h = 1; h <= 40; ++h) {
    for (double fraction : {0.1, 0.25, 0.5, 1.0}) {
      const HorizonSchedule s = HorizonSchedule::Default(h, fraction);
      EXPECT_NO_THROW(s.Validate(h));
      EXPECT_EQ(s.steps.front().fix, 0);
    }
  }
}

TEST(HorizonScheduleTest, SingleStepCoversEverything) {
  EXPECT_THAT(HorizonSchedule::SingleStep(5).steps, ElementsAre(HorizonStep{5, 5, 5}));
}

TEST(HorizonScheduleTest, ValidateRejectsMalformedSchedules) {
  auto check = [](std::vector<HorizonStep> steps, int h) {
    HorizonSchedule s;
    s.steps = std::move(steps);
    s.Validate(h);
  };
  EXPECT_NO_THROW(check({{0, 2, 3}, {2, 4, 4}}, 4));
  EXPECT_THROW(check({}, 4), std::invalid_argument);
  EXPECT_THROW(check({{0, 2, 3}}, 4), std::invalid_argument);            // never integral at 3
  EXPECT_THROW(check({{3, 2, 4}}, 4), std::invalid_argument);            // fix > integral
  EXPECT_THROW(check({{0, 4, 3}}, 4), std::invalid_argument);            // integral > keep
  EXPECT_THROW(check({{0, 4, 5}}, 4), std::invalid_argument);            // keep > H
  EXPECT_THROW(check({{0, 2, 4}, {0, 4, 4}}, 4), std::invalid_argument);  // fix not increasing
  EXPECT_THROW(check({{0, 2, 4}, {3, 4, 4}}, 4), std::invalid_argument);  // fixes unsolved periods
  EXPECT_THROW(check({{0, 1, 1}}, 0), std::invalid_argument);
}

TEST(HorizonSubMipSpecTest, StepRulesOnFourPeriods) {
  const LotSizingProfile profile = TwoFacilities();
  const TemporalInstance t = GenerateLotSizing(0, 4, profile);
  const MilpInstance& m = t.milp;
  const int nf = profile.n_facilities;

  const SubMipSpec first = HorizonSubMipSpec(m, t.periods, {0, 2, 3}, {});
  EXPECT_THAT(first.fixings, IsEmpty());
  // Setups of periods 2 and 3 lose integrality.
  EXPECT_EQ(first.relaxations.size(), static_cast<size_t>(2 * nf));
  for (int v : first.relaxations) EXPECT_GE(t.periods.period_of[v], 2);
  // Rows touching a period-3 setup: crew_3 and each setup_f_3.
  std::vector<std::string> dropped;
  for (int row : first.dropped_constraints) dropped.push_back(m.constraints[row].name);
  EXPECT_THAT(dropped, ElementsAre("crew_3", "setup_0_3", "setup_1_3"));

  const BnbResult full = SolveBnb(m);
  const SubMipSpec second = HorizonSubMipSpec(m, t.periods, {2, 4, 4}, full.incumbent->values);
  EXPECT_EQ(second.fixings.size(), static_cast<size_t>(2 * nf));
  for (const auto& [var, value] : second.fixings) {
    EXPECT_LT(t.periods.period_of[var], 2);
    EXPECT_EQ(value, std::round(full.incumbent->values[var]));
  }
  EXPECT_THAT(second.relaxations, IsEmpty());
  EXPECT_THAT(second.dropped_constraints, IsEmpty());

  EXPECT_THROW(HorizonSubMipSpec(m, t.periods, {1, 4, 4}, {}), std::invalid_argument);
}

// ---------------------------------------------------------------------------

TEST(RollingHorizonTest, SingleStepEqualsBranchAndBound) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const TemporalInstance t = GenerateLotSizing(seed, 4);
    const BnbResult bnb = SolveBnb(t.milp);
    const RollingHorizonResult rh =
        RollingHorizon(t.milp, t.periods, HorizonSchedule::SingleStep(4));
    ASSERT_TRUE(rh.solution.has_value());
    EXPECT_EQ(rh.solution->objective, bnb.incumbent->objective);
    EXPECT_EQ(rh.solution->values, bnb.incumbent->values);
    EXPECT_EQ(rh.steps.size(), 1u);
    EXPECT_EQ(rh.committed, 4);
  }
}

TEST(RollingHorizonTest, OnePeriodDefaultIsOneFullSolve) {
  const TemporalInstance t = GenerateLotSizing(2, 1);
  const HorizonSchedule schedule = HorizonSchedule::Default(1);
  ASSERT_EQ(schedule.steps.size(), 1u);
  const RollingHorizonResult rh = RollingHorizon(t.milp, t.periods, schedule);
  ASSERT_TRUE(rh.solution.has_value());
  EXPECT_EQ(rh.solution->objective, SolveBnb(t.milp).incumbent->objective);
}

TEST(RollingHorizonTest, SixPeriodsWithinFivePercentOfOptimum) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const TemporalInstance t = GenerateLotSizing(seed, 6);
    const PeriodLabeling labels = InferPeriods(t.milp);
    const RollingHorizonResult rh =
        RollingHorizon(t.milp, labels, HorizonSchedule::Default(labels.horizon));
    ASSERT_TRUE(rh.solution.has_value()) << "seed " << seed;
    EXPECT_EQ(rh.solution->feasible, FeasibilityStatus::kFeasible);
    EXPECT_EQ(rh.committed, 6);
    EXPECT_FALSE(rh.aborted);
    const double opt = Optimum(t.milp);
    EXPECT_LE(rh.solution->objective, 1.05 * opt) << "seed " << seed;
    EXPECT_GE(rh.solution->objective, opt - 1e-6 * opt);
  }
}

TEST(RollingHorizonTest, TrajectoryHoldsCertifiedImprovements) {
  const TemporalInstance t = GenerateLotSizing(4, 8);
  const RollingHorizonResult rh =
      RollingHorizon(t.milp, t.periods, HorizonSchedule::Default(8));
  ASSERT_FALSE(rh.trajectory.empty());
  const auto& events = rh.trajectory.events();
  for (size_t k = 1; k < events.size(); ++k) {
    EXPECT_LT(events[k].bound, events[k - 1].bound);
    EXPECT_GE(events[k].time, events[k - 1].time);
  }
  EXPECT_DOUBLE_EQ(*rh.trajectory.best(), rh.solution->objective);
  EXPECT_EQ(rh.steps.size(), HorizonSchedule::Default(8).steps.size());
}

// y0 is attractive on its own, but y0 = 1 rules out the forced y1 = 1.
MilpInstance TrapInstance() {
  MilpInstance m = Binaries(3);
  m.objective.terms = {{0, -1.0}};
  AddRow(m, "a", {{0, 1.0}, {1, 1.0}}, ConstraintSense::kLessEqual, 1.0);
  AddRow(m, "b", {{1, 1.0}}, ConstraintSense::kGreaterEqual, 1.0);
  AddRow(m, "c", {{1, 1.0}, {2, 1.0}}, ConstraintSense::kLessEqual, 2.0);
  return m;
}

TEST(RollingHorizonTest, FailedStepIsWidenedOnceThenAborts) {
  const MilpInstance m = TrapInstance();
  const PeriodLabeling labels = InferPeriods(m, std::vector<int>{0});
  ASSERT_THAT(labels.period_of, ElementsAre(0, 1, 2));
  HorizonSchedule schedule;
  schedule.steps = {{0, 1, 1}, {1, 2, 2}, {2, 3, 3}};
  const RollingHorizonResult rh = RollingHorizon(m, labels, schedule);
  EXPECT_TRUE(rh.aborted);
  EXPECT_FALSE(rh.solution.has_value());
  ASSERT_EQ(rh.steps.size(), 2u);
  EXPECT_FALSE(rh.steps[0].widened);
  EXPECT_TRUE(rh.steps[1].widened);
  EXPECT_EQ(rh.steps[1].step.keep, 3);
  EXPECT_TRUE(std::isnan(rh.steps[1].objective));
  EXPECT_EQ(rh.committed, 1);
}

TEST(RollingHorizonTest, FullWindowFailureIsNotWidened) {
  const MilpInstance m = TrapInstance();
  const PeriodLabeling labels = InferPeriods(m, std::vector<int>{0});
  HorizonSchedule schedule;
  schedule.steps = {{0, 1, 1}, {1, 3, 3}};
  const RollingHorizonResult rh = RollingHorizon(m, labels, schedule);
  EXPECT_TRUE(rh.aborted);
  ASSERT_EQ(rh.steps.size(), 2u);
  EXPECT_FALSE(rh.steps[1].widened);
}

TEST(RollingHorizonTest, RejectsInvalidScheduleOrLabels) {
  const TemporalInstance t = GenerateLotSizing(0, 4);
  HorizonSchedule bad;
  bad.steps = {{0, 2, 4}};
  EXPECT_THROW(RollingHorizon(t.milp, t.periods, bad), std::invalid_argument);
  PeriodLabeling short_labels = t.periods;
  short_labels.period_of.pop_back();
  EXPECT_THROW(RollingHorizon(t.milp, short_labels, HorizonSchedule::Default(4)),
               StructuralError);
}

// ---------------------------------------------------------------------------

TEST(RensImproveTest, FixHorizonIsNinetyPercentFloor) {
  EXPECT_EQ(RensFixHorizon(10), 9);
  EXPECT_EQ(RensFixHorizon(1), 0);
  EXPECT_EQ(RensFixHorizon(20), 18);
  EXPECT_EQ(RensFixHorizon(9), 8);
}

TEST(RensImproveTest, TenPeriodsFixesAllButTheLast) {
  const LotSizingProfile profile = TwoFacilities();
  const TemporalInstance t = GenerateLotSizing(0, 10, profile);
  const FpResult fp = FeasibilityPump(t.milp);
  ASSERT_TRUE(fp.solution.has_value());
  const RensResult r = RensImprove(t.milp, t.periods, *fp.solution);
  EXPECT_EQ(r.fixed, 9 * profile.n_facilities);
  EXPECT_EQ(r.solution.feasible, FeasibilityStatus::kFeasible);
}

TEST(RensImproveTest, OnePeriodFixesNothing) {
  const TemporalInstance t = GenerateLotSizing(5, 1);
  const FpResult fp = FeasibilityPump(t.milp);
  ASSERT_TRUE(fp.solution.has_value());
  const RensResult r = RensImprove(t.milp, t.periods, *fp.solution);
  EXPECT_EQ(r.fixed, 0);
  EXPECT_NEAR(r.solution.objective, Optimum(t.milp), 1e-9);
}

TEST(RensImproveTest, RecoversSuboptimalLastPeriodSetup) {
  const LotSizingProfile profile = TwoFacilities();
  const double crews = std::ceil(profile.crew_fraction * profile.n_facilities - 1e-9);
  int checked = 0;
  for (uint64_t seed = 0; seed < 10 && checked < 3; ++seed) {
    const TemporalInstance t = GenerateLotSizing(seed, 10, profile);
    const MilpInstance& m = t.milp;
    const BnbResult opt = SolveBnb(m);
    ASSERT_EQ(opt.status, BnbStatus::kOptimal);
    const std::vector<double>& best = opt.incumbent->values;
    // Open one idle last-period setup where a crew is free, then re-solve
    // the continuous part with every setup fixed.
    const LinearConstraint& crew = m.constraints[RowIndex(m, "crew_9")];
    if (Activity(crew.terms, best) + 1 > crews + 1e-9) continue;
    int extra = -1;
    for (int f = 0; f < profile.n_facilities && extra < 0; ++f) {
      const int y = VarIndex(m, "y_" + std::to_string(f) + "_9");
      if (best[y] < 0.5) extra = y;
    }
    if (extra < 0) continue;
    MilpInstance fixed = m;
    for (int v = 0; v < m.num_variables(); ++v) {
      if (!m.variables[v].IsDiscrete()) continue;
      fixed.variables[v].lower = fixed.variables[v].upper = v == extra ? 1.0 : best[v];
    }
    const LpSolution lp = SolveLp(fixed);
    ASSERT_TRUE(lp.optimal());
    const Solution incumbent = MakeCertifiedSolution(m, lp.values);
    ASSERT_EQ(incumbent.feasible, FeasibilityStatus::kFeasible);
    ASSERT_GT(incumbent.objective, opt.incumbent->objective + 1e-6);

    const RensResult r = RensImprove(m, t.periods, incumbent);
    EXPECT_TRUE(r.improved);
    EXPECT_NEAR(r.solution.objective, opt.incumbent->objective,
                1e-6 * opt.incumbent->objective);
    ++checked;
  }
  EXPECT_EQ(checked, 3);
}

TEST(RensImproveTest, NeverWorseThanIncumbent) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const TemporalInstance t = GenerateLotSizing(seed, 6);
    FpConfig config;
    config.seed = seed;
    const FpResult fp = FeasibilityPump(t.milp, config);
    if (!fp.solution) continue;
    const RensResult r = RensImprove(t.milp, t.periods, *fp.solution);
    EXPECT_LE(r.solution.objective, fp.solution->objective);
    EXPECT_EQ(r.solution.feasible, FeasibilityStatus::kFeasible);
    EXPECT_EQ(r.improved, r.solution.objective < fp.solution->objective);
  }
}

TEST(RensImproveTest, ExhaustedBudgetReturnsIncumbent) {
  const TemporalInstance t = GenerateLotSizing(1, 6);
  const FpResult fp = FeasibilityPump(t.milp);
  ASSERT_TRUE(fp.solution.has_value());
  Budget budget = Budget::Work(1);
  budget.Charge();
  const RensResult r = RensImprove(t.milp, t.periods, *fp.solution, budget);
  EXPECT_FALSE(r.improved);
  EXPECT_FALSE(r.status.has_value());
  EXPECT_EQ(r.solution.values, fp.solution->values);
}

TEST(RensImproveTest, RejectsInfeasibleIncumbent) {
  const TemporalInstance t = GenerateLotSizing(1, 3);
  Solution bogus;
  bogus.values.assign(t.milp.num_variables(), 0.0);
  EXPECT_THROW(RensImprove(t.milp, t.periods, bogus), std::invalid_argument);
}

}  // namespace
}  // namespace primalkit
