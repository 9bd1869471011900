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
#include <deque>
#include <random>
#include <stdexcept>
#include <string>

namespace primalkit {
namespace {

std::string Name(const char* prefix, int a, int b) {
  return std::string(prefix) + "_" + std::to_string(a) + "_" + std::to_string(b);
}

double Draw(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double Cents(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

int PeriodLabeling::EffectivePeriod(const MilpInstance& inst, int var) const {
  if (period_of[var] >= 0) return period_of[var];
  return inst.variables[var].IsDiscrete() ? horizon - 1 : -1;
}

PeriodLabeling InferPeriods(const MilpInstance& inst,
                            const std::optional<std::vector<int>>& seeds) {
  const int n = inst.num_variables();
  if (inst.NumDiscrete() == 0) {
    throw StructuralError("period inference needs at least one discrete variable");
  }
  // Discrete members per constraint, and constraints per discrete variable.
  std::vector<std::vector<int>> members(inst.num_constraints());
  std::vector<std::vector<int>> rows_of(n);
  for (int i = 0; i < inst.num_constraints(); ++i) {
    for (const Term& t : inst.constraints[i].terms) {
      if (t.var < 0 || t.var >= n) {
        throw StructuralError("constraint references variable out of range");
      }
      if (!inst.variables[t.var].IsDiscrete()) continue;
      members[i].push_back(t.var);
      rows_of[t.var].push_back(i);
    }
  }

  std::vector<int> start;
  if (seeds.has_value()) {
    for (int v : *seeds) {
      if (v < 0 || v >= n || !inst.variables[v].IsDiscrete()) {
        throw StructuralError("period seed " + std::to_string(v) +
                              " is not a discrete variable");
      }
      start.push_back(v);
    }
  } else {
    for (const auto& m : members) {
      if (!m.empty()) {
        start = m;
        break;
      }
    }
  }

  PeriodLabeling labels;
  labels.period_of.assign(n, -1);
  std::vector<bool> expanded(inst.num_constraints(), false);
  std::deque<int> queue;
  for (int v : start) {
    if (labels.period_of[v] < 0) {
      labels.period_of[v] = 0;
      queue.push_back(v);
    }
  }
  int deepest = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    const int next = labels.period_of[v] + 1;
    for (int row : rows_of[v]) {
      if (expanded[row]) continue;
      expanded[row] = true;
      for (int u : members[row]) {
        if (labels.period_of[u] >= 0) continue;
        labels.period_of[u] = next;
        deepest = std::max(deepest, next);
        queue.push_back(u);
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (inst.variables[v].IsDiscrete() && labels.period_of[v] < 0) {
      labels.unlabeled.push_back(v);
    }
  }
  labels.horizon = deepest + 1;
  return labels;
}

LotSizingProfile LotSizingProfile::FromConfig(const Config& config) {
  LotSizingProfile p;
  p.n_facilities = static_cast<int>(config.GetInt("n_facilities", p.n_facilities));
  p.demand_min = config.GetDouble("demand_min", p.demand_min);
  p.demand_max = config.GetDouble("demand_max", p.demand_max);
  p.setup_cost_min = config.GetDouble("setup_cost_min", p.setup_cost_min);
  p.setup_cost_max = config.GetDouble("setup_cost_max", p.setup_cost_max);
  p.unit_cost_min = config.GetDouble("unit_cost_min", p.unit_cost_min);
  p.unit_cost_max = config.GetDouble("unit_cost_max", p.unit_cost_max);
  p.holding_cost_min = config.GetDouble("holding_cost_min", p.holding_cost_min);
  p.holding_cost_max = config.GetDouble("holding_cost_max", p.holding_cost_max);
  p.capacity_slack = config.GetDouble("capacity_slack", p.capacity_slack);
  p.crew_fraction = config.GetDouble("crew_fraction", p.crew_fraction);
  return p;
}

TemporalInstance GenerateLotSizing(uint64_t seed, int periods,
                                   const LotSizingProfile& profile) {
  const LotSizingProfile& p = profile;
  if (periods < 1) throw std::invalid_argument("lot sizing needs at least one period");
  if (p.n_facilities < 1 || !(p.demand_min > 0.0) || !(p.demand_max >= p.demand_min) ||
      !(p.setup_cost_min >= 0.0) || !(p.setup_cost_max >= p.setup_cost_min) ||
      !(p.unit_cost_max >= p.unit_cost_min) ||
      !(p.holding_cost_min > 0.0) || !(p.holding_cost_max >= p.holding_cost_min) ||
      !(p.capacity_slack >= 1.0) || !(p.crew_fraction >= 1.0)) {
    throw std::invalid_argument("inconsistent lot sizing profile");
  }
  const int nf = p.n_facilities;
  const int nt = periods;
  std::mt19937_64 rng(seed);

  std::vector<std::vector<double>> demand(nf, std::vector<double>(nt));
  std::vector<double> capacity(nf), holding(nf);
  std::vector<std::vector<double>> setup_cost(nf, std::vector<double>(nt));
  std::vector<std::vector<double>> unit_cost(nf, std::vector<double>(nt));
  for (int f = 0; f < nf; ++f) {
    for (int t = 0; t < nt; ++t) demand[f][t] = std::round(Draw(rng, p.demand_min, p.demand_max));
    double two_period = 0.0;
    for (int t = 0; t < nt; ++t) {
      two_period = std::max(two_period, demand[f][t] + (t + 1 < nt ? demand[f][t + 1] : 0.0));
    }
    capacity[f] = std::ceil(two_period * Draw(rng, 1.0, p.capacity_slack));
    holding[f] = Cents(Draw(rng, p.holding_cost_min, p.holding_cost_max));
    for (int t = 0; t < nt; ++t) {
      setup_cost[f][t] = std::round(Draw(rng, p.setup_cost_min, p.setup_cost_max));
      unit_cost[f][t] = Cents(Draw(rng, p.unit_cost_min, p.unit_cost_max));
    }
  }
  const double crews = std::ceil(p.crew_fraction * nf - 1e-9);

  TemporalInstance out;
  MilpInstance& m = out.milp;
  m.name = "lot_sizing";
  std::vector<std::vector<int>> y(nf, std::vector<int>(nt)), prod = y, stock = y;
  out.periods.period_of.clear();
  for (int t = 0; t < nt; ++t) {
    for (int f = 0; f < nf; ++f) {
      double remaining = 0.0;
      for (int u = t + 1; u < nt; ++u) remaining += demand[f][u];
      y[f][t] = m.num_variables();
      m.variables.push_back({Name("y", f, t), 0.0, 1.0, Integrality::kBinary});
      prod[f][t] = m.num_variables();
      m.variables.push_back({Name("p", f, t), 0.0, capacity[f], Integrality::kContinuous});
      stock[f][t] = m.num_variables();
      m.variables.push_back({Name("s", f, t), 0.0, remaining, Integrality::kContinuous});
      m.objective.terms.push_back({y[f][t], setup_cost[f][t]});
      m.objective.terms.push_back({prod[f][t], unit_cost[f][t]});
      m.objective.terms.push_back({stock[f][t], holding[f]});
      out.periods.period_of.insert(out.periods.period_of.end(), {t, -1, -1});
    }
  }
  for (int t = 0; t < nt; ++t) {
    LinearConstraint crew{"crew_" + std::to_string(t), {}, ConstraintSense::kLessEqual, crews};
    for (int f = 0; f < nf; ++f) {
      if (t > 0) crew.terms.push_back({y[f][t - 1], 1.0});
      crew.terms.push_back({y[f][t], 1.0});
    }
    m.constraints.push_back(std::move(crew));
    for (int f = 0; f < nf; ++f) {
      LinearConstraint bal{Name("bal", f, t), {}, ConstraintSense::kEqual, demand[f][t]};
      if (t > 0) bal.terms.push_back({stock[f][t - 1], 1.0});
      bal.terms.push_back({prod[f][t], 1.0});
      bal.terms.push_back({stock[f][t], -1.0});
      m.constraints.push_back(std::move(bal));
      // No period needs more than the demand left to the end of the horizon.
      double rest = 0.0;
      for (int u = t; u < nt; ++u) rest += demand[f][u];
      m.constraints.push_back({Name("setup", f, t),
                               {{prod[f][t], 1.0}, {y[f][t], -std::min(capacity[f], rest)}},
                               ConstraintSense::kLessEqual,
                               0.0});
    }
  }
  out.periods.horizon = nt;
  m.Validate();
  return out;
}

void HorizonSchedule::Validate(int horizon) const {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (steps.empty()) throw std::invalid_argument("schedule has no steps");
  if (!(growth >= 1.0)) throw std::invalid_argument("schedule growth must be at least 1");
  for (size_t k = 0; k < steps.size(); ++k) {
    const HorizonStep& s = steps[k];
    if (s.fix < 0 || s.fix > s.integral || s.integral > s.keep || s.keep > horizon) {
      throw std::invalid_argument("schedule step " + std::to_string(k) +
                                  " violates 0 <= fix <= integral <= keep <= H");
    }
    if (k > 0 && (s.fix <= steps[k - 1].fix || s.fix > steps[k - 1].integral)) {
      throw std::invalid_argument("schedule step " + std::to_string(k) +
                                  " does not advance from the previous step");
    }
  }
  if (steps.back().integral != horizon) {
    throw std::invalid_argument("last schedule step must make every period integral");
  }
}

HorizonSchedule HorizonSchedule::Default(int horizon, double initial_fraction,
                                         double growth) {
  if (horizon < 1 || !(initial_fraction > 0.0)) {
    throw std::invalid_argument("invalid default schedule parameters");
  }
  const int w = std::max(1, static_cast<int>(std::ceil(initial_fraction * horizon - 1e-9)));
  HorizonSchedule schedule;
  schedule.growth = growth;
  const int advance = std::max(1, w / 2);
  int fix = 0;
  while (true) {
    const int integral = std::min(horizon, fix + w);
    schedule.steps.push_back({fix, integral, std::min(horizon, integral + w)});
    if (integral == horizon) break;
    fix += advance;
  }
  schedule.Validate(horizon);
  return schedule;
}

HorizonSchedule HorizonSchedule::SingleStep(int horizon) {
  HorizonSchedule schedule;
  schedule.steps.push_back({horizon, horizon, horizon});
  schedule.Validate(horizon);
  return schedule;
}

SubMipSpec HorizonSubMipSpec(const MilpInstance& inst, const PeriodLabeling& labels,
                             const HorizonStep& step,
                             const std::vector<double>& previous) {
  if (static_cast<int>(labels.period_of.size()) != inst.num_variables()) {
    throw StructuralError("period labeling does not match the instance");
  }
  if (step.fix > 0 && static_cast<int>(previous.size()) != inst.num_variables()) {
    throw std::invalid_argument("fixing periods needs a previous solution");
  }
  SubMipSpec spec;
  std::vector<int> fixed;
  for (int v = 0; v < inst.num_variables(); ++v) {
    const int h = labels.EffectivePeriod(inst, v);
    if (h < 0) continue;
    if (h < step.fix) {
      fixed.push_back(v);
    } else if (h >= step.integral) {
      spec.relaxations.push_back(v);
    }
  }
  if (!fixed.empty()) FixToValues(inst, fixed, previous, &spec);
  for (int i = 0; i < inst.num_constraints(); ++i) {
    for (const Term& t : inst.constraints[i].terms) {
      if (labels.EffectivePeriod(inst, t.var) >= step.keep) {
        spec.dropped_constraints.push_back(i);
        break;
      }
    }
  }
  return spec;
}

namespace {

BnbResult SolveStep(const MilpInstance& inst, const PeriodLabeling& labels,
                    const HorizonStep& step, const std::vector<double>& previous,
                    const Budget& budget, const BnbOptions& base) {
  const MilpInstance sub = BuildSubMip(inst, HorizonSubMipSpec(inst, labels, step, previous));
  BnbOptions options = base;
  options.start.reset();
  options.on_incumbent = nullptr;
  if (!previous.empty() &&
      CheckFeasibility(sub, previous, options.tol_feas, options.tol_int).feasible) {
    options.start = MakeCertifiedSolution(sub, previous, options.tol_feas, options.tol_int);
  }
  return SolveBnb(sub, options, budget);
}

}  // namespace

RollingHorizonResult RollingHorizon(const MilpInstance& inst, const PeriodLabeling& labels,
                                    const HorizonSchedule& schedule, const Budget& budget,
                                    const BnbOptions& bnb) {
  const int horizon = labels.horizon;
  schedule.Validate(horizon);
  if (static_cast<int>(labels.period_of.size()) != inst.num_variables()) {
    throw StructuralError("period labeling does not match the instance");
  }
  RollingHorizonResult result;
  auto offer = [&](const std::vector<double>& values) {
    Solution sol = MakeCertifiedSolution(inst, values, bnb.tol_feas, bnb.tol_int);
    if (sol.feasible != FeasibilityStatus::kFeasible) return false;
    result.trajectory.Record(budget.Elapsed(), sol.objective, "rolling_horizon");
    if (!result.solution || sol.objective < result.solution->objective) {
      result.solution = std::move(sol);
    }
    return true;
  };

  const int n_steps = static_cast<int>(schedule.steps.size());
  std::vector<double> previous;
  bool last_feasible = false;
  for (int k = 0; k < n_steps; ++k) {
    HorizonStep step = schedule.steps[k];
    // The first step has no earlier solution to fix to.
    if (k == 0) step.fix = 0;
    HorizonStepReport report;
    report.step = step;
    BnbResult bnb_result = SolveStep(inst, labels, step, previous,
                                     budget.Slice(1.0 / (n_steps - k)), bnb);
    if (!bnb_result.has_incumbent() && step.keep < horizon) {
      const int span = step.keep - step.fix;
      step.keep = std::min(horizon, std::max(step.keep + 1,
                                             step.fix + static_cast<int>(std::ceil(
                                                            schedule.growth * span - 1e-9))));
      report.step = step;
      report.widened = true;
      bnb_result = SolveStep(inst, labels, step, previous,
                             budget.Slice(1.0 / (n_steps - k)), bnb);
    }
    report.status = bnb_result.status;
    report.nodes = bnb_result.nodes;
    if (!bnb_result.has_incumbent()) {
      report.objective = std::nan("");
      result.steps.push_back(report);
      result.aborted = true;
      return result;
    }
    report.objective = bnb_result.incumbent->objective;
    result.steps.push_back(report);
    previous = bnb_result.incumbent->values;
    result.committed = step.integral;
    last_feasible = offer(previous);
  }

  if (!last_feasible) {
    // Free the periods fixed during the last two steps and solve the rest.
    HorizonStep repair{0, horizon, horizon};
    if (n_steps >= 3) repair.fix = schedule.steps[n_steps - 2].fix;
    const MilpInstance sub =
        BuildSubMip(inst, HorizonSubMipSpec(inst, labels, repair, previous));
    BnbOptions options = bnb;
    options.start.reset();
    options.on_incumbent = nullptr;
    const BnbResult fixed = SolveBnb(sub, options, budget.Slice(1.0));
    result.repaired = true;
    if (fixed.has_incumbent()) offer(fixed.incumbent->values);
  }
  return result;
}

int RensFixHorizon(int horizon) {
  return static_cast<int>(std::floor(0.9 * horizon + 1e-9));
}

RensResult RensImprove(const MilpInstance& inst, const PeriodLabeling& labels,
                       const Solution& incumbent, const Budget& budget,
                       const BnbOptions& bnb) {
  if (static_cast<int>(labels.period_of.size()) != inst.num_variables()) {
    throw StructuralError("period labeling does not match the instance");
  }
  if (incumbent.values.size() != inst.variables.size() ||
      !CheckFeasibility(inst, incumbent.values, bnb.tol_feas, bnb.tol_int).feasible) {
    throw std::invalid_argument("RENS needs a feasible incumbent");
  }
  RensResult result;
  result.solution = MakeCertifiedSolution(inst, incumbent.values, bnb.tol_feas, bnb.tol_int);
  const int cut = RensFixHorizon(labels.horizon);
  std::vector<int> fixed;
  for (int v = 0; v < inst.num_variables(); ++v) {
    const int h = labels.EffectivePeriod(inst, v);
    if (h >= 0 && h < cut) fixed.push_back(v);
  }
  result.fixed = static_cast<int>(fixed.size());
  if (budget.Exhausted()) return result;

  SubMipSpec spec;
  FixToValues(inst, fixed, incumbent.values, &spec);
  const MilpInstance sub = BuildSubMip(inst, spec);
  BnbOptions options = bnb;
  options.on_incumbent = nullptr;
  options.start.reset();
  if (CheckFeasibility(sub, incumbent.values, bnb.tol_feas, bnb.tol_int).feasible) {
    options.start = MakeCertifiedSolution(sub, incumbent.values, bnb.tol_feas, bnb.tol_int);
  }
  const BnbResult sub_result = SolveBnb(sub, options, budget);
  result.status = sub_result.status;
  if (!sub_result.has_incumbent()) return result;
  Solution candidate =
      MakeCertifiedSolution(inst, sub_result.incumbent->values, bnb.tol_feas, bnb.tol_int);
  if (candidate.feasible == FeasibilityStatus::kFeasible &&
      candidate.objective < result.solution.objective - 1e-9) {
    result.solution = std::move(candidate);
    result.improved = true;
  }
  return result;
}

}  // namespace primalkit
