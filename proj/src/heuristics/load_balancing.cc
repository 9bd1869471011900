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
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "primalkit/mip/submip.h"

namespace primalkit {
namespace {

std::string XName(int task, int machine) {
  return "x_" + std::to_string(task) + "_" + std::to_string(machine);
}

// Parses "<prefix>_<a>" or "<prefix>_<a>_<b>"; returns the numbers found.
std::optional<std::vector<int>> ParseIndices(const std::string& name,
                                             const std::string& prefix, size_t count) {
  if (name.rfind(prefix + "_", 0) != 0) return std::nullopt;
  std::vector<int> out;
  size_t pos = prefix.size() + 1;
  while (pos <= name.size()) {
    const size_t end = std::min(name.find('_', pos), name.size());
    if (end == pos) return std::nullopt;
    int v = 0;
    for (size_t c = pos; c < end; ++c) {
      if (name[c] < '0' || name[c] > '9') return std::nullopt;
      v = v * 10 + (name[c] - '0');
    }
    out.push_back(v);
    pos = end + 1;
  }
  if (out.size() != count) return std::nullopt;
  return out;
}

bool Fractional(double v, double tol_int) { return v > tol_int && v < 1.0 - tol_int; }

}  // namespace

LoadBalancingProfile LoadBalancingProfile::FromConfig(const Config& config) {
  LoadBalancingProfile p;
  p.n_tasks = static_cast<int>(config.GetInt("n_tasks", p.n_tasks));
  p.n_machines = static_cast<int>(config.GetInt("n_machines", p.n_machines));
  p.min_access = static_cast<int>(config.GetInt("min_access", p.min_access));
  p.max_access = static_cast<int>(config.GetInt("max_access", p.max_access));
  p.demand_min = config.GetDouble("demand_min", p.demand_min);
  p.demand_max = config.GetDouble("demand_max", p.demand_max);
  p.capacity_min = config.GetDouble("capacity_min", p.capacity_min);
  p.capacity_max = config.GetDouble("capacity_max", p.capacity_max);
  return p;
}

void LoadBalancingInstance::Validate() const {
  if (n_tasks < 1 || n_machines < 2) {
    throw StructuralError("load balancing needs a task and at least two machines");
  }
  if (static_cast<int>(access.size()) != n_tasks || static_cast<int>(a.size()) != n_tasks ||
      static_cast<int>(b.size()) != n_machines) {
    throw StructuralError("load balancing data has inconsistent lengths");
  }
  for (int i = 0; i < n_tasks; ++i) {
    const auto& s = access[i];
    if (s.size() < 2) {
      throw StructuralError("task " + std::to_string(i) + " has fewer than two machines");
    }
    for (size_t k = 0; k < s.size(); ++k) {
      if (s[k] < 0 || s[k] >= n_machines || (k > 0 && s[k] <= s[k - 1])) {
        throw StructuralError("task " + std::to_string(i) +
                              " has an unsorted or invalid machine set");
      }
    }
    if (!(a[i] > 0.0)) throw StructuralError("task demands must be positive");
  }
  for (double cap : b) {
    if (!(cap > 0.0)) throw StructuralError("machine capacities must be positive");
  }
}

LoadBalancingLayout::LoadBalancingLayout(const LoadBalancingInstance& inst) {
  x_offset.resize(inst.n_tasks);
  int next = 0;
  for (int i = 0; i < inst.n_tasks; ++i) {
    x_offset[i] = next;
    next += static_cast<int>(inst.access[i].size());
  }
  y_offset = next;
}

LoadBalancingInstance GenerateLoadBalancing(uint64_t seed,
                                            const LoadBalancingProfile& profile) {
  const LoadBalancingProfile& p = profile;
  if (p.n_tasks < 1 || p.n_machines < 2 || p.min_access < 2 ||
      p.max_access < p.min_access || !(p.demand_min > 0.0) ||
      !(p.demand_max >= p.demand_min) || !(p.capacity_min > p.demand_max) ||
      !(p.capacity_max >= p.capacity_min)) {
    throw std::invalid_argument("inconsistent load balancing profile");
  }
  std::mt19937_64 rng(seed);
  LoadBalancingInstance inst;
  inst.n_tasks = p.n_tasks;
  inst.n_machines = p.n_machines;
  const int lo = std::min(p.min_access, p.n_machines);
  const int hi = std::min(p.max_access, p.n_machines);
  std::vector<int> machines(p.n_machines);
  for (int i = 0; i < p.n_tasks; ++i) {
    const int k = std::uniform_int_distribution<int>(lo, hi)(rng);
    std::iota(machines.begin(), machines.end(), 0);
    for (int s = 0; s < k; ++s) {
      std::swap(machines[s],
                machines[std::uniform_int_distribution<int>(s, p.n_machines - 1)(rng)]);
    }
    std::vector<int> set(machines.begin(), machines.begin() + k);
    std::sort(set.begin(), set.end());
    inst.access.push_back(std::move(set));
    inst.a.push_back(std::uniform_real_distribution<double>(p.demand_min, p.demand_max)(rng));
  }
  std::uniform_real_distribution<double> capacity(p.capacity_min, p.capacity_max);
  for (int j = 0; j < p.n_machines; ++j) inst.b.push_back(capacity(rng));

  // With every machine open, spreading a_i / (|N^i| - 1) onto each accessible
  // machine survives any single failure; make sure capacities allow it.
  std::vector<double> even_load(p.n_machines, 0.0);
  for (int i = 0; i < p.n_tasks; ++i) {
    for (int j : inst.access[i]) even_load[j] += inst.a[i] / (inst.access[i].size() - 1);
  }
  for (int j = 0; j < p.n_machines; ++j) {
    inst.b[j] = std::max(inst.b[j], even_load[j] * (1 + 1e-6));
  }
  inst.Validate();
  return inst;
}

MilpInstance ToMilp(const LoadBalancingInstance& inst, bool tightened) {
  inst.Validate();
  const LoadBalancingLayout layout(inst);
  MilpInstance m;
  m.name = tightened ? "load_balancing_tightened" : "load_balancing";
  std::vector<std::vector<Term>> machine_terms(inst.n_machines);
  for (int i = 0; i < inst.n_tasks; ++i) {
    for (size_t s = 0; s < inst.access[i].size(); ++s) {
      const int j = inst.access[i][s];
      m.variables.push_back({XName(i, j), 0.0, inst.b[j], Integrality::kContinuous});
      machine_terms[j].push_back({layout.X(i, static_cast<int>(s)), 1.0});
    }
  }
  for (int j = 0; j < inst.n_machines; ++j) {
    m.variables.push_back({"y_" + std::to_string(j), 0.0, 1.0, Integrality::kBinary});
    m.objective.terms.push_back({layout.Y(j), 1.0});
  }
  if (!tightened) {
    for (int i = 0; i < inst.n_tasks; ++i) {
      for (size_t s = 0; s < inst.access[i].size(); ++s) {
        const int j = inst.access[i][s];
        LinearConstraint row;
        row.name = "link_" + std::to_string(i) + "_" + std::to_string(j);
        row.terms = {{layout.X(i, static_cast<int>(s)), 1.0}, {layout.Y(j), -inst.a[i]}};
        row.sense = ConstraintSense::kLessEqual;
        m.constraints.push_back(std::move(row));
      }
    }
  }
  for (int j = 0; j < inst.n_machines; ++j) {
    if (machine_terms[j].empty()) continue;
    LinearConstraint row;
    row.name = "cap_" + std::to_string(j);
    row.terms = machine_terms[j];
    row.sense = ConstraintSense::kLessEqual;
    if (tightened) {
      row.terms.push_back({layout.Y(j), -inst.b[j]});
    } else {
      row.rhs = inst.b[j];
    }
    m.constraints.push_back(std::move(row));
  }
  for (int i = 0; i < inst.n_tasks; ++i) {
    for (int failed : inst.access[i]) {
      LinearConstraint row;
      row.name = "robust_" + std::to_string(i) + "_" + std::to_string(failed);
      for (size_t s = 0; s < inst.access[i].size(); ++s) {
        if (inst.access[i][s] != failed) {
          row.terms.push_back({layout.X(i, static_cast<int>(s)), 1.0});
        }
      }
      row.sense = ConstraintSense::kGreaterEqual;
      row.rhs = inst.a[i];
      m.constraints.push_back(std::move(row));
    }
  }
  return m;
}

std::optional<LoadBalancingInstance> LoadBalancingFromMilp(const MilpInstance& milp) {
  LoadBalancingInstance inst;
  std::map<int, std::vector<int>> access;
  std::map<int, int> y_var;  // machine -> variable
  for (int v = 0; v < milp.num_variables(); ++v) {
    const std::string& name = milp.variables[v].name;
    if (auto xy = ParseIndices(name, "x", 2)) {
      access[(*xy)[0]].push_back((*xy)[1]);
    } else if (auto y = ParseIndices(name, "y", 1)) {
      if (!milp.variables[v].IsDiscrete()) return std::nullopt;
      y_var[(*y)[0]] = v;
    } else {
      return std::nullopt;
    }
  }
  if (access.empty() || y_var.empty()) return std::nullopt;
  inst.n_tasks = access.rbegin()->first + 1;
  inst.n_machines = y_var.rbegin()->first + 1;
  if (static_cast<int>(access.size()) != inst.n_tasks ||
      static_cast<int>(y_var.size()) != inst.n_machines) {
    return std::nullopt;
  }
  inst.access.resize(inst.n_tasks);
  for (auto& [i, set] : access) {
    std::sort(set.begin(), set.end());
    inst.access[i] = set;
  }
  inst.a.assign(inst.n_tasks, 0.0);
  inst.b.assign(inst.n_machines, 1.0);
  for (const LinearConstraint& c : milp.constraints) {
    if (auto r = ParseIndices(c.name, "robust", 2)) {
      if ((*r)[0] >= inst.n_tasks) return std::nullopt;
      inst.a[(*r)[0]] = c.rhs;
    } else if (auto cap = ParseIndices(c.name, "cap", 1)) {
      const int j = (*cap)[0];
      if (j >= inst.n_machines) return std::nullopt;
      double y_coef = 0.0;
      for (const Term& t : c.terms) {
        if (t.var == y_var[j]) y_coef = t.coef;
      }
      inst.b[j] = y_coef != 0.0 ? -y_coef : c.rhs;
    } else if (!ParseIndices(c.name, "link", 2)) {
      return std::nullopt;
    }
  }
  try {
    inst.Validate();
  } catch (const StructuralError&) {
    return std::nullopt;
  }
  // The layout must match the one ToMilp produces.
  const LoadBalancingLayout layout(inst);
  for (int i = 0; i < inst.n_tasks; ++i) {
    for (size_t s = 0; s < inst.access[i].size(); ++s) {
      if (milp.variables[layout.X(i, static_cast<int>(s))].name !=
          XName(i, inst.access[i][s])) {
        return std::nullopt;
      }
    }
  }
  for (int j = 0; j < inst.n_machines; ++j) {
    if (y_var[j] != layout.Y(j)) return std::nullopt;
  }
  return inst;
}

Solution RoundUpAll(const LoadBalancingInstance& inst, const LpSolution& lp,
                    double tol_int) {
  if (!lp.optimal()) throw std::invalid_argument("rounding needs an optimal LP solution");
  const LoadBalancingLayout layout(inst);
  std::vector<double> values = lp.values;
  std::vector<bool> open(inst.n_machines, false);
  for (int j = 0; j < inst.n_machines; ++j) open[j] = values[layout.Y(j)] > tol_int;
  for (int i = 0; i < inst.n_tasks; ++i) {
    for (size_t s = 0; s < inst.access[i].size(); ++s) {
      if (values[layout.X(i, static_cast<int>(s))] > kFeasibilityTolerance) {
        open[inst.access[i][s]] = true;
      }
    }
  }
  for (int i = 0; i < inst.n_tasks; ++i) {
    for (size_t s = 0; s < inst.access[i].size(); ++s) {
      double& x = values[layout.X(i, static_cast<int>(s))];
      x = std::clamp(x, 0.0, inst.a[i]);
    }
  }
  for (int j = 0; j < inst.n_machines; ++j) values[layout.Y(j)] = open[j] ? 1.0 : 0.0;
  return MakeCertifiedSolution(ToMilp(inst, false), std::move(values));
}

std::optional<std::vector<double>> FlowsForOpenMachines(const LoadBalancingInstance& inst,
                                                        const std::vector<bool>& open,
                                                        const Budget& budget) {
  const LoadBalancingLayout layout(inst);
  // A task with a single open machine loses everything when it fails.
  for (int i = 0; i < inst.n_tasks; ++i) {
    int count = 0;
    for (int j : inst.access[i]) count += open[j];
    if (count < 2) return std::nullopt;
  }
  MilpInstance lp;
  lp.name = "flows";
  std::vector<int> full_index;
  std::vector<std::vector<Term>> machine_terms(inst.n_machines);
  std::vector<std::vector<std::pair<int, int>>> task_vars(inst.n_tasks);  // (machine, var)
  for (int i = 0; i < inst.n_tasks; ++i) {
    for (size_t s = 0; s < inst.access[i].size(); ++s) {
      const int j = inst.access[i][s];
      if (!open[j]) continue;
      const int v = lp.num_variables();
      lp.variables.push_back({XName(i, j), 0.0, std::min(inst.a[i], inst.b[j]),
                              Integrality::kContinuous});
      full_index.push_back(layout.X(i, static_cast<int>(s)));
      machine_terms[j].push_back({v, 1.0});
      task_vars[i].push_back({j, v});
    }
  }
  for (int j = 0; j < inst.n_machines; ++j) {
    if (machine_terms[j].empty()) continue;
    lp.constraints.push_back({"cap_" + std::to_string(j), machine_terms[j],
                              ConstraintSense::kLessEqual, inst.b[j]});
  }
  for (int i = 0; i < inst.n_tasks; ++i) {
    for (const auto& [failed, unused] : task_vars[i]) {
      LinearConstraint row{"robust_" + std::to_string(i) + "_" + std::to_string(failed),
                           {}, ConstraintSense::kGreaterEqual, inst.a[i]};
      for (const auto& [j, v] : task_vars[i]) {
        if (j != failed) row.terms.push_back({v, 1.0});
      }
      lp.constraints.push_back(std::move(row));
    }
  }
  const LpSolution sol = SolveLp(lp, {}, {}, budget);
  if (!sol.optimal()) return std::nullopt;
  std::vector<double> values(layout.y_offset + inst.n_machines, 0.0);
  for (size_t v = 0; v < full_index.size(); ++v) values[full_index[v]] = sol.values[v];
  for (int j = 0; j < inst.n_machines; ++j) values[layout.Y(j)] = open[j] ? 1.0 : 0.0;
  return values;
}

std::optional<Solution> QuantileRound(const LoadBalancingInstance& inst,
                                      const LpSolution& lp, int target, double tol_int) {
  const LoadBalancingLayout layout(inst);
  std::vector<bool> open(inst.n_machines, false);
  std::vector<int> fractional;
  int ones = 0;
  for (int j = 0; j < inst.n_machines; ++j) {
    const double y = lp.values[layout.Y(j)];
    if (y >= 1.0 - tol_int) {
      open[j] = true;
      ++ones;
    } else if (Fractional(y, tol_int)) {
      fractional.push_back(j);
    }
  }
  const int k = target - ones;
  if (k < 0 || k > static_cast<int>(fractional.size())) return std::nullopt;
  std::stable_sort(fractional.begin(), fractional.end(), [&](int p, int q) {
    return lp.values[layout.Y(p)] > lp.values[layout.Y(q)];
  });
  for (int r = 0; r < k; ++r) open[fractional[r]] = true;

  Solution sol;
  if (auto flows = FlowsForOpenMachines(inst, open)) {
    sol.values = std::move(*flows);
  } else {
    // No robust routing exists; hand back the rounded LP point so the caller
    // sees the violation when certifying.
    sol.values = lp.values;
    for (int j = 0; j < inst.n_machines; ++j) sol.values[layout.Y(j)] = open[j] ? 1.0 : 0.0;
  }
  sol.objective = target;
  sol.feasible = FeasibilityStatus::kUnchecked;
  return sol;
}

void RoundingConfig::Validate() const {
  if (!(rho >= 1.0) || !(gap_threshold > 0.0) || max_rounds < 0) {
    throw std::invalid_argument("rounding config needs rho >= 1 and gap_threshold > 0");
  }
}

RoundingConfig RoundingConfig::FromConfig(const Config& config) {
  RoundingConfig c;
  c.rho = config.GetDouble("rho", c.rho);
  c.gap_threshold = config.GetDouble("gap_threshold", c.gap_threshold);
  c.max_rounds = static_cast<int>(config.GetInt("max_rounds", c.max_rounds));
  c.Validate();
  return c;
}

std::optional<int> NextRoundingTarget(double primal, double dual, int failed, int lowest) {
  const int lo = std::max(lowest, failed + 1);
  const int hi = static_cast<int>(std::lround(primal)) - 1;
  if (lo > hi) return std::nullopt;
  return std::clamp(static_cast<int>(std::lround((primal + dual) / 2)), lo, hi);
}

AdaptiveRoundingResult AdaptiveRounding(const LoadBalancingInstance& inst,
                                        const RoundingConfig& config, const Budget& budget,
                                        const std::function<void(const Solution&)>& on_incumbent) {
  config.Validate();
  const MilpInstance original = ToMilp(inst, false);
  const MilpInstance tightened = ToMilp(inst, true);
  const LpSolution lp_original = SolveLp(original, {}, {}, budget);
  if (!lp_original.optimal()) {
    throw std::runtime_error("original root LP ended with status " +
                             std::string(ToString(lp_original.status)));
  }
  const LpSolution lp_tightened = SolveLp(tightened, {}, {}, budget);
  if (!lp_tightened.optimal()) {
    throw std::runtime_error("tightened root LP ended with status " +
                             std::string(ToString(lp_tightened.status)));
  }

  AdaptiveRoundingResult result;
  result.original_lp = lp_original.objective;
  result.tightened_lp = lp_tightened.objective;
  auto accept = [&](Solution sol, const char* source) {
    result.best = std::move(sol);
    result.primal_bound = result.best.objective;
    result.trajectory.Record(budget.Elapsed(), result.primal_bound, source);
    if (on_incumbent) on_incumbent(result.best);
  };

  const Solution up = RoundUpAll(inst, lp_original);
  result.round_up_objective = up.objective;
  accept(up, "round-up");
  const Solution up_tight = RoundUpAll(inst, lp_tightened);
  if (up_tight.feasible == FeasibilityStatus::kFeasible && up_tight.objective < up.objective) {
    accept(up_tight, "round-up");
  }

  const double lp_bound = std::max(lp_original.objective, lp_tightened.objective);
  const int lowest_target = static_cast<int>(std::ceil(lp_bound - 1e-6));
  result.dual_bound = config.rho * lp_bound;
  int failed = std::numeric_limits<int>::min();
  for (int round = 0;; ++round) {
    const double primal = result.primal_bound;
    if ((primal - result.dual_bound) / std::max(1.0, primal) < config.gap_threshold) break;
    if (round >= config.max_rounds) {
      result.hit_max_rounds = true;
      break;
    }
    if (budget.Exhausted()) break;
    const std::optional<int> next =
        NextRoundingTarget(primal, result.dual_bound, failed, lowest_target);
    if (!next) break;
    const int target = *next;

    bool feasible = false;
    for (const LpSolution* lp : {&lp_original, &lp_tightened}) {
      std::optional<Solution> rounded = QuantileRound(inst, *lp, target);
      if (!rounded) continue;
      Solution sol = MakeCertifiedSolution(original, std::move(rounded->values));
      if (sol.feasible == FeasibilityStatus::kFeasible) {
        accept(std::move(sol), "quantile-round");
        feasible = true;
        break;
      }
    }
    if (!feasible) {
      failed = target;
      result.dual_bound = std::max(result.dual_bound, static_cast<double>(target));
    }
    result.steps.push_back({target, feasible, result.primal_bound, result.dual_bound});
  }
  return result;
}

RinsResult RinsImprove(const LoadBalancingInstance& inst, const Solution& incumbent,
                       const Budget& budget, int64_t node_limit) {
  const MilpInstance original = ToMilp(inst, false);
  if (!CheckFeasibility(original, incumbent).feasible) {
    throw std::invalid_argument("RINS needs a feasible incumbent");
  }
  RinsResult result;
  result.solution = MakeCertifiedSolution(original, incumbent.values);
  const MilpInstance tightened = ToMilp(inst, true);
  const LpSolution lp = SolveLp(tightened, {}, {}, budget);
  if (!lp.optimal()) return result;

  const LoadBalancingLayout layout(inst);
  SubMipSpec spec;
  for (int j = 0; j < inst.n_machines; ++j) {
    const double inc = std::round(incumbent.values[layout.Y(j)]);
    if (std::abs(lp.values[layout.Y(j)] - inc) <= kIntegralityTolerance) {
      spec.fixings.push_back({layout.Y(j), inc});
    }
  }
  result.fixed = static_cast<int>(spec.fixings.size());
  const MilpInstance sub = BuildSubMip(tightened, spec);

  BnbOptions options;
  options.node_limit = node_limit;
  std::vector<double> start = incumbent.values;
  RoundDiscrete(sub, start);
  if (CheckFeasibility(sub, start).feasible) {
    options.start = MakeCertifiedSolution(sub, std::move(start));
  }
  const BnbResult bnb = SolveBnb(sub, options, budget);
  result.status = bnb.status;
  if (!bnb.has_incumbent() || bnb.incumbent->objective >= result.solution.objective - 0.5) {
    return result;
  }
  // The tightened model has no link rows; flows above a_i can be cut back
  // without breaking any robustness row.
  std::vector<double> values = bnb.incumbent->values;
  for (int i = 0; i < inst.n_tasks; ++i) {
    for (size_t s = 0; s < inst.access[i].size(); ++s) {
      double& x = values[layout.X(i, static_cast<int>(s))];
      x = values[layout.Y(inst.access[i][s])] > 0.5 ? std::clamp(x, 0.0, inst.a[i]) : 0.0;
    }
  }
  Solution improved = MakeCertifiedSolution(original, std::move(values));
  if (improved.feasible == FeasibilityStatus::kFeasible) {
    result.solution = std::move(improved);
    result.improved = true;
  }
  return result;
}

}  // namespace primalkit
