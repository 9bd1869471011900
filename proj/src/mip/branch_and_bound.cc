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

#include "primalkit/mip/branch_and_bound.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

namespace primalkit {
namespace {

// Root-level elimination of columns whose bounds coincide.
struct Reduction {
  bool infeasible = false;
  MilpInstance reduced;
  std::vector<int> to_reduced;  // -1 for eliminated columns
  std::vector<int> to_original;
  std::vector<double> fixed_value;

  std::vector<double> Expand(std::span<const double> x) const {
    std::vector<double> out = fixed_value;
    for (size_t k = 0; k < to_original.size(); ++k) out[to_original[k]] = x[k];
    return out;
  }
};

Reduction EliminateFixedColumns(const MilpInstance& inst, double tol_feas) {
  Reduction r;
  const int n = inst.num_variables();
  std::vector<double> lo(n), up(n);
  for (int j = 0; j < n; ++j) {
    const VariableDef& v = inst.variables[j];
    lo[j] = v.lower;
    up[j] = v.upper;
    if (v.IsDiscrete()) {
      lo[j] = std::ceil(lo[j] - kIntegralityTolerance);
      up[j] = std::floor(up[j] + kIntegralityTolerance);
    }
    if (lo[j] > up[j]) r.infeasible = true;
  }
  // A member that cannot be zero forces the rest of its SOS1 set to zero.
  for (const LinearConstraint& c : inst.constraints) {
    if (!c.IsSos1()) continue;
    int forced = -1;
    for (const Term& t : c.terms) {
      if (lo[t.var] > 0.0 || up[t.var] < 0.0) {
        if (forced >= 0) r.infeasible = true;
        forced = t.var;
      }
    }
    if (forced < 0) continue;
    for (const Term& t : c.terms) {
      if (t.var != forced) lo[t.var] = up[t.var] = 0.0;
    }
  }
  if (r.infeasible) return r;

  r.to_reduced.assign(n, -1);
  r.fixed_value.assign(n, 0.0);
  r.reduced.name = inst.name;
  for (int j = 0; j < n; ++j) {
    if (lo[j] == up[j]) {
      r.fixed_value[j] = lo[j];
      continue;
    }
    r.to_reduced[j] = static_cast<int>(r.to_original.size());
    r.to_original.push_back(j);
    VariableDef v = inst.variables[j];
    v.lower = lo[j];
    v.upper = up[j];
    r.reduced.variables.push_back(std::move(v));
  }
  for (const LinearConstraint& c : inst.constraints) {
    LinearConstraint row;
    row.name = c.name;
    row.sense = c.sense;
    row.sos1_group = c.sos1_group;
    double shift = 0.0;
    for (const Term& t : c.terms) {
      const int k = r.to_reduced[t.var];
      if (k >= 0) {
        row.terms.push_back({k, t.coef});
      } else {
        shift += t.coef * r.fixed_value[t.var];
      }
    }
    if (c.IsSos1()) {
      if (row.terms.size() >= 2) r.reduced.constraints.push_back(std::move(row));
      continue;
    }
    row.rhs = c.rhs - shift;
    if (row.terms.empty()) {
      const double allowed = tol_feas * (1 + std::abs(c.rhs));
      const bool ok = c.sense == ConstraintSense::kLessEqual   ? -row.rhs <= allowed
                      : c.sense == ConstraintSense::kGreaterEqual ? row.rhs <= allowed
                                                                   : std::abs(row.rhs) <= allowed;
      if (!ok) {
        r.infeasible = true;
        return r;
      }
      continue;
    }
    r.reduced.constraints.push_back(std::move(row));
  }
  r.reduced.objective.offset = inst.objective.offset;
  for (const Term& t : inst.objective.terms) {
    const int k = r.to_reduced[t.var];
    if (k >= 0) {
      r.reduced.objective.terms.push_back({k, t.coef});
    } else {
      r.reduced.objective.offset += t.coef * r.fixed_value[t.var];
    }
  }
  return r;
}

struct Node {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<BasisStatus> basis;
  double bound;
  int64_t id;
};

// Heap order: smallest bound on top, then oldest node.
struct WorseNode {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

class Search {
 public:
  Search(const MilpInstance& inst, const BnbOptions& options, const Budget& budget,
         BnbResult* result)
      : inst_(inst), opt_(options), budget_(budget), result_(result) {}

  void Run() {
    if (opt_.start) AcceptStart(*opt_.start);
    red_ = EliminateFixedColumns(inst_, opt_.tol_feas);
    if (red_.infeasible) {
      Finish(/*exhausted=*/true);
      return;
    }
    work_ = red_.reduced;
    integral_objective_ = std::all_of(
        inst_.objective.terms.begin(), inst_.objective.terms.end(), [&](const Term& t) {
          return inst_.variables[t.var].IsDiscrete() && t.coef == std::round(t.coef);
        });
    Node root;
    for (const VariableDef& v : work_.variables) {
      root.lower.push_back(v.lower);
      root.upper.push_back(v.upper);
    }
    root.bound = -kInfinity;
    root.id = next_id_++;
    Push(std::move(root));

    bool exhausted = false;
    while (true) {
      if (open_.empty()) {
        exhausted = true;
        break;
      }
      if (GapClosed() || result_->nodes >= opt_.node_limit || budget_.Exhausted()) {
        break;
      }
      Node node = Pop();
      if (!Process(std::move(node))) break;
      UpdateDualBound();
    }
    Finish(exhausted);
  }

 private:
  double IncumbentValue() const {
    return result_->incumbent ? result_->incumbent->objective : kInfinity;
  }

  double GapTolerance() const {
    const double inc = IncumbentValue();
    return opt_.gap_limit * std::max(1.0, std::abs(inc));
  }

  bool GapClosed() const {
    if (!result_->incumbent) return false;
    return IncumbentValue() - best_dual_ <= GapTolerance();
  }

  void AcceptStart(const Solution& start) {
    const FeasibilityReport report =
        CheckFeasibility(inst_, start.values, opt_.tol_feas, opt_.tol_int);
    if (!report.feasible) {
      throw std::invalid_argument("start solution is infeasible (max violation " +
                                  std::to_string(report.MaxViolation()) + ")");
    }
    SetIncumbent(start.values);
  }

  void SetIncumbent(std::vector<double> values) {
    Solution sol;
    sol.objective = EvaluateObjective(inst_, values);
    sol.values = std::move(values);
    sol.feasible = FeasibilityStatus::kFeasible;
    result_->incumbent = std::move(sol);
    result_->incumbent_history.push_back({budget_.Elapsed(), result_->incumbent->objective});
    if (opt_.on_incumbent) opt_.on_incumbent(*result_->incumbent);
  }

  // The first integral node found by the search ends the dive and enables
  // pruning. A start solution alone does neither, so a run with a start
  // processes a subsequence of the nodes of the same run without it.
  void EndDive() {
    if (heap_mode_) return;
    heap_mode_ = true;
    std::make_heap(open_.begin(), open_.end(), WorseNode());
  }

  // Certifies a relaxation point against the original instance. Returns false
  // when neither the rounded nor the raw point is feasible.
  bool TryIncumbent(std::span<const double> reduced_values) {
    std::vector<double> raw = red_.Expand(reduced_values);
    std::vector<double> rounded = raw;
    RoundDiscrete(inst_, rounded);
    for (std::vector<double>* cand : {&rounded, &raw}) {
      if (!CheckFeasibility(inst_, *cand, opt_.tol_feas, opt_.tol_int).feasible) continue;
      if (EvaluateObjective(inst_, *cand) < IncumbentValue()) {
        SetIncumbent(std::move(*cand));
      }
      EndDive();
      return true;
    }
    return false;
  }

  void Push(Node node) {
    open_bounds_.insert(node.bound);
    open_.push_back(std::move(node));
    if (heap_mode_) std::push_heap(open_.begin(), open_.end(), WorseNode());
  }

  Node Pop() {
    if (heap_mode_) std::pop_heap(open_.begin(), open_.end(), WorseNode());
    Node node = std::move(open_.back());
    open_.pop_back();
    open_bounds_.erase(open_bounds_.find(node.bound));
    return node;
  }

  // With integer objective coefficients on discrete variables only, every
  // feasible objective lies on offset + Z, so LP bounds can be rounded up.
  double RoundBound(double bound) const {
    if (!integral_objective_) return bound;
    const double offset = inst_.objective.offset;
    const double slack = 1e-6 * std::max(1.0, std::abs(bound));
    return offset + std::ceil(bound - offset - slack);
  }

  bool Prunable(double bound) {
    if (!heap_mode_) return false;
    const double inc = IncumbentValue();
    if (bound >= inc - 1e-9 * (1 + std::abs(inc))) return true;
    if (bound >= inc - GapTolerance()) {
      pruned_bound_ = std::min(pruned_bound_, bound);
      return true;
    }
    return false;
  }

  // Returns false when the search must stop (budget exhausted mid-LP).
  bool Process(Node node) {
    if (Prunable(node.bound)) return true;
    budget_.Charge(1);
    ++result_->nodes;
    for (size_t k = 0; k < node.lower.size(); ++k) {
      work_.variables[k].lower = node.lower[k];
      work_.variables[k].upper = node.upper[k];
    }
    const LpSolution lp = SolveLp(work_, opt_.lp, node.basis, budget_);
    switch (lp.status) {
      case LpStatus::kInfeasible:
        return true;
      case LpStatus::kIterationLimit:
        if (budget_.Exhausted()) {
          Push(std::move(node));
          return false;
        }
        unresolved_bound_ = std::min(unresolved_bound_, node.bound);
        return true;
      case LpStatus::kUnbounded:
        unresolved_bound_ = -kInfinity;
        return true;
      case LpStatus::kNumericalFailure:
        unresolved_bound_ = std::min(unresolved_bound_, node.bound);
        return true;
      case LpStatus::kOptimal:
        break;
    }
    const double bound = std::max(node.bound, RoundBound(lp.objective));
    if (Prunable(bound)) return true;

    if (BranchOnSos(node, lp, bound)) return true;
    int var = MostFractional(lp.values, opt_.tol_int);
    if (var < 0) {
      if (TryIncumbent(lp.values)) return true;
      var = MostFractional(lp.values, 1e-12);
      if (var < 0) {
        unresolved_bound_ = std::min(unresolved_bound_, bound);
        return true;
      }
    }
    const double x = lp.values[var];
    Node down{node.lower, node.upper, lp.basis, bound, 0};
    Node up{std::move(node.lower), std::move(node.upper), lp.basis, bound, 0};
    down.upper[var] = std::floor(x);
    up.lower[var] = std::ceil(x);
    // The preferred child gets the smaller id and, while diving, is pushed
    // last so it is popped first.
    Node& first = opt_.up_branch_first ? up : down;
    Node& second = opt_.up_branch_first ? down : up;
    first.id = next_id_++;
    second.id = next_id_++;
    Push(std::move(second));
    Push(std::move(first));
    return true;
  }

  int MostFractional(const std::vector<double>& x, double tol) const {
    int best = -1;
    double best_frac = tol;
    for (int j = 0; j < work_.num_variables(); ++j) {
      if (!work_.variables[j].IsDiscrete()) continue;
      const double frac = std::abs(x[j] - std::round(x[j]));
      if (frac > best_frac) {
        best_frac = frac;
        best = j;
      }
    }
    return best;
  }

  bool BranchOnSos(Node& node, const LpSolution& lp, double bound) {
    for (const LinearConstraint& c : work_.constraints) {
      if (!c.IsSos1()) continue;
      std::vector<Term> members = c.terms;
      std::stable_sort(members.begin(), members.end(),
                       [](const Term& a, const Term& b) { return a.coef < b.coef; });
      int first = -1, last = -1;
      for (int p = 0; p < static_cast<int>(members.size()); ++p) {
        if (std::abs(lp.values[members[p].var]) > opt_.tol_feas) {
          if (first < 0) first = p;
          last = p;
        }
      }
      if (first < 0 || first == last) continue;
      const int split = (first + last) / 2;
      auto child = [&](int from, int to) -> std::optional<Node> {
        Node n{node.lower, node.upper, lp.basis, bound, next_id_++};
        for (int p = from; p < to; ++p) {
          const int v = members[p].var;
          if (n.lower[v] > 0.0 || n.upper[v] < 0.0) return std::nullopt;
          n.lower[v] = n.upper[v] = 0.0;
        }
        return n;
      };
      std::optional<Node> left = child(split + 1, static_cast<int>(members.size()));
      std::optional<Node> right = child(0, split + 1);
      if (right) Push(std::move(*right));
      if (left) Push(std::move(*left));
      return true;
    }
    return false;
  }

  double CurrentDualBound() const {
    double d = std::min(unresolved_bound_, pruned_bound_);
    if (!open_bounds_.empty()) d = std::min(d, *open_bounds_.begin());
    return std::min(d, IncumbentValue());
  }

  void UpdateDualBound() {
    const double d = CurrentDualBound();
    if (d > best_dual_) {
      best_dual_ = d;
      result_->dual_history.push_back({budget_.Elapsed(), d});
    }
  }

  void Finish(bool exhausted) {
    UpdateDualBound();
    const bool complete = exhausted && unresolved_bound_ == kInfinity;
    if (complete || GapClosed()) {
      result_->status = result_->incumbent ? BnbStatus::kOptimal : BnbStatus::kInfeasible;
    } else {
      result_->status = result_->incumbent ? BnbStatus::kFeasibleLimit
                                           : BnbStatus::kNoSolutionLimit;
    }
    result_->dual_bound = std::min(best_dual_, IncumbentValue());
  }

  const MilpInstance& inst_;
  const BnbOptions& opt_;
  const Budget& budget_;
  BnbResult* result_;

  Reduction red_;
  MilpInstance work_;
  std::vector<Node> open_;
  std::multiset<double> open_bounds_;
  bool heap_mode_ = false;
  bool integral_objective_ = false;
  int64_t next_id_ = 0;
  double unresolved_bound_ = kInfinity;
  double pruned_bound_ = kInfinity;
  double best_dual_ = -kInfinity;
};

}  // namespace

BnbResult SolveBnb(const MilpInstance& inst, const BnbOptions& options,
                   const Budget& budget) {
  const auto start = std::chrono::steady_clock::now();
  inst.Validate();
  BnbResult result;
  Search(inst, options, budget, &result).Run();
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string_view ToString(BnbStatus status) {
  switch (status) {
    case BnbStatus::kOptimal:
      return "optimal";
    case BnbStatus::kFeasibleLimit:
      return "feasible_limit";
    case BnbStatus::kInfeasible:
      return "infeasible";
    case BnbStatus::kNoSolutionLimit:
      return "no_solution_limit";
  }
  return "?";
}

}  // namespace primalkit
