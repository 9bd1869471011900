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

#include "primalkit/lp/simplex.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "primalkit/kernels/vector_kernels.h"

namespace primalkit {
namespace {

constexpr double kDegenerateStep = 1e-12;
constexpr double kSingularPivot = 1e-11;

class DenseSimplex {
 public:
  DenseSimplex(const MilpInstance& inst, const LpOptions& options,
               const Budget& budget)
      : inst_(inst), opt_(options), budget_(budget) {
    n_ = inst.num_variables();
    for (int i = 0; i < inst.num_constraints(); ++i) {
      if (!inst.constraints[i].IsSos1()) rows_.push_back(i);
    }
    m_ = static_cast<int>(rows_.size());
    refactor_interval_ = opt_.refactor_interval > 0
                             ? opt_.refactor_interval
                             : std::max(100, m_);
    cols_ = n_ + m_;
    stride_ = cols_ + 1;
    lo_.resize(cols_);
    up_.resize(cols_);
    cost_.assign(cols_, 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = inst.variables[j].lower;
      up_[j] = inst.variables[j].upper;
    }
    for (const Term& t : inst.objective.terms) cost_[t.var] += t.coef;
    rhs_.resize(m_);
    for (int r = 0; r < m_; ++r) {
      const LinearConstraint& c = inst.constraints[rows_[r]];
      rhs_[r] = c.rhs;
      switch (c.sense) {
        case ConstraintSense::kLessEqual:
          lo_[n_ + r] = 0.0;
          up_[n_ + r] = kInfinity;
          break;
        case ConstraintSense::kGreaterEqual:
          lo_[n_ + r] = -kInfinity;
          up_[n_ + r] = 0.0;
          break;
        case ConstraintSense::kEqual:
          lo_[n_ + r] = 0.0;
          up_[n_ + r] = 0.0;
          break;
      }
    }
    x_.assign(cols_, 0.0);
    status_.assign(cols_, BasisStatus::kAtLower);
    head_.assign(m_, -1);
    tableau_.assign(static_cast<size_t>(m_) * stride_, 0.0);
    reduced_.assign(cols_, 0.0);
  }

  LpSolution Run(const std::vector<BasisStatus>& warm) {
    LpSolution sol;
    if (!InitialBasis(warm)) {
      sol.status = LpStatus::kNumericalFailure;
      return Finish(sol);
    }
    sol.status = Iterate();
    return Finish(sol);
  }

 private:
  double* Row(int r) { return tableau_.data() + static_cast<size_t>(r) * stride_; }

  void SetNonbasicValue(int j) {
    switch (status_[j]) {
      case BasisStatus::kAtLower:
        if (std::isfinite(lo_[j])) {
          x_[j] = lo_[j];
        } else if (std::isfinite(up_[j])) {
          status_[j] = BasisStatus::kAtUpper;
          x_[j] = up_[j];
        } else {
          status_[j] = BasisStatus::kFree;
          x_[j] = 0.0;
        }
        break;
      case BasisStatus::kAtUpper:
        if (std::isfinite(up_[j])) {
          x_[j] = up_[j];
        } else {
          status_[j] = BasisStatus::kAtLower;
          SetNonbasicValue(j);
        }
        break;
      case BasisStatus::kFree:
        if (std::isfinite(lo_[j]) || std::isfinite(up_[j])) {
          status_[j] = BasisStatus::kAtLower;
          SetNonbasicValue(j);
        } else {
          x_[j] = 0.0;
        }
        break;
      case BasisStatus::kBasic:
        break;
    }
  }

  bool InitialBasis(const std::vector<BasisStatus>& warm) {
    if (static_cast<int>(warm.size()) == cols_ &&
        std::count(warm.begin(), warm.end(), BasisStatus::kBasic) == m_) {
      status_ = warm;
      std::vector<int> basic;
      for (int j = 0; j < cols_; ++j) {
        if (status_[j] == BasisStatus::kBasic) basic.push_back(j);
      }
      for (int j = 0; j < cols_; ++j) SetNonbasicValue(j);
      if (Refactor(basic)) return true;
    }
    // Slack basis.
    std::vector<int> basic(m_);
    for (int j = 0; j < n_; ++j) {
      status_[j] = BasisStatus::kAtLower;
      SetNonbasicValue(j);
    }
    for (int r = 0; r < m_; ++r) {
      basic[r] = n_ + r;
      status_[n_ + r] = BasisStatus::kBasic;
    }
    return Refactor(basic);
  }

  // Rebuilds the tableau B^-1 [A I | b - N x_N] by Gauss-Jordan elimination
  // over the columns in `basic`. Assigns head_ from the pivot rows.
  bool Refactor(const std::vector<int>& basic) {
    std::fill(tableau_.begin(), tableau_.end(), 0.0);
    for (int r = 0; r < m_; ++r) {
      double* row = Row(r);
      for (const Term& t : inst_.constraints[rows_[r]].terms) row[t.var] += t.coef;
      row[n_ + r] = 1.0;
      double b = rhs_[r];
      for (const Term& t : inst_.constraints[rows_[r]].terms) {
        if (status_[t.var] != BasisStatus::kBasic) b -= t.coef * x_[t.var];
      }
      if (status_[n_ + r] != BasisStatus::kBasic) b -= x_[n_ + r];
      row[cols_] = b;
    }
    // Basic slacks are still unit columns; pivoting them in first is nearly
    // free and leaves the sparse structural rows for the real eliminations.
    std::vector<int> order(basic);
    std::stable_partition(order.begin(), order.end(), [&](int col) { return col >= n_; });
    std::vector<char> assigned(m_, 0);
    for (int col : order) {
      int best = -1;
      double best_abs = kSingularPivot;
      for (int r = 0; r < m_; ++r) {
        if (assigned[r]) continue;
        const double a = std::abs(Row(r)[col]);
        if (a > best_abs) {
          best_abs = a;
          best = r;
        }
      }
      if (best < 0) return false;
      assigned[best] = 1;
      head_[best] = col;
      Eliminate(best, col);
    }
    for (int r = 0; r < m_; ++r) x_[head_[r]] = Row(r)[cols_];
    pivots_since_refactor_ = 0;
    return true;
  }

  // Makes column `col` the unit vector e_r.
  void Eliminate(int r, int col) {
    double* pivot_row = Row(r);
    kernels::Scale(1.0 / pivot_row[col], {pivot_row, static_cast<size_t>(stride_)});
    pivot_row[col] = 1.0;
    const std::span<const double> src(pivot_row, stride_);
    // A sparse pivot row is applied entry by entry. Each entry still gets one
    // multiply and one add, so the result matches the dense kernel exactly.
    nonzeros_.clear();
    for (int k = 0; k < stride_; ++k) {
      if (pivot_row[k] != 0.0) nonzeros_.push_back(k);
    }
    const bool sparse = nonzeros_.size() * 4 < static_cast<size_t>(stride_);
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = Row(i);
      const double f = row[col];
      if (f == 0.0) continue;
      if (sparse) {
        const double g = -f;
        for (int k : nonzeros_) row[k] = g * pivot_row[k] + row[k];
      } else {
        kernels::Axpy(-f, src, {row, static_cast<size_t>(stride_)});
      }
      row[col] = 0.0;
    }
  }

  double BasicInfeasibility(int var) const {
    const double v = x_[var];
    if (v < lo_[var] - opt_.tol_feas * (1 + std::abs(lo_[var]))) return lo_[var] - v;
    if (v > up_[var] + opt_.tol_feas * (1 + std::abs(up_[var]))) return v - up_[var];
    return 0.0;
  }

  // Fills reduced_ for the current phase; returns the phase-1 infeasibility.
  double Price(bool* phase1) {
    double infeas = 0.0;
    phase_cost_.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const int v = head_[r];
      const double viol = BasicInfeasibility(v);
      if (viol > 0.0) {
        infeas += viol;
        phase_cost_[r] = x_[v] < lo_[v] ? -1.0 : 1.0;
      }
    }
    *phase1 = infeas > 0.0;
    if (*phase1) {
      std::fill(reduced_.begin(), reduced_.end(), 0.0);
    } else {
      reduced_ = cost_;
      for (int r = 0; r < m_; ++r) phase_cost_[r] = cost_[head_[r]];
    }
    for (int r = 0; r < m_; ++r) {
      if (phase_cost_[r] == 0.0) continue;
      kernels::Axpy(-phase_cost_[r], {Row(r), static_cast<size_t>(cols_)},
                    {reduced_.data(), static_cast<size_t>(cols_)});
    }
    for (int r = 0; r < m_; ++r) reduced_[head_[r]] = 0.0;
    return infeas;
  }

  // Returns the entering column and its direction (+1 increase, -1 decrease),
  // or -1 when the current basis is optimal for the phase.
  int ChooseEntering(int* dir) const {
    int best = -1;
    double best_score = opt_.tol_opt;
    for (int j = 0; j < cols_; ++j) {
      const BasisStatus s = status_[j];
      if (s == BasisStatus::kBasic || lo_[j] == up_[j]) continue;
      const double d = reduced_[j];
      int jdir = 0;
      if (d < -opt_.tol_opt && (s == BasisStatus::kAtLower || s == BasisStatus::kFree)) {
        jdir = 1;
      } else if (d > opt_.tol_opt && (s == BasisStatus::kAtUpper || s == BasisStatus::kFree)) {
        jdir = -1;
      }
      if (jdir == 0) continue;
      if (bland_) {
        *dir = jdir;
        return j;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        best = j;
        *dir = jdir;
      }
    }
    return best;
  }

  struct Ratio {
    int row = -1;  // -1 with finite step means a bound flip
    double step = kInfinity;
    bool leave_at_upper = false;
  };

  // Step limit for basic row r moving at rate `delta` per unit step.
  bool RowLimit(int r, double delta, bool phase1, double* limit,
                bool* at_upper) const {
    const int v = head_[r];
    const double xv = x_[v];
    const double tol_lo = opt_.tol_feas * (1 + std::abs(lo_[v]));
    const double tol_up = opt_.tol_feas * (1 + std::abs(up_[v]));
    if (delta < 0) {
      if (phase1 && xv > up_[v] + tol_up) {
        *limit = (xv - up_[v]) / -delta;
        *at_upper = true;
        return true;
      }
      if (xv < lo_[v] - tol_lo || !std::isfinite(lo_[v])) return false;
      *limit = std::max(0.0, xv - lo_[v]) / -delta;
      *at_upper = false;
      return true;
    }
    if (phase1 && xv < lo_[v] - tol_lo) {
      *limit = (lo_[v] - xv) / delta;
      *at_upper = false;
      return true;
    }
    if (xv > up_[v] + tol_up || !std::isfinite(up_[v])) return false;
    *limit = std::max(0.0, up_[v] - xv) / delta;
    *at_upper = true;
    return true;
  }

  Ratio ChooseLeaving(int j, int dir, bool phase1) {
    Ratio best;
    if (std::isfinite(lo_[j]) && std::isfinite(up_[j])) best.step = up_[j] - lo_[j];
    double min_step = best.step;
    for (int r = 0; r < m_; ++r) {
      const double alpha = Row(r)[j];
      if (std::abs(alpha) <= opt_.pivot_tol) continue;
      double limit;
      bool at_upper;
      if (RowLimit(r, -dir * alpha, phase1, &limit, &at_upper)) {
        min_step = std::min(min_step, limit);
      }
    }
    if (!std::isfinite(min_step)) return best;
    if (best.step <= min_step) return best;  // bound flip wins ties
    // Among near-ties prefer the largest pivot magnitude, or under Bland's
    // rule the smallest leaving column index.
    const double window = min_step + 1e-12 * (1 + min_step);
    double best_alpha = 0.0;
    for (int r = 0; r < m_; ++r) {
      const double alpha = Row(r)[j];
      if (std::abs(alpha) <= opt_.pivot_tol) continue;
      double limit;
      bool at_upper;
      if (!RowLimit(r, -dir * alpha, phase1, &limit, &at_upper) || limit > window) continue;
      bool take;
      if (best.row < 0) {
        take = true;
      } else if (bland_) {
        take = head_[r] < head_[best.row];
      } else {
        take = std::abs(alpha) > best_alpha;
      }
      if (take) {
        best.row = r;
        best.step = limit;
        best.leave_at_upper = at_upper;
        best_alpha = std::abs(alpha);
      }
    }
    return best;
  }

  LpStatus Iterate() {
    int degenerate_run = 0;
    while (true) {
      bool phase1;
      const double infeas = Price(&phase1);
      phase1_infeasibility_ = infeas;
      int dir = 0;
      const int j = ChooseEntering(&dir);
      if (j < 0) {
        if (!phase1) return LpStatus::kOptimal;
        if (bland_ || pivots_since_refactor_ == 0) return LpStatus::kInfeasible;
        // Confirm on a fresh factorization before declaring infeasibility.
        if (!RefactorCurrent()) return LpStatus::kNumericalFailure;
        continue;
      }
      if (iterations_ >= opt_.max_iterations || budget_.Exhausted()) {
        return LpStatus::kIterationLimit;
      }
      if (pivots_since_refactor_ >= refactor_interval_) {
        if (!RefactorCurrent()) return LpStatus::kNumericalFailure;
        continue;
      }
      const Ratio ratio = ChooseLeaving(j, dir, phase1);
      if (!std::isfinite(ratio.step)) {
        if (phase1) return LpStatus::kNumericalFailure;
        return LpStatus::kUnbounded;
      }
      ++iterations_;
      if (bland_) ++bland_pivots_;
      budget_.Charge(1);
      const double t = ratio.step;
      if (t <= kDegenerateStep) {
        if (++degenerate_run >= opt_.bland_after_degenerate) bland_ = true;
      } else {
        degenerate_run = 0;
        bland_ = false;
      }
      x_[j] += dir * t;
      for (int r = 0; r < m_; ++r) {
        const double alpha = Row(r)[j];
        if (alpha != 0.0) x_[head_[r]] -= dir * t * alpha;
      }
      if (ratio.row < 0) {
        status_[j] = dir > 0 ? BasisStatus::kAtUpper : BasisStatus::kAtLower;
        x_[j] = dir > 0 ? up_[j] : lo_[j];
        continue;
      }
      const int leaving = head_[ratio.row];
      status_[leaving] = ratio.leave_at_upper ? BasisStatus::kAtUpper : BasisStatus::kAtLower;
      x_[leaving] = ratio.leave_at_upper ? up_[leaving] : lo_[leaving];
      status_[j] = BasisStatus::kBasic;
      head_[ratio.row] = j;
      Eliminate(ratio.row, j);
      ++pivots_since_refactor_;
    }
  }

  bool RefactorCurrent() {
    std::vector<int> basic(head_.begin(), head_.end());
    std::sort(basic.begin(), basic.end());
    return Refactor(basic);
  }

  LpSolution Finish(LpSolution& sol) {
    sol.iterations = iterations_;
    sol.bland_pivots = bland_pivots_;
    sol.phase1_infeasibility = sol.status == LpStatus::kOptimal ? 0.0 : phase1_infeasibility_;
    sol.values.assign(x_.begin(), x_.begin() + n_);
    sol.basis = status_;
    sol.objective = inst_.objective.offset;
    for (int j = 0; j < n_; ++j) sol.objective += cost_[j] * x_[j];
    sol.duals.assign(inst_.num_constraints(), 0.0);
    sol.reduced_costs.assign(n_, 0.0);
    if (sol.status == LpStatus::kOptimal) {
      bool phase1;
      Price(&phase1);
      std::vector<double> y(m_);
      for (int r = 0; r < m_; ++r) {
        y[r] = -reduced_[n_ + r];
        sol.duals[rows_[r]] = y[r];
      }
      for (int j = 0; j < n_; ++j) sol.reduced_costs[j] = reduced_[j];
      double dual = inst_.objective.offset + kernels::Dot(y, rhs_);
      for (int j = 0; j < cols_; ++j) {
        if (status_[j] != BasisStatus::kBasic && reduced_[j] != 0.0) {
          dual += reduced_[j] * x_[j];
        }
      }
      sol.dual_objective = dual;
    }
    if (opt_.debug_dump != nullptr) DumpTableau(*opt_.debug_dump);
    return sol;
  }

  // Format: "tableau <rows> <cols>", then per row
  // "row <r> basic <column> value <x> : <coefficients...>".
  void DumpTableau(std::ostream& out) {
    out << "tableau " << m_ << ' ' << cols_ << '\n';
    for (int r = 0; r < m_; ++r) {
      out << "row " << r << " basic " << head_[r] << " value " << x_[head_[r]] << " :";
      for (int j = 0; j < cols_; ++j) out << ' ' << Row(r)[j];
      out << '\n';
    }
  }

  const MilpInstance& inst_;
  const LpOptions& opt_;
  const Budget& budget_;
  int n_ = 0;
  int m_ = 0;
  int refactor_interval_ = 100;
  int cols_ = 0;
  int stride_ = 0;
  std::vector<int> rows_;
  std::vector<double> lo_, up_, cost_, rhs_, x_;
  std::vector<BasisStatus> status_;
  std::vector<int> head_;
  std::vector<double> tableau_;
  std::vector<double> reduced_;
  std::vector<int> nonzeros_;
  std::vector<double> phase_cost_;
  int pivots_since_refactor_ = 0;
  int64_t iterations_ = 0;
  int64_t bland_pivots_ = 0;
  bool bland_ = false;
  double phase1_infeasibility_ = 0.0;
};

}  // namespace

LpSolution SolveLp(const MilpInstance& inst, const LpOptions& options,
                   const std::vector<BasisStatus>& warm_basis,
                   const Budget& budget) {
  if (!options.relax_integrality && inst.NumDiscrete() > 0) {
    throw StructuralError("LP solver cannot enforce integrality; pass relax_integrality");
  }
  for (const VariableDef& v : inst.variables) {
    if (v.lower > v.upper) {
      LpSolution sol;
      sol.status = LpStatus::kInfeasible;
      sol.phase1_infeasibility = v.lower - v.upper;
      sol.values.assign(inst.num_variables(), 0.0);
      sol.duals.assign(inst.num_constraints(), 0.0);
      return sol;
    }
  }
  DenseSimplex simplex(inst, options, budget);
  return simplex.Run(warm_basis);
}

std::string_view ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
    case LpStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "?";
}

}  // namespace primalkit
