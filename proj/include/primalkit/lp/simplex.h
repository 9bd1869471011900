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

// Bounded-variable primal simplex on a dense tableau.
//
// Every non-SOS row `a x (<=|>=|=) b` gets a slack s with a x + s = b, so the
// working columns are the n structural variables followed by one slack per
// row. Phase 1 minimizes the sum of basic bound violations (composite
// objective, no artificials or big-M). Pricing is Dantzig's rule and switches
// to Bland's rule after a run of degenerate pivots. The tableau is rebuilt
// from the original rows every `refactor_interval` pivots (by default
// max(100, number of rows)).

#ifndef PRIMALKIT_LP_SIMPLEX_H_
#define PRIMALKIT_LP_SIMPLEX_H_

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "primalkit/core/budget.h"
#include "primalkit/core/milp.h"

namespace primalkit {

enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kNumericalFailure,
};

// Nonbasic free variables sit at zero with status kFree.
enum class BasisStatus : uint8_t { kBasic, kAtLower, kAtUpper, kFree };

struct LpOptions {
  double pivot_tol = 1e-9;
  double tol_opt = 1e-7;
  double tol_feas = 1e-7;
  // 0 selects max(100, rows).
  int refactor_interval = 0;
  int bland_after_degenerate = 50;
  int64_t max_iterations = 1'000'000;
  // When false the instance must not contain discrete variables.
  bool relax_integrality = true;
  // Receives a text dump of the final tableau when set.
  std::ostream* debug_dump = nullptr;
};

struct LpSolution {
  LpStatus status = LpStatus::kNumericalFailure;
  // Structural variable values.
  std::vector<double> values;
  double objective = 0.0;
  // One entry per structural variable followed by one per non-SOS row.
  std::vector<BasisStatus> basis;
  // One dual per constraint of the instance (zero for SOS1 rows).
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  double dual_objective = 0.0;
  // Sum of bound violations left when Phase 1 stopped; positive certifies
  // infeasibility when status is kInfeasible.
  double phase1_infeasibility = 0.0;
  int64_t iterations = 0;
  int64_t bland_pivots = 0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

// Solves the LP relaxation of `inst` (integrality and SOS1 rows ignored).
// `warm_basis`, if non-empty and consistent with the instance shape, seeds the
// starting basis. Each pivot charges one unit to `budget`; an exhausted
// budget ends the solve with kIterationLimit.
LpSolution SolveLp(const MilpInstance& inst, const LpOptions& options = {},
                   const std::vector<BasisStatus>& warm_basis = {},
                   const Budget& budget = Budget::Unlimited());

std::string_view ToString(LpStatus status);

}  // namespace primalkit

#endif  // PRIMALKIT_LP_SIMPLEX_H_
