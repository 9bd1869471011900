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

// LP-based branch and bound for small MILPs.
//
// Columns fixed by their bounds are eliminated once at the root. Nodes carry
// bound vectors and the parent's optimal basis. Until the search itself finds
// an integral node it dives depth first (down branch first unless configured
// otherwise) without pruning; afterwards it prunes against the incumbent and
// selects the open node with the smallest parent bound, ties broken by
// creation order. A start solution only tightens pruning after the dive, so
// it can never make the final incumbent worse under the same limits.
// Violated SOS1 rows are branched on before fractional variables: the members,
// ordered by weight, are split between the first and last nonzero and each
// child forces one half to zero. Otherwise the most fractional variable is
// branched on, ties going to the lowest index.

#ifndef PRIMALKIT_MIP_BRANCH_AND_BOUND_H_
#define PRIMALKIT_MIP_BRANCH_AND_BOUND_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "primalkit/core/budget.h"
#include "primalkit/core/milp.h"
#include "primalkit/lp/simplex.h"

namespace primalkit {

enum class BnbStatus { kOptimal, kFeasibleLimit, kInfeasible, kNoSolutionLimit };

struct BoundPoint {
  double time;  // seconds on the budget's root clock
  double value;
};

struct BnbOptions {
  int64_t node_limit = std::numeric_limits<int64_t>::max();
  // Search stops once (incumbent - dual_bound) <= gap_limit * max(1, |incumbent|).
  double gap_limit = 1e-6;
  // Must be feasible for the instance; rejected with std::invalid_argument
  // otherwise.
  std::optional<Solution> start;
  double tol_feas = kFeasibilityTolerance;
  double tol_int = kIntegralityTolerance;
  // Which child of a variable branch is explored first.
  bool up_branch_first = false;
  LpOptions lp;
  // Invoked with every new incumbent (already certified).
  std::function<void(const Solution&)> on_incumbent;
};

struct BnbResult {
  BnbStatus status = BnbStatus::kNoSolutionLimit;
  std::optional<Solution> incumbent;
  double dual_bound = -kInfinity;
  int64_t nodes = 0;
  double wall_time = 0.0;
  // Improving incumbents and dual bound increases, in order.
  std::vector<BoundPoint> incumbent_history;
  std::vector<BoundPoint> dual_history;

  bool has_incumbent() const { return incumbent.has_value(); }
};

// Each node charges one work unit to `budget` and each simplex pivot another.
BnbResult SolveBnb(const MilpInstance& inst, const BnbOptions& options = {},
                   const Budget& budget = Budget::Unlimited());

std::string_view ToString(BnbStatus status);

}  // namespace primalkit

#endif  // PRIMALKIT_MIP_BRANCH_AND_BOUND_H_
