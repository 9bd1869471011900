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

// Anytime budgets shared by the solvers and heuristics.
//
// A Budget tracks consumed work units (simplex pivots, branch-and-bound
// nodes, local-search move batches) and a time limit. In wall-clock mode the
// time is measured with a steady clock. In work mode the clock is virtual:
// elapsed seconds are work_used * time_limit / work_limit, which makes every
// trajectory bit-reproducible. Slices carve out a share of the remaining
// budget; charging a slice also charges every ancestor.

#ifndef PRIMALKIT_CORE_BUDGET_H_
#define PRIMALKIT_CORE_BUDGET_H_

#include <chrono>
#include <cstdint>
#include <limits>
#include <memory>

namespace primalkit {

enum class ClockMode { kWall, kWork };

class Budget {
 public:
  static constexpr int64_t kUnlimitedWork = std::numeric_limits<int64_t>::max();

  // Unlimited wall-clock budget.
  Budget();
  // Root budget. In kWork mode `work_limit` must be finite and positive.
  Budget(ClockMode mode, double time_limit_seconds, int64_t work_limit);

  static Budget Unlimited() { return Budget(); }
  static Budget Work(int64_t units, double nominal_seconds = 1.0) {
    return Budget(ClockMode::kWork, nominal_seconds, units);
  }

  // Child budget with `fraction` of this budget's remaining time and work.
  Budget Slice(double fraction) const;
  // Child budget additionally capped at `units` of work.
  Budget SliceWork(int64_t units) const;

  void Charge(int64_t units = 1) const;
  bool Exhausted() const;

  // Seconds since the root budget was created, on the root clock.
  double Elapsed() const;
  double TimeLimit() const;  // of the root
  ClockMode mode() const;

  int64_t WorkUsed() const;
  int64_t WorkRemaining() const;
  double TimeRemaining() const;

 private:
  struct Root {
    ClockMode mode;
    double time_limit;
    int64_t work_limit;
    int64_t work_used = 0;
    std::chrono::steady_clock::time_point start;
  };
  struct Node {
    std::shared_ptr<Node> parent;
    int64_t work_limit;
    int64_t work_used = 0;
    double deadline;  // on the root clock
  };

  Budget(std::shared_ptr<Root> root, std::shared_ptr<Node> node)
      : root_(std::move(root)), node_(std::move(node)) {}

  std::shared_ptr<Root> root_;
  std::shared_ptr<Node> node_;
};

}  // namespace primalkit

#endif  // PRIMALKIT_CORE_BUDGET_H_
