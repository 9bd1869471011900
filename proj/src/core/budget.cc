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

#include "primalkit/core/budget.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace primalkit {

Budget::Budget()
    : Budget(ClockMode::kWall, std::numeric_limits<double>::infinity(),
             kUnlimitedWork) {}

Budget::Budget(ClockMode mode, double time_limit_seconds, int64_t work_limit) {
  if (mode == ClockMode::kWork && (work_limit <= 0 || work_limit == kUnlimitedWork)) {
    throw std::invalid_argument("work-mode budgets need a finite work limit");
  }
  if (!(time_limit_seconds >= 0)) {
    throw std::invalid_argument("time limit must be nonnegative");
  }
  root_ = std::make_shared<Root>(
      Root{mode, time_limit_seconds, work_limit, 0, std::chrono::steady_clock::now()});
  node_ = std::make_shared<Node>(Node{nullptr, work_limit, 0, time_limit_seconds});
}

Budget Budget::Slice(double fraction) const {
  fraction = std::clamp(fraction, 0.0, 1.0);
  const int64_t remaining = WorkRemaining();
  const int64_t work = remaining == kUnlimitedWork
                           ? kUnlimitedWork
                           : static_cast<int64_t>(
                                 std::floor(fraction * static_cast<double>(remaining)));
  const double time_left = TimeRemaining();
  const double deadline = std::isinf(time_left) ? time_left : Elapsed() + fraction * time_left;
  return Budget(root_, std::make_shared<Node>(Node{node_, work, 0, deadline}));
}

Budget Budget::SliceWork(int64_t units) const {
  const int64_t work = std::min(units, WorkRemaining());
  return Budget(root_, std::make_shared<Node>(Node{node_, work, 0, node_->deadline}));
}

void Budget::Charge(int64_t units) const {
  root_->work_used += units;
  for (Node* n = node_.get(); n != nullptr; n = n->parent.get()) n->work_used += units;
}

bool Budget::Exhausted() const {
  if (WorkRemaining() <= 0) return true;
  return TimeRemaining() <= 0.0;
}

double Budget::Elapsed() const {
  if (root_->mode == ClockMode::kWork) {
    return static_cast<double>(root_->work_used) * root_->time_limit /
           static_cast<double>(root_->work_limit);
  }
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - root_->start)
      .count();
}

double Budget::TimeLimit() const { return root_->time_limit; }

ClockMode Budget::mode() const { return root_->mode; }

int64_t Budget::WorkUsed() const { return node_->work_used; }

int64_t Budget::WorkRemaining() const {
  int64_t remaining = kUnlimitedWork;
  for (const Node* n = node_.get(); n != nullptr; n = n->parent.get()) {
    if (n->work_limit != kUnlimitedWork) {
      remaining = std::min(remaining, n->work_limit - n->work_used);
    }
  }
  return remaining;
}

double Budget::TimeRemaining() const {
  double deadline = std::numeric_limits<double>::infinity();
  for (const Node* n = node_.get(); n != nullptr; n = n->parent.get()) {
    deadline = std::min(deadline, n->deadline);
  }
  if (std::isinf(deadline)) return deadline;
  return deadline - Elapsed();
}

}  // namespace primalkit
