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

#include "primalkit/core/trajectory.h"

#include <algorithm>
#include <cmath>

namespace primalkit {

bool PrimalTrajectory::Record(double time, double bound, std::string source) {
  if (!std::isfinite(bound)) return false;
  if (!events_.empty()) {
    const double best = events_.back().bound;
    if (bound >= best - kImprovementTolerance * (1 + std::abs(best))) return false;
    time = std::max(time, events_.back().time);
  }
  events_.push_back({std::max(time, 0.0), bound, std::move(source)});
  return true;
}

std::optional<double> PrimalTrajectory::best() const {
  if (events_.empty()) return std::nullopt;
  return events_.back().bound;
}

}  // namespace primalkit
