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

#include "primalkit/harness/primal_integral.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace primalkit {

double PrimalIntegral(std::span<const TrajectoryEvent> events, double time_limit, double cap,
                      std::optional<double> reference) {
  if (!(time_limit >= 0.0) || !std::isfinite(time_limit)) {
    throw std::invalid_argument("primal integral needs a finite nonnegative time limit");
  }
  double area = 0.0;
  double last_time = 0.0;
  double bound = cap;
  for (const TrajectoryEvent& e : events) {
    const double t = std::max(e.time, last_time);
    if (t >= time_limit) break;
    area += bound * (t - last_time);
    last_time = t;
    bound = e.bound;
  }
  area += bound * (time_limit - last_time);
  if (reference.has_value()) area -= time_limit * *reference;
  return area;
}

double CapBound(const MilpInstance& inst) {
  double value = inst.objective.offset;
  for (const Term& t : inst.objective.terms) {
    if (t.coef == 0.0) continue;
    const double upper = inst.variables[t.var].upper;
    if (!std::isfinite(upper)) return kDefaultCapBound;
    value += t.coef * upper;
  }
  return std::isfinite(value) ? value : kDefaultCapBound;
}

}  // namespace primalkit
