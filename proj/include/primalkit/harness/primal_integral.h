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

// Primal integral: the area under the best-known primal bound over the time
// limit. Before the first solution the bound is a cap value.

#ifndef PRIMALKIT_HARNESS_PRIMAL_INTEGRAL_H_
#define PRIMALKIT_HARNESS_PRIMAL_INTEGRAL_H_

#include <optional>
#include <span>

#include "primalkit/core/milp.h"
#include "primalkit/core/trajectory.h"

namespace primalkit {

inline constexpr double kDefaultCapBound = 1e12;

// Area of the step function that is `cap` on [0, t_1), b_k on [t_k, t_k+1)
// and b_last up to `time_limit`. Events past the limit are ignored; events
// are taken in order and their times clamped to be non-decreasing. With a
// reference, time_limit * reference is subtracted. Throws
// std::invalid_argument for a negative or non-finite time limit.
double PrimalIntegral(std::span<const TrajectoryEvent> events, double time_limit, double cap,
                      std::optional<double> reference = std::nullopt);

inline double PrimalIntegral(const PrimalTrajectory& trajectory, double cap,
                             std::optional<double> reference = std::nullopt) {
  return PrimalIntegral(trajectory.events(), trajectory.time_limit, cap, reference);
}

// Objective at the all-upper-bound point, or kDefaultCapBound when that is
// not finite.
double CapBound(const MilpInstance& inst);

}  // namespace primalkit

#endif  // PRIMALKIT_HARNESS_PRIMAL_INTEGRAL_H_
