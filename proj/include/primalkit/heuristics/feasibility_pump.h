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

// Feasibility pump: alternate rounding of the discrete variables with an LP
// projection that minimizes the L1 distance to the rounded point, until the
// two meet. Cycles are broken by flipping the least certain variables (weak
// perturbation) and stalls by random flips (strong perturbation).

#ifndef PRIMALKIT_HEURISTICS_FEASIBILITY_PUMP_H_
#define PRIMALKIT_HEURISTICS_FEASIBILITY_PUMP_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "primalkit/core/budget.h"
#include "primalkit/core/config.h"
#include "primalkit/core/milp.h"

namespace primalkit {

struct FpConfig {
  int max_iters = 100;
  // A rounded point repeating one of the last `cycle_window` points is a
  // cycle; a distance that has not decreased for `cycle_window` projections
  // is a stall.
  int cycle_window = 3;
  int weak_flip_count = 5;
  double strong_flip_fraction = 0.3;
  uint64_t seed = 0;

  // Throws std::invalid_argument for non-positive counts or a flip fraction
  // outside (0, 1].
  void Validate() const;
  static FpConfig FromConfig(const Config& config);
};

enum class FpStatus { kFeasible, kInfeasible, kIterationLimit, kNumericalFailure };

enum class FpPerturbation : uint8_t { kNone, kWeak, kStrong };

struct FpIteration {
  // L1 distance between the projection and the rounded point it targeted.
  double distance = 0.0;
  // Perturbation applied to the rounding of this iteration's LP point.
  FpPerturbation perturbation = FpPerturbation::kNone;
};

struct FpResult {
  FpStatus status = FpStatus::kIterationLimit;
  std::optional<Solution> solution;
  // LP solves, counting the initial relaxation.
  int iterations = 0;
  int weak_perturbations = 0;
  int strong_perturbations = 0;
  // One entry per projection.
  std::vector<FpIteration> log;
};

// Starts from the LP relaxation optimum, which is returned directly when it
// is already integral. Each LP pivot is charged to `budget`; running out ends
// the pump with kIterationLimit.
FpResult FeasibilityPump(const MilpInstance& inst, const FpConfig& config = {},
                         const Budget& budget = Budget::Unlimited());

std::string_view ToString(FpStatus status);

}  // namespace primalkit

#endif  // PRIMALKIT_HEURISTICS_FEASIBILITY_PUMP_H_
