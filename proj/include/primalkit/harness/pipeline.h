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

// Heuristic pipelines run under one time (or work) budget. Each pipeline is a
// fixed sequence of stages; every solution a stage produces is re-certified
// on the input instance before it becomes a trajectory event.
//
//   item-placement  greedy, swap LNS, math-heuristic, pairwise sub-MIP LNS
//   load-balancing  round-up of the original LP, adaptive rounding, RINS
//   lb-round-up     round-up of the original LP only
//   lb-adaptive     round-up, then adaptive rounding
//   temporal        feasibility pump, RENS, rolling horizon
//   generic-fp      feasibility pump, then branch and bound from its result

#ifndef PRIMALKIT_HARNESS_PIPELINE_H_
#define PRIMALKIT_HARNESS_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "primalkit/core/budget.h"
#include "primalkit/core/milp.h"
#include "primalkit/core/trajectory.h"
#include "primalkit/harness/primal_integral.h"

namespace primalkit {

const std::vector<std::string>& PipelineNames();

struct RunConfig {
  std::string pipeline = "generic-fp";
  double time_limit = 300.0;
  uint64_t seed = 0;
  // In kWork mode, times are work units scaled onto [0, time_limit], which
  // makes runs bit-reproducible.
  ClockMode clock = ClockMode::kWall;
  int64_t work_limit = 0;
  // Per-stage shares of the time limit; empty selects the pipeline defaults.
  std::vector<double> stage_budgets;
  // Bound before the first solution; CapBound(inst) when unset.
  std::optional<double> cap;
  std::optional<double> reference;
  std::string instance_id;

  // Throws std::invalid_argument for an unknown pipeline, negative limits,
  // a missing work limit in work mode, or stage budgets that are negative,
  // sum above 1 or do not match the pipeline's stage count.
  void Validate() const;
};

int StageCount(const std::string& pipeline);
std::vector<double> DefaultStageBudgets(const std::string& pipeline);

struct StageReport {
  std::string name;
  double start = 0.0;
  double end = 0.0;
  // Best bound after the stage, if any.
  std::optional<double> best;
};

struct RunResult {
  PrimalTrajectory trajectory;
  std::optional<Solution> solution;
  // "feasible", "no_solution" or "error".
  std::string status = "no_solution";
  std::string message;
  double cap = kDefaultCapBound;
  double primal_integral = 0.0;
  std::vector<StageReport> stages;
};

// Throws std::invalid_argument when the configuration is invalid or the
// instance does not fit the pipeline (e.g. item-placement on a MILP that
// was not written by the item-placement model).
RunResult RunPipeline(const MilpInstance& inst, const RunConfig& config);

// Trajectory JSON: ids, limits, cap, reference, status, final objective,
// primal integral and the event list with time, bound and source.
std::string TrajectoryJson(const RunResult& result, const RunConfig& config);

}  // namespace primalkit

#endif  // PRIMALKIT_HARNESS_PIPELINE_H_
