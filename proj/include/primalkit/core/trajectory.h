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

// Improving primal bounds over time. Heuristics report into a
// PrimalTrajectory and the harness turns it into a primal integral.

#ifndef PRIMALKIT_CORE_TRAJECTORY_H_
#define PRIMALKIT_CORE_TRAJECTORY_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace primalkit {

struct TrajectoryEvent {
  double time;   // seconds since the run started
  double bound;  // objective of the new incumbent
  std::string source;
};

class PrimalTrajectory {
 public:
  // Bounds closer than this to the current best are not improvements.
  static constexpr double kImprovementTolerance = 1e-9;

  // Appends an event when `bound` strictly improves on the best so far.
  // Times are clamped to be non-decreasing. Returns whether it was recorded.
  bool Record(double time, double bound, std::string source = "");

  const std::vector<TrajectoryEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }
  std::optional<double> best() const;

  std::string instance_id;
  std::string pipeline_id;
  uint64_t seed = 0;
  double time_limit = 0.0;

 private:
  std::vector<TrajectoryEvent> events_;
};

}  // namespace primalkit

#endif  // PRIMALKIT_CORE_TRAJECTORY_H_
