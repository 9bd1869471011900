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

// Benchmark runner. A spec file lists instances (files or a generator) and
// pipelines; every (instance, pipeline, seed) run is recorded.
//
//   pipelines = ["lb-round-up", "lb-adaptive"]
//   seeds = [0, 1, 2, 3, 4]
//   time_limit = 10
//   clock = "work"            # or "wall"
//   work_limit = 200000       # required for clock = "work"
//   instances = ["a.lp"]      # relative to the spec file; optional
//   [generate]                # optional
//   family = "load-balancing" # item-placement | load-balancing | lot-sizing
//   count = 20
//   first_seed = 0
//   periods = 6               # lot-sizing only
//   [profile]                 # generator profile keys
//   n_tasks = 30

#ifndef PRIMALKIT_HARNESS_BENCH_H_
#define PRIMALKIT_HARNESS_BENCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "primalkit/core/config.h"
#include "primalkit/core/milp.h"
#include "primalkit/harness/pipeline.h"

namespace primalkit {

// Builds one instance of a generator family. Throws std::invalid_argument for
// an unknown family.
MilpInstance GenerateFamily(const std::string& family, uint64_t seed, const Config& profile,
                            int periods = 6);
const std::vector<std::string>& FamilyNames();

struct BenchInstance {
  std::string id;
  MilpInstance milp;
};

struct BenchSpec {
  std::vector<BenchInstance> instances;
  std::vector<std::string> pipelines;
  std::vector<uint64_t> seeds;
  RunConfig base;  // pipeline, seed and instance_id are filled per run

  // `base_dir` resolves relative instance paths.
  static BenchSpec FromConfig(const Config& config, const std::string& base_dir = ".");
  static BenchSpec ReadFile(const std::string& path);
};

struct BenchRow {
  std::string instance;
  uint64_t seed = 0;
  std::string pipeline;
  double primal_integral = 0.0;
  std::optional<double> final_obj;
  std::string status;
};

struct BenchAggregate {
  std::string pipeline;
  int completed = 0;
  int failed = 0;
  double mean = 0.0;
  double median = 0.0;
  double stdev = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;  // sorted by instance, pipeline, seed
  std::vector<BenchAggregate> aggregates;  // one per pipeline, spec order
};

BenchResult RunBench(const BenchSpec& spec);

// CSV with header instance,seed,pipeline,primal_integral,final_obj,status,
// then one aggregate row per pipeline (instance "aggregate", seed empty,
// mean primal integral, status "completed=<n>;failed=<m>").
std::string BenchCsv(const BenchResult& result);
std::string BenchJson(const BenchResult& result);

// Writes results.csv and results.json into `out_dir` (created if missing).
void WriteBenchOutputs(const BenchResult& result, const std::string& out_dir);

}  // namespace primalkit

#endif  // PRIMALKIT_HARNESS_BENCH_H_
