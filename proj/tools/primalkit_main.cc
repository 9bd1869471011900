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

// Command-line front end: instance generation, single solves and benchmarks.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "primalkit/core/config.h"
#include "primalkit/core/json_format.h"
#include "primalkit/harness/bench.h"
#include "primalkit/harness/pipeline.h"

namespace primalkit {
namespace {

struct GenerateArgs {
  std::string family;
  uint64_t seed = 0;
  std::string profile;
  std::string out;
  int periods = 6;
};

struct SolveArgs {
  std::string instance;
  RunConfig run;
  std::string clock = "wall";
  double cap = 0.0;
  double reference = 0.0;
  std::string trajectory_out;
};

struct BenchArgs {
  std::string spec;
  std::string out_dir = "bench_out";
};

int Generate(const GenerateArgs& args) {
  const Config profile = args.profile.empty() ? Config() : Config::ReadFile(args.profile);
  const MilpInstance inst = GenerateFamily(args.family, args.seed, profile, args.periods);
  WriteInstanceFile(inst, args.out);
  std::printf("wrote %s (%d variables, %d constraints)\n", args.out.c_str(),
              inst.num_variables(), inst.num_constraints());
  return 0;
}

int Solve(SolveArgs& args, bool has_cap, bool has_reference) {
  RunConfig& run = args.run;
  run.clock = args.clock == "work" ? ClockMode::kWork : ClockMode::kWall;
  if (has_cap) run.cap = args.cap;
  if (has_reference) run.reference = args.reference;
  const MilpInstance inst = ReadInstanceFile(args.instance);
  if (run.instance_id.empty()) run.instance_id = inst.name.empty() ? args.instance : inst.name;
  const RunResult result = RunPipeline(inst, run);
  for (const StageReport& s : result.stages) {
    std::printf("stage %-18s %10.4f .. %10.4f  best=%s\n", s.name.c_str(), s.start, s.end,
                s.best ? std::to_string(*s.best).c_str() : "-");
  }
  if (!result.message.empty()) std::printf("notes: %s\n", result.message.c_str());
  if (result.solution) {
    const double shown = inst.negated_from_max ? -result.solution->objective
                                               : result.solution->objective;
    std::printf("status=%s objective=%.12g primal_integral=%.12g\n", result.status.c_str(),
                shown, result.primal_integral);
  } else {
    std::printf("status=%s primal_integral=%.12g\n", result.status.c_str(),
                result.primal_integral);
  }
  if (!args.trajectory_out.empty()) {
    std::ofstream f(args.trajectory_out, std::ios::binary);
    f << TrajectoryJson(result, run);
    if (!f) throw std::runtime_error("cannot write " + args.trajectory_out);
  }
  return result.solution ? 0 : 3;
}

int Bench(const BenchArgs& args) {
  const BenchSpec spec = BenchSpec::ReadFile(args.spec);
  const BenchResult result = RunBench(spec);
  WriteBenchOutputs(result, args.out_dir);
  for (const BenchAggregate& a : result.aggregates) {
    std::printf("%-16s completed=%d failed=%d mean=%.6g median=%.6g stdev=%.6g\n",
                a.pipeline.c_str(), a.completed, a.failed, a.mean, a.median, a.stdev);
  }
  std::printf("wrote %s/results.csv and results.json\n", args.out_dir.c_str());
  return 0;
}

}  // namespace
}  // namespace primalkit

int main(int argc, char** argv) {
  using namespace primalkit;
  CLI::App app{"primalkit: primal heuristics for mixed-integer programs"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "Write a generated instance");
  generate->add_option("family", gen.family, "Instance family")
      ->required()
      ->check(CLI::IsMember(FamilyNames()));
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_option("--profile", gen.profile, "Profile config file")->check(CLI::ExistingFile);
  generate->add_option("--out", gen.out, "Output path (.lp or .json)")->required();
  generate->add_option("--periods", gen.periods, "Horizon for lot-sizing")
      ->check(CLI::PositiveNumber);

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Run one pipeline on an instance");
  solve_cmd->add_option("instance", solve.instance, "Instance file (.lp or .json)")
      ->required()
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--pipeline", solve.run.pipeline, "Heuristic pipeline")
      ->check(CLI::IsMember(PipelineNames()));
  solve_cmd->add_option("--time-limit", solve.run.time_limit, "Time limit T in seconds")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--seed", solve.run.seed, "Random seed");
  solve_cmd->add_option("--clock", solve.clock, "wall or work")
      ->check(CLI::IsMember({"wall", "work"}));
  solve_cmd->add_option("--work-limit", solve.run.work_limit, "Work units mapped onto T");
  solve_cmd->add_option("--stage-budgets", solve.run.stage_budgets, "Per-stage shares of T")
      ->delimiter(',');
  CLI::Option* cap = solve_cmd->add_option("--cap", solve.cap, "Bound before the first solution");
  CLI::Option* reference =
      solve_cmd->add_option("--reference", solve.reference, "Reference objective");
  solve_cmd->add_option("--instance-id", solve.run.instance_id, "Id stored in the trajectory");
  solve_cmd->add_option("--trajectory-out", solve.trajectory_out, "Trajectory JSON path");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run a benchmark spec");
  bench_cmd->add_option("--spec", bench.spec, "Benchmark spec file")
      ->required()
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("--out-dir", bench.out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (generate->parsed()) return Generate(gen);
    if (solve_cmd->parsed()) return Solve(solve, cap->count() > 0, reference->count() > 0);
    return Bench(bench);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
