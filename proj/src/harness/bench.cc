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

#include "primalkit/harness/bench.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "primalkit/core/json_format.h"
#include "primalkit/heuristics/item_placement.h"
#include "primalkit/heuristics/load_balancing.h"
#include "primalkit/heuristics/temporal.h"

namespace primalkit {
namespace {

std::string FormatNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string FamilyId(const std::string& family, uint64_t seed) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04llu", static_cast<unsigned long long>(seed));
  return family + "-" + buf;
}

ClockMode ParseClock(const std::string& s) {
  if (s == "wall") return ClockMode::kWall;
  if (s == "work") return ClockMode::kWork;
  throw ConfigError("clock must be \"wall\" or \"work\", got \"" + s + "\"");
}

BenchAggregate Aggregate(const std::string& pipeline, const std::vector<BenchRow>& rows) {
  BenchAggregate agg;
  agg.pipeline = pipeline;
  std::vector<double> values;
  for (const BenchRow& r : rows) {
    if (r.pipeline != pipeline) continue;
    if (r.status == "error") {
      ++agg.failed;
    } else {
      ++agg.completed;
      values.push_back(r.primal_integral);
    }
  }
  if (values.empty()) return agg;
  double sum = 0.0;
  for (double v : values) sum += v;
  agg.mean = sum / values.size();
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  agg.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
    agg.stdev = std::sqrt(ss / (n - 1));
  }
  return agg;
}

}  // namespace

const std::vector<std::string>& FamilyNames() {
  static const auto* names = new std::vector<std::string>{
      "item-placement", "load-balancing", "load-balancing-tightened", "lot-sizing"};
  return *names;
}

MilpInstance GenerateFamily(const std::string& family, uint64_t seed, const Config& profile,
                            int periods) {
  MilpInstance out;
  if (family == "item-placement") {
    out = ToMilp(GenerateItemPlacement(seed, ItemPlacementProfile::FromConfig(profile)));
  } else if (family == "load-balancing" || family == "load-balancing-tightened") {
    out = ToMilp(GenerateLoadBalancing(seed, LoadBalancingProfile::FromConfig(profile)),
                 family == "load-balancing-tightened");
  } else if (family == "lot-sizing" || family == "temporal") {
    out = GenerateLotSizing(seed, periods, LotSizingProfile::FromConfig(profile)).milp;
  } else {
    throw std::invalid_argument("unknown family '" + family + "'");
  }
  out.name = FamilyId(family, seed);
  return out;
}

BenchSpec BenchSpec::FromConfig(const Config& config, const std::string& base_dir) {
  std::vector<std::string> known = {
      "pipelines",      "seeds",          "time_limit",         "clock",
      "work_limit",     "instances",      "stage_budgets",      "generate.family",
      "generate.count", "generate.first_seed", "generate.periods"};
  for (const auto& [key, value] : config.values()) {
    if (key.rfind("profile.", 0) == 0) known.push_back(key);
  }
  config.CheckKnownKeys(known);

  BenchSpec spec;
  spec.pipelines = config.GetList("pipelines");
  if (spec.pipelines.empty()) throw ConfigError("bench spec lists no pipelines");
  for (const std::string& s : config.GetList("seeds")) {
    try {
      spec.seeds.push_back(std::stoull(s));
    } catch (const std::exception&) {
      throw ConfigError("bad seed '" + s + "'");
    }
  }
  if (spec.seeds.empty()) spec.seeds.push_back(0);

  spec.base.time_limit = config.GetDouble("time_limit", spec.base.time_limit);
  spec.base.clock = ParseClock(config.GetString("clock", "wall"));
  spec.base.work_limit = config.GetInt("work_limit", 0);
  for (const std::string& s : config.GetList("stage_budgets")) {
    spec.base.stage_budgets.push_back(std::stod(s));
  }
  for (const std::string& p : spec.pipelines) {
    RunConfig probe = spec.base;
    probe.pipeline = p;
    try {
      probe.Validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  for (const std::string& path : config.GetList("instances")) {
    const std::filesystem::path full = std::filesystem::path(base_dir) / path;
    spec.instances.push_back({std::filesystem::path(path).stem().string(),
                              ReadInstanceFile(full.string())});
  }
  if (config.Has("generate.family")) {
    const std::string family = config.GetString("generate.family", "");
    const int64_t count = config.GetInt("generate.count", 1);
    const int64_t first = config.GetInt("generate.first_seed", 0);
    const int periods = static_cast<int>(config.GetInt("generate.periods", 6));
    if (count < 0 || first < 0) throw ConfigError("generate.count and first_seed must be >= 0");
    const Config profile = config.Section("profile");
    for (int64_t k = 0; k < count; ++k) {
      MilpInstance inst = GenerateFamily(family, first + k, profile, periods);
      std::string id = inst.name;
      spec.instances.push_back({std::move(id), std::move(inst)});
    }
  }
  if (spec.instances.empty()) throw ConfigError("bench spec has no instances");
  return spec;
}

BenchSpec BenchSpec::ReadFile(const std::string& path) {
  const std::filesystem::path p(path);
  const std::string base = p.parent_path().empty() ? "." : p.parent_path().string();
  return FromConfig(Config::ReadFile(path), base);
}

BenchResult RunBench(const BenchSpec& spec) {
  BenchResult result;
  for (const BenchInstance& inst : spec.instances) {
    for (const std::string& pipeline : spec.pipelines) {
      for (uint64_t seed : spec.seeds) {
        RunConfig config = spec.base;
        config.pipeline = pipeline;
        config.seed = seed;
        config.instance_id = inst.id;
        BenchRow row;
        row.instance = inst.id;
        row.seed = seed;
        row.pipeline = pipeline;
        try {
          const RunResult run = RunPipeline(inst.milp, config);
          row.primal_integral = run.primal_integral;
          if (run.solution) row.final_obj = run.solution->objective;
          row.status = run.status;
        } catch (const std::exception&) {
          row.status = "error";
        }
        result.rows.push_back(std::move(row));
      }
    }
  }
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const BenchRow& a, const BenchRow& b) {
                     return std::tie(a.instance, a.pipeline, a.seed) <
                            std::tie(b.instance, b.pipeline, b.seed);
                   });
  for (const std::string& p : spec.pipelines) {
    result.aggregates.push_back(Aggregate(p, result.rows));
  }
  return result;
}

std::string BenchCsv(const BenchResult& result) {
  std::string out = "instance,seed,pipeline,primal_integral,final_obj,status\n";
  for (const BenchRow& r : result.rows) {
    out += r.instance + "," + std::to_string(r.seed) + "," + r.pipeline + "," +
           FormatNumber(r.primal_integral) + "," +
           (r.final_obj ? FormatNumber(*r.final_obj) : "") + "," + r.status + "\n";
  }
  for (const BenchAggregate& a : result.aggregates) {
    out += "aggregate,," + a.pipeline + "," + FormatNumber(a.mean) + ",,completed=" +
           std::to_string(a.completed) + ";failed=" + std::to_string(a.failed) + "\n";
  }
  return out;
}

std::string BenchJson(const BenchResult& result) {
  using nlohmann::json;
  json rows = json::array();
  for (const BenchRow& r : result.rows) {
    rows.push_back({{"instance", r.instance},
                    {"seed", r.seed},
                    {"pipeline", r.pipeline},
                    {"primal_integral", r.primal_integral},
                    {"final_obj", r.final_obj ? json(*r.final_obj) : json(nullptr)},
                    {"status", r.status}});
  }
  json aggregates = json::array();
  for (const BenchAggregate& a : result.aggregates) {
    aggregates.push_back({{"pipeline", a.pipeline},
                          {"completed", a.completed},
                          {"failed", a.failed},
                          {"mean", a.mean},
                          {"median", a.median},
                          {"stdev", a.stdev}});
  }
  return json{{"runs", rows}, {"aggregates", aggregates}}.dump(2) + "\n";
}

void WriteBenchOutputs(const BenchResult& result, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  for (const auto& [name, text] :
       {std::pair<std::string, std::string>{"results.csv", BenchCsv(result)},
        std::pair<std::string, std::string>{"results.json", BenchJson(result)}}) {
    std::ofstream f(dir / name, std::ios::binary);
    f << text;
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
  }
}

}  // namespace primalkit
