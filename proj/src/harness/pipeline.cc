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

#include "primalkit/harness/pipeline.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "primalkit/heuristics/feasibility_pump.h"
#include "primalkit/heuristics/item_placement.h"
#include "primalkit/heuristics/load_balancing.h"
#include "primalkit/heuristics/temporal.h"
#include "primalkit/lp/simplex.h"
#include "primalkit/mip/branch_and_bound.h"

namespace primalkit {
namespace {

struct PipelineDef {
  std::vector<std::string> stages;
  std::vector<double> budgets;
};

const std::map<std::string, PipelineDef>& Pipelines() {
  static const auto* defs = new std::map<std::string, PipelineDef>{
      {"item-placement",
       {{"greedy", "swap-lns", "math-heuristic", "submip-lns"}, {0.05, 0.15, 0.4, 0.4}}},
      {"load-balancing", {{"round-up", "adaptive-rounding", "rins"}, {0.1, 0.4, 0.5}}},
      {"lb-round-up", {{"round-up"}, {1.0}}},
      {"lb-adaptive", {{"round-up", "adaptive-rounding"}, {0.2, 0.8}}},
      {"temporal", {{"feasibility-pump", "rens", "rolling-horizon"}, {0.2, 0.3, 0.5}}},
      {"generic-fp", {{"feasibility-pump", "branch-and-bound"}, {0.3, 0.7}}},
  };
  return *defs;
}

const PipelineDef& Lookup(const std::string& name) {
  const auto it = Pipelines().find(name);
  if (it == Pipelines().end()) throw std::invalid_argument("unknown pipeline '" + name + "'");
  return it->second;
}

Budget RootBudget(const RunConfig& config) {
  if (config.clock == ClockMode::kWork) {
    return Budget(ClockMode::kWork, config.time_limit, config.work_limit);
  }
  return Budget(ClockMode::kWall, config.time_limit, Budget::kUnlimitedWork);
}

class Runner {
 public:
  Runner(const MilpInstance& inst, const RunConfig& config)
      : inst_(inst), config_(config), root_(RootBudget(config)) {
    const PipelineDef& def = Lookup(config.pipeline);
    stages_ = def.stages;
    budgets_ = config.stage_budgets.empty() ? def.budgets : config.stage_budgets;
  }

  // Records `values` when they are feasible, improving and inside the limit.
  bool Offer(const std::vector<double>& values, const std::string& source) {
    if (values.size() != inst_.variables.size()) return false;
    const double now = root_.Elapsed();
    if (now > config_.time_limit) return false;
    Solution sol = MakeCertifiedSolution(inst_, values);
    if (sol.feasible != FeasibilityStatus::kFeasible) return false;
    if (!result_.trajectory.Record(now, sol.objective, source)) return false;
    result_.solution = std::move(sol);
    return true;
  }

  const std::optional<Solution>& best() const { return result_.solution; }

  // Runs stage k with its share of what is left; skipped once the root
  // budget is gone. Exceptions end the stage, not the run.
  void Stage(size_t k, const std::function<void(const Budget&)>& body) {
    StageReport report;
    report.name = stages_[k];
    report.start = root_.Elapsed();
    if (!root_.Exhausted()) {
      const double rest = std::accumulate(budgets_.begin() + k, budgets_.end(), 0.0);
      const double share = rest > 0.0 ? budgets_[k] / rest : 0.0;
      try {
        body(root_.Slice(share));
      } catch (const std::exception& e) {
        if (!result_.message.empty()) result_.message += "; ";
        result_.message += stages_[k] + ": " + e.what();
      }
    }
    report.end = root_.Elapsed();
    if (best()) report.best = best()->objective;
    result_.stages.push_back(report);
  }

  RunResult Finish() {
    result_.trajectory.instance_id = config_.instance_id;
    result_.trajectory.pipeline_id = config_.pipeline;
    result_.trajectory.seed = config_.seed;
    result_.trajectory.time_limit = config_.time_limit;
    result_.cap = config_.cap.value_or(CapBound(inst_));
    result_.primal_integral =
        PrimalIntegral(result_.trajectory, result_.cap, config_.reference);
    result_.status = result_.solution ? "feasible" : "no_solution";
    return std::move(result_);
  }

 private:
  const MilpInstance& inst_;
  const RunConfig& config_;
  Budget root_;
  std::vector<std::string> stages_;
  std::vector<double> budgets_;
  RunResult result_;
};

void RunItemPlacement(const MilpInstance& inst, const RunConfig& config, Runner& run) {
  const std::optional<ItemPlacementInstance> parsed = ItemPlacementFromMilp(inst);
  if (!parsed) throw std::invalid_argument("instance is not an item-placement model");
  const ItemPlacementInstance& ip = *parsed;
  const BigItems big = DetectBigItems(ip, std::min(5, std::min(ip.n_containers, ip.n_items)));
  std::optional<Placement> current;
  auto offer = [&](const Placement& p, const std::string& source) {
    if (run.Offer(PlacementValues(ip, p), source)) current = p;
  };

  run.Stage(0, [&](const Budget&) {
    try {
      offer(GreedyConstruct(ip, PrefixBigItems(ip, big.items)), "greedy");
    } catch (const PlacementError&) {
      offer(GreedyConstruct(ip, EmptyPlacement(ip)), "greedy");
    }
  });
  run.Stage(1, [&](const Budget& budget) {
    if (!current) return;
    LnsSwap(ip, *current, budget, config.seed,
            [&](const Placement& p, double) { offer(p, "swap-lns"); });
  });
  run.Stage(2, [&](const Budget& budget) {
    const MathHeurResult math = MathHeurConstruct(ip, big.items, {}, budget);
    offer(math.placement, "math-heuristic");
  });
  run.Stage(3, [&](const Budget& budget) {
    if (!current) return;
    LnsSubMipOptions options;
    options.first_container = static_cast<int>(big.items.size());
    LnsSubMip(ip, *current, options, budget, config.seed,
              [&](const Placement& p, double) { offer(p, "submip-lns"); });
  });
}

// Opens every machine; used when the root LP cannot be solved.
void OfferAllOpen(const LoadBalancingInstance& lb, const Budget& budget, Runner& run) {
  const auto flows = FlowsForOpenMachines(lb, std::vector<bool>(lb.n_machines, true), budget);
  if (flows) run.Offer(*flows, "all-open");
}

void RunLoadBalancing(const MilpInstance& inst, const RunConfig& config, Runner& run) {
  const std::optional<LoadBalancingInstance> parsed = LoadBalancingFromMilp(inst);
  if (!parsed) throw std::invalid_argument("instance is not a load-balancing model");
  const LoadBalancingInstance& lb = *parsed;

  run.Stage(0, [&](const Budget& budget) {
    const LpSolution lp = SolveLp(ToMilp(lb, false), {}, {}, budget);
    if (lp.optimal()) {
      run.Offer(RoundUpAll(lb, lp).values, "round-up");
    } else if (lp.status != LpStatus::kIterationLimit) {
      OfferAllOpen(lb, budget, run);
    }
  });
  if (config.pipeline == "lb-round-up") return;
  run.Stage(1, [&](const Budget& budget) {
    try {
      AdaptiveRounding(lb, {}, budget,
                       [&](const Solution& s) { run.Offer(s.values, "adaptive-rounding"); });
    } catch (const std::runtime_error&) {
      if (!run.best()) OfferAllOpen(lb, budget, run);
      throw;
    }
  });
  if (config.pipeline == "lb-adaptive") return;
  run.Stage(2, [&](const Budget& budget) {
    if (!run.best()) return;
    const RinsResult rins = RinsImprove(lb, *run.best(), budget);
    run.Offer(rins.solution.values, "rins");
  });
}

void RunTemporal(const MilpInstance& inst, const RunConfig& config, Runner& run) {
  const PeriodLabeling labels = InferPeriods(inst);
  FpConfig fp;
  fp.seed = config.seed;
  run.Stage(0, [&](const Budget& budget) {
    const FpResult r = FeasibilityPump(inst, fp, budget);
    if (r.solution) run.Offer(r.solution->values, "feasibility-pump");
  });
  run.Stage(1, [&](const Budget& budget) {
    if (!run.best()) return;
    const RensResult r = RensImprove(inst, labels, *run.best(), budget);
    run.Offer(r.solution.values, "rens");
  });
  run.Stage(2, [&](const Budget& budget) {
    const RollingHorizonResult r =
        RollingHorizon(inst, labels, HorizonSchedule::Default(labels.horizon), budget);
    if (r.solution) run.Offer(r.solution->values, "rolling-horizon");
  });
}

void RunGenericFp(const MilpInstance& inst, const RunConfig& config, Runner& run) {
  FpConfig fp;
  fp.seed = config.seed;
  run.Stage(0, [&](const Budget& budget) {
    const FpResult r = FeasibilityPump(inst, fp, budget);
    if (r.solution) run.Offer(r.solution->values, "feasibility-pump");
  });
  run.Stage(1, [&](const Budget& budget) {
    BnbOptions options;
    if (run.best()) options.start = *run.best();
    options.on_incumbent = [&](const Solution& s) { run.Offer(s.values, "branch-and-bound"); };
    SolveBnb(inst, options, budget);
  });
}

}  // namespace

const std::vector<std::string>& PipelineNames() {
  static const auto* names = [] {
    auto* out = new std::vector<std::string>;
    for (const auto& [name, def] : Pipelines()) out->push_back(name);
    return out;
  }();
  return *names;
}

int StageCount(const std::string& pipeline) {
  return static_cast<int>(Lookup(pipeline).stages.size());
}

std::vector<double> DefaultStageBudgets(const std::string& pipeline) {
  return Lookup(pipeline).budgets;
}

void RunConfig::Validate() const {
  const PipelineDef& def = Lookup(pipeline);
  if (!(time_limit >= 0.0) || !std::isfinite(time_limit)) {
    throw std::invalid_argument("time limit must be finite and nonnegative");
  }
  if (clock == ClockMode::kWork && work_limit <= 0) {
    throw std::invalid_argument("work clock needs a positive work limit");
  }
  if (!stage_budgets.empty()) {
    if (stage_budgets.size() != def.stages.size()) {
      throw std::invalid_argument("pipeline '" + pipeline + "' has " +
                                  std::to_string(def.stages.size()) + " stages");
    }
    double sum = 0.0;
    for (double b : stage_budgets) {
      if (!(b >= 0.0)) throw std::invalid_argument("stage budgets must be nonnegative");
      sum += b;
    }
    if (sum > 1.0 + 1e-9) throw std::invalid_argument("stage budgets sum above 1");
  }
}

RunResult RunPipeline(const MilpInstance& inst, const RunConfig& config) {
  config.Validate();
  inst.Validate();
  Runner run(inst, config);
  const std::string& p = config.pipeline;
  if (p == "item-placement") {
    RunItemPlacement(inst, config, run);
  } else if (p == "load-balancing" || p == "lb-round-up" || p == "lb-adaptive") {
    RunLoadBalancing(inst, config, run);
  } else if (p == "temporal") {
    RunTemporal(inst, config, run);
  } else {
    RunGenericFp(inst, config, run);
  }
  return run.Finish();
}

std::string TrajectoryJson(const RunResult& result, const RunConfig& config) {
  using nlohmann::json;
  json events = json::array();
  for (const TrajectoryEvent& e : result.trajectory.events()) {
    events.push_back({{"time", e.time}, {"bound", e.bound}, {"source", e.source}});
  }
  json out = {
      {"instance", config.instance_id},
      {"pipeline", config.pipeline},
      {"seed", config.seed},
      {"time_limit", config.time_limit},
      {"clock", config.clock == ClockMode::kWork ? "work" : "wall"},
      {"cap", result.cap},
      {"status", result.status},
      {"primal_integral", result.primal_integral},
      {"events", events},
  };
  if (config.clock == ClockMode::kWork) out["work_limit"] = config.work_limit;
  out["reference"] = config.reference ? json(*config.reference) : json(nullptr);
  out["final_objective"] = result.solution ? json(result.solution->objective) : json(nullptr);
  if (!result.message.empty()) out["message"] = result.message;
  return out.dump(2) + "\n";
}

}  // namespace primalkit
