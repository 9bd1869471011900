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

#include "primalkit/heuristics/feasibility_pump.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <stdexcept>

#include "primalkit/lp/simplex.h"

namespace primalkit {
namespace {

constexpr double kMeetTolerance = 1e-6;

class Pump {
 public:
  Pump(const MilpInstance& inst, const FpConfig& config, const Budget& budget)
      : inst_(inst), cfg_(config), budget_(budget), rng_(config.seed) {
    for (int j = 0; j < inst.num_variables(); ++j) {
      if (inst.variables[j].IsDiscrete()) discrete_.push_back(j);
    }
    base_ = inst;
    base_.objective = {};
  }

  FpResult Run() {
    LpSolution lp = SolveLp(inst_, {}, {}, budget_);
    result_.iterations = 1;
    if (lp.status == LpStatus::kUnbounded) {
      // Any LP-feasible point will do as a starting point.
      lp = SolveLp(base_, {}, {}, budget_);
      ++result_.iterations;
    }
    switch (lp.status) {
      case LpStatus::kOptimal:
        break;
      case LpStatus::kInfeasible:
        return Finish(FpStatus::kInfeasible);
      case LpStatus::kIterationLimit:
        return Finish(FpStatus::kIterationLimit);
      default:
        return Finish(FpStatus::kNumericalFailure);
    }
    x_ = lp.values;
    basis_ = lp.basis;
    if (TryAccept(x_)) return Finish(FpStatus::kFeasible);

    std::vector<double> rounded = Round(x_);
    double best = kInfinity;
    int stall = 0;
    for (int it = 0; it < cfg_.max_iters; ++it) {
      FpPerturbation perturbation = FpPerturbation::kNone;
      if (Seen(rounded)) {
        WeakFlip(rounded);
        perturbation = FpPerturbation::kWeak;
        ++result_.weak_perturbations;
        if (Seen(rounded)) {
          StrongFlip(rounded);
          perturbation = FpPerturbation::kStrong;
          ++result_.strong_perturbations;
        }
      } else if (stall >= cfg_.cycle_window) {
        StrongFlip(rounded);
        perturbation = FpPerturbation::kStrong;
        ++result_.strong_perturbations;
      }
      // Weak flips do not reset stall detection, so alternating weak flips
      // still escalate to a strong perturbation.
      if (perturbation == FpPerturbation::kStrong) {
        best = kInfinity;
        stall = 0;
      }

      std::vector<double> candidate = x_;
      for (size_t k = 0; k < discrete_.size(); ++k) candidate[discrete_[k]] = rounded[k];
      if (TryAccept(candidate)) return Finish(FpStatus::kFeasible);
      history_.push_back(rounded);
      if (static_cast<int>(history_.size()) > cfg_.cycle_window) history_.pop_front();
      if (budget_.Exhausted()) return Finish(FpStatus::kIterationLimit);

      double distance = 0.0;
      const LpStatus status = Project(rounded, &distance);
      ++result_.iterations;
      if (status == LpStatus::kIterationLimit) return Finish(FpStatus::kIterationLimit);
      if (status != LpStatus::kOptimal) return Finish(FpStatus::kNumericalFailure);
      result_.log.push_back({distance, perturbation});
      if (distance < best - 1e-9) {
        best = distance;
        stall = 0;
      } else {
        ++stall;
      }
      if (distance <= kMeetTolerance && TryAccept(x_)) return Finish(FpStatus::kFeasible);
      rounded = Round(x_);
    }
    return Finish(FpStatus::kIterationLimit);
  }

 private:
  FpResult Finish(FpStatus status) {
    result_.status = status;
    return std::move(result_);
  }

  // Accepts `values` with discrete entries rounded when they are within the
  // integrality tolerance and the point is feasible.
  bool TryAccept(const std::vector<double>& values) {
    std::vector<double> point = values;
    for (int j : discrete_) {
      if (std::abs(point[j] - std::round(point[j])) > kIntegralityTolerance) return false;
      point[j] = std::round(point[j]);
    }
    Solution sol = MakeCertifiedSolution(inst_, std::move(point));
    if (sol.feasible != FeasibilityStatus::kFeasible) return false;
    result_.solution = std::move(sol);
    return true;
  }

  std::vector<double> Round(const std::vector<double>& x) const {
    std::vector<double> out(discrete_.size());
    for (size_t k = 0; k < discrete_.size(); ++k) {
      const VariableDef& v = inst_.variables[discrete_[k]];
      out[k] = std::clamp(std::round(x[discrete_[k]]), std::ceil(v.lower), std::floor(v.upper));
    }
    return out;
  }

  bool Seen(const std::vector<double>& rounded) const {
    return std::find(history_.begin(), history_.end(), rounded) != history_.end();
  }

  // Moves entry k one unit away from its current value, towards `toward` when
  // that is possible.
  void Step(std::vector<double>& rounded, size_t k, double toward) const {
    const VariableDef& v = inst_.variables[discrete_[k]];
    const double lo = std::ceil(v.lower), up = std::floor(v.upper);
    double next = toward > rounded[k] ? rounded[k] + 1 : rounded[k] - 1;
    if (next > up) next = rounded[k] - 1;
    if (next < lo) next = rounded[k] + 1;
    if (next >= lo && next <= up) rounded[k] = next;
  }

  void WeakFlip(std::vector<double>& rounded) const {
    std::vector<size_t> order(discrete_.size());
    std::iota(order.begin(), order.end(), 0);
    auto score = [&](size_t k) { return std::abs(x_[discrete_[k]] - rounded[k]); };
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return score(a) > score(b); });
    const size_t count = std::min(order.size(), static_cast<size_t>(cfg_.weak_flip_count));
    for (size_t i = 0; i < count; ++i) Step(rounded, order[i], x_[discrete_[order[i]]]);
  }

  void StrongFlip(std::vector<double>& rounded) {
    const size_t n = discrete_.size();
    const size_t count = std::max<size_t>(
        1, static_cast<size_t>(std::ceil(cfg_.strong_flip_fraction * n - 1e-9)));
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (size_t i = 0; i < std::min(count, n); ++i) {
      std::swap(order[i], order[std::uniform_int_distribution<size_t>(i, n - 1)(rng_)]);
      const size_t k = order[i];
      const double direction = std::bernoulli_distribution(0.5)(rng_) ? 1.0 : -1.0;
      Step(rounded, k, rounded[k] + direction);
    }
  }

  // L1 projection: bound-valued targets contribute x_j - lo or up - x_j, the
  // others an auxiliary d_j >= |x_j - r_j|.
  LpStatus Project(const std::vector<double>& rounded, double* distance) {
    MilpInstance proj = base_;
    for (size_t k = 0; k < discrete_.size(); ++k) {
      const int j = discrete_[k];
      const VariableDef& v = inst_.variables[j];
      const double r = rounded[k];
      if (r <= v.lower) {
        proj.objective.terms.push_back({j, 1.0});
        proj.objective.offset -= r;
      } else if (r >= v.upper) {
        proj.objective.terms.push_back({j, -1.0});
        proj.objective.offset += r;
      } else {
        const int d = proj.num_variables();
        proj.variables.push_back({"fp_d_" + std::to_string(j), 0.0, kInfinity,
                                  Integrality::kContinuous});
        proj.constraints.push_back(
            {"fp_lo_" + std::to_string(j), {{d, 1.0}, {j, -1.0}},
             ConstraintSense::kGreaterEqual, -r});
        proj.constraints.push_back(
            {"fp_up_" + std::to_string(j), {{d, 1.0}, {j, 1.0}},
             ConstraintSense::kGreaterEqual, r});
        proj.objective.terms.push_back({d, 1.0});
      }
    }
    const LpSolution lp = SolveLp(proj, {}, basis_, budget_);
    if (!lp.optimal()) return lp.status;
    basis_ = lp.basis;
    x_.assign(lp.values.begin(), lp.values.begin() + inst_.num_variables());
    *distance = std::max(0.0, lp.objective);
    return lp.status;
  }

  const MilpInstance& inst_;
  const FpConfig cfg_;
  const Budget& budget_;
  std::mt19937_64 rng_;
  std::vector<int> discrete_;
  MilpInstance base_;
  std::vector<double> x_;
  std::vector<BasisStatus> basis_;
  std::deque<std::vector<double>> history_;
  FpResult result_;
};

}  // namespace

void FpConfig::Validate() const {
  if (max_iters < 1 || cycle_window < 1 || weak_flip_count < 1) {
    throw std::invalid_argument("feasibility pump counts must be positive");
  }
  if (!(strong_flip_fraction > 0.0 && strong_flip_fraction <= 1.0)) {
    throw std::invalid_argument("strong_flip_fraction must lie in (0, 1]");
  }
}

FpConfig FpConfig::FromConfig(const Config& config) {
  FpConfig c;
  c.max_iters = static_cast<int>(config.GetInt("max_iters", c.max_iters));
  c.cycle_window = static_cast<int>(config.GetInt("cycle_window", c.cycle_window));
  c.weak_flip_count = static_cast<int>(config.GetInt("weak_flip_count", c.weak_flip_count));
  c.strong_flip_fraction = config.GetDouble("strong_flip_fraction", c.strong_flip_fraction);
  c.seed = static_cast<uint64_t>(config.GetInt("seed", static_cast<int64_t>(c.seed)));
  return c;
}

FpResult FeasibilityPump(const MilpInstance& inst, const FpConfig& config,
                         const Budget& budget) {
  config.Validate();
  inst.Validate();
  return Pump(inst, config, budget).Run();
}

std::string_view ToString(FpStatus status) {
  switch (status) {
    case FpStatus::kFeasible:
      return "feasible";
    case FpStatus::kInfeasible:
      return "infeasible";
    case FpStatus::kIterationLimit:
      return "iteration_limit";
    case FpStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "?";
}

}  // namespace primalkit
