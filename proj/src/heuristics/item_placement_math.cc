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

// Math-heuristics for item placement: the candidate assignment model, the
// two-step construction and the pairwise sub-MIP neighborhood.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <string>

#include "primalkit/heuristics/item_placement.h"
#include "primalkit/mip/submip.h"

namespace primalkit {
namespace {

bool SubsetFits(const ItemPlacementInstance& inst, int big_item,
                const std::vector<int>& items) {
  for (int k = 0; k < inst.n_dims; ++k) {
    double load = big_item >= 0 ? inst.a[big_item][k] : 0.0;
    for (int i : items) load += inst.a[i][k];
    if (load > inst.b[k] + 1e-9 * (1 + inst.b[k])) return false;
  }
  return true;
}

std::vector<double> UnevennessByContainer(const ItemPlacementInstance& inst,
                                          const Placement& p, int container) {
  std::vector<double> fill(inst.n_dims, 0.0);
  for (int i = 0; i < inst.n_items; ++i) {
    if (p.container_of[i] != container) continue;
    for (int k = 0; k < inst.n_dims; ++k) fill[k] += inst.d[i][k];
  }
  for (double& f : fill) f = std::max(0.0, 1.0 - f);
  return fill;
}

// Fixes every x column: items in `free_containers` may move among them, all
// other items stay where `p` put them (unassigned items only avoid
// `closed_containers`).
SubMipSpec NeighborhoodSpec(const ItemPlacementInstance& inst, const Placement& p,
                            const std::vector<bool>& free_container) {
  SubMipSpec spec;
  for (int i = 0; i < inst.n_items; ++i) {
    const int c = p.container_of[i];
    const bool movable = c < 0 || free_container[c];
    for (int j = 0; j < inst.n_containers; ++j) {
      if (movable) {
        if (!free_container[j]) spec.fixings.emplace_back(inst.XIndex(i, j), 0.0);
      } else {
        spec.fixings.emplace_back(inst.XIndex(i, j), j == c ? 1.0 : 0.0);
      }
    }
  }
  return spec;
}

}  // namespace

std::vector<Candidate> EnumerateCandidates(const ItemPlacementInstance& inst,
                                           int big_item, const std::vector<int>& small,
                                           int cand_max) {
  std::vector<int> sorted = small;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Candidate> out;
  std::vector<int> current;
  std::function<void(size_t)> rec = [&](size_t start) {
    if (SubsetFits(inst, big_item, current)) {
      out.push_back({current});
    } else {
      return;  // supersets cannot fit either
    }
    if (static_cast<int>(current.size()) == cand_max) return;
    for (size_t p = start; p < sorted.size(); ++p) {
      current.push_back(sorted[p]);
      rec(p + 1);
      current.pop_back();
    }
  };
  rec(0);
  std::stable_sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) {
    return x.items.size() < y.items.size();
  });
  return out;
}

AssignmentModel BuildAssignmentModel(const ItemPlacementInstance& inst,
                                     const std::vector<int>& big,
                                     const MathHeurOptions& options) {
  inst.Validate();
  const int B = static_cast<int>(big.size());
  const int J = inst.n_containers, K = inst.n_dims;
  if (B > J) throw std::invalid_argument("more big items than containers");
  const int L = J - B;
  std::vector<bool> is_big(inst.n_items, false);
  for (int i : big) is_big[i] = true;
  std::vector<int> small;
  for (int i = 0; i < inst.n_items; ++i) {
    if (!is_big[i]) small.push_back(i);
  }
  std::vector<double> small_a(K, 0.0), small_d(K, 0.0);
  for (int i : small) {
    for (int k = 0; k < K; ++k) {
      small_a[k] += inst.a[i][k];
      small_d[k] += inst.d[i][k];
    }
  }

  AssignmentModel model;
  MilpInstance& m = model.milp;
  m.name = "item_placement_assignment";
  for (int r = 0; r < B; ++r) {
    std::vector<Candidate> cands = EnumerateCandidates(inst, big[r], small, options.cand_max);
    cands.erase(cands.begin());  // the empty candidate adds nothing
    const auto first_multi = std::find_if(cands.begin(), cands.end(), [](const Candidate& c) {
      return c.items.size() > 1;
    });
    const int singles = static_cast<int>(first_multi - cands.begin());
    const int room = std::max(0, options.max_candidates_per_container - singles);
    if (static_cast<int>(cands.size()) - singles > room) {
      // Keep the multi-item candidates that bring the fill closest to 1.
      auto score = [&](const Candidate& c) {
        double s = 0.0;
        for (int k = 0; k < K; ++k) {
          double fill = inst.d[big[r]][k];
          for (int i : c.items) fill += inst.d[i][k];
          s += inst.alpha[k] * std::abs(1.0 - fill);
        }
        return s;
      };
      std::stable_sort(first_multi, cands.end(), [&](const Candidate& x, const Candidate& y) {
        return score(x) < score(y);
      });
      cands.resize(singles + room);
    }
    for (size_t c = 0; c < cands.size(); ++c) {
      m.variables.push_back({"u_" + std::to_string(r) + "_" + std::to_string(c), 0.0, 1.0,
                             Integrality::kBinary});
      model.column_candidate.push_back(cands[c]);
      model.column_container.push_back(r);
    }
  }
  const int num_u = m.num_variables();
  auto add_var = [&m](const std::string& name, double upper) {
    m.variables.push_back({name, 0.0, upper, Integrality::kContinuous});
    return m.num_variables() - 1;
  };
  auto jk = [](int j, int k) { return std::to_string(j) + "_" + std::to_string(k); };
  std::vector<std::vector<int>> y(J, std::vector<int>(K));
  std::vector<std::vector<int>> f(J, std::vector<int>(K, -1));
  for (int j = 0; j < J; ++j) {
    for (int k = 0; k < K; ++k) y[j][k] = add_var("y_" + jk(j, k), kInfinity);
  }
  for (int j = B; j < J; ++j) {
    for (int k = 0; k < K; ++k) f[j][k] = add_var("f_" + jk(j, k), small_d[k]);
  }
  std::vector<int> z(K);
  for (int k = 0; k < K; ++k) z[k] = add_var("z_" + std::to_string(k), kInfinity);

  auto candidate_sum = [&](int col, int k, bool use_a) {
    double s = 0.0;
    for (int i : model.column_candidate[col].items) s += use_a ? inst.a[i][k] : inst.d[i][k];
    return s;
  };
  for (int r = 0; r < B; ++r) {
    for (int k = 0; k < K; ++k) {
      LinearConstraint cap{"cap_" + jk(r, k), {}, ConstraintSense::kLessEqual,
                           inst.b[k] - inst.a[big[r]][k]};
      LinearConstraint uneven{"uneven_" + jk(r, k), {}, ConstraintSense::kGreaterEqual,
                              1.0 - inst.d[big[r]][k]};
      for (int col = 0; col < num_u; ++col) {
        if (model.column_container[col] != r) continue;
        cap.terms.push_back({col, candidate_sum(col, k, true)});
        uneven.terms.push_back({col, candidate_sum(col, k, false)});
      }
      uneven.terms.push_back({y[r][k], 1.0});
      m.constraints.push_back(std::move(cap));
      m.constraints.push_back(std::move(uneven));
    }
  }
  for (int k = 0; k < K; ++k) {
    // The small-item mass not chosen for the prefix lands in the other
    // containers as a continuous fill.
    LinearConstraint fill{"fill_" + std::to_string(k), {}, ConstraintSense::kEqual, small_d[k]};
    LinearConstraint acap{"rest_capacity_" + std::to_string(k), {},
                          ConstraintSense::kGreaterEqual, small_a[k] - L * inst.b[k]};
    for (int col = 0; col < num_u; ++col) {
      fill.terms.push_back({col, candidate_sum(col, k, false)});
      acap.terms.push_back({col, candidate_sum(col, k, true)});
    }
    for (int j = B; j < J; ++j) fill.terms.push_back({f[j][k], 1.0});
    m.constraints.push_back(std::move(fill));
    if (acap.rhs > 0.0) m.constraints.push_back(std::move(acap));
  }
  for (int j = B; j < J; ++j) {
    for (int k = 0; k < K; ++k) {
      m.constraints.push_back({"uneven_" + jk(j, k),
                               {{f[j][k], 1.0}, {y[j][k], 1.0}},
                               ConstraintSense::kGreaterEqual,
                               1.0});
    }
  }
  for (int j = 0; j < J; ++j) {
    for (int k = 0; k < K; ++k) {
      m.constraints.push_back({"link_" + jk(j, k),
                               {{y[j][k], 1.0}, {z[k], -1.0}},
                               ConstraintSense::kLessEqual,
                               0.0});
    }
  }
  for (int i : small) {
    LinearConstraint sos;
    sos.name = "sos_item_" + std::to_string(i);
    sos.sos1_group = sos.name;
    for (int col = 0; col < num_u; ++col) {
      const auto& items = model.column_candidate[col].items;
      if (std::find(items.begin(), items.end(), i) != items.end()) {
        sos.terms.push_back({col, static_cast<double>(sos.terms.size() + 1)});
      }
    }
    if (!sos.terms.empty()) m.constraints.push_back(std::move(sos));
  }
  for (int j = 0; j < J; ++j) {
    for (int k = 0; k < K; ++k) m.objective.terms.push_back({y[j][k], inst.alpha[k]});
  }
  for (int k = 0; k < K; ++k) m.objective.terms.push_back({z[k], inst.beta[k]});
  model.y_column = y;
  model.f_column = f;
  model.z_column = z;
  return model;
}

std::optional<std::vector<double>> AssignmentPoint(const ItemPlacementInstance& inst,
                                                   const std::vector<int>& big,
                                                   const AssignmentModel& model,
                                                   const Placement& placement) {
  const int B = static_cast<int>(big.size());
  const int K = inst.n_dims;
  std::vector<double> values(model.milp.num_variables(), 0.0);
  std::map<std::pair<int, int>, int> singleton;  // (container, item) -> column
  for (size_t col = 0; col < model.column_candidate.size(); ++col) {
    const auto& items = model.column_candidate[col].items;
    if (items.size() == 1) singleton[{model.column_container[col], items[0]}] = col;
  }
  std::vector<bool> is_big(inst.n_items, false);
  for (int r = 0; r < B; ++r) {
    if (placement.container_of[big[r]] != r) return std::nullopt;
    is_big[big[r]] = true;
  }
  for (int i = 0; i < inst.n_items; ++i) {
    const int c = placement.container_of[i];
    if (is_big[i] || c >= B) continue;
    auto it = singleton.find({c, i});
    if (it == singleton.end()) return std::nullopt;
    values[it->second] = 1.0;
  }
  for (int k = 0; k < K; ++k) {
    double z = 0.0;
    for (int j = 0; j < inst.n_containers; ++j) {
      double fill = 0.0;
      for (int i = 0; i < inst.n_items; ++i) {
        if (placement.container_of[i] == j && (j >= B || !is_big[i])) fill += inst.d[i][k];
      }
      if (j < B) fill += inst.d[big[j]][k];
      if (j >= B) values[model.f_column[j][k]] = fill;
      const double y = std::max(0.0, 1.0 - fill);
      values[model.y_column[j][k]] = y;
      z = std::max(z, y);
    }
    values[model.z_column[k]] = z;
  }
  if (!CheckFeasibility(model.milp, values).feasible) return std::nullopt;
  return values;
}

MathHeurResult MathHeurConstruct(const ItemPlacementInstance& inst,
                                 const std::vector<int>& big,
                                 const MathHeurOptions& options, const Budget& budget) {
  inst.Validate();
  MathHeurResult result;
  const int B = static_cast<int>(big.size());
  Placement partial = EmptyPlacement(inst);
  std::optional<Placement> prefix;
  bool step1_ok = true;
  try {
    prefix = PrefixBigItems(inst, big);
    partial = *prefix;
  } catch (const PlacementError&) {
    step1_ok = false;
  }

  if (step1_ok && B > 0) {
    const AssignmentModel model = BuildAssignmentModel(inst, big, options);
    BnbOptions bnb;
    bnb.node_limit = options.step1_node_limit;
    bnb.gap_limit = options.gap_limit;
    bnb.up_branch_first = true;
    try {
      const Placement greedy = GreedyConstruct(inst, partial);
      if (auto point = AssignmentPoint(inst, big, model, greedy)) {
        bnb.start = Solution{std::move(*point), 0.0, FeasibilityStatus::kUnchecked};
      }
    } catch (const PlacementError&) {
    }
    const BnbResult r = SolveBnb(model.milp, bnb, budget.Slice(0.5));
    result.step1_status = r.status;
    if (r.incumbent) {
      for (size_t col = 0; col < model.column_candidate.size(); ++col) {
        if (r.incumbent->values[col] < 0.5) continue;
        for (int i : model.column_candidate[col].items) {
          partial.container_of[i] = model.column_container[col];
        }
      }
    } else {
      step1_ok = false;
    }
  }

  std::optional<Placement> built;
  if (step1_ok) {
    if (partial.complete()) {
      built = partial;
    } else {
      std::vector<bool> free_container(inst.n_containers, false);
      for (int j = B; j < inst.n_containers; ++j) free_container[j] = true;
      BnbOptions bnb;
      bnb.node_limit = options.step2_node_limit;
      bnb.gap_limit = options.gap_limit;
      bnb.up_branch_first = true;
      try {
        const Placement start = GreedyConstruct(inst, partial, free_container);
        bnb.start = Solution{PlacementValues(inst, start), 0.0, FeasibilityStatus::kUnchecked};
      } catch (const PlacementError&) {
      }
      const MilpInstance sub =
          BuildSubMip(ToMilp(inst), NeighborhoodSpec(inst, partial, free_container));
      const BnbResult r = SolveBnb(sub, bnb, budget);
      result.step2_status = r.status;
      if (r.incumbent) built = PlacementFromValues(inst, r.incumbent->values);
    }
  }

  if (!built) {
    result.used_fallback = true;
    std::vector<Placement> starts = {partial};
    if (prefix) starts.push_back(*prefix);
    starts.push_back(EmptyPlacement(inst));
    std::optional<PlacementError> last_error;
    for (const Placement& s : starts) {
      try {
        built = GreedyConstruct(inst, s);
        break;
      } catch (const PlacementError& e) {
        last_error = e;
      }
    }
    if (!built) throw *last_error;
  }
  result.placement = *built;
  result.objective = PlacementObjective(inst, result.placement);
  return result;
}

LnsResult LnsSubMip(const ItemPlacementInstance& inst, const Placement& incumbent,
                    const LnsSubMipOptions& options, const Budget& budget,
                    uint64_t /*seed*/, const PlacementCallback& on_improvement) {
  if (!incumbent.complete() || !CapacityFeasible(inst, incumbent)) {
    throw std::invalid_argument("sub-MIP search needs a feasible incumbent");
  }
  LnsResult result;
  result.placement = incumbent;
  result.objective = PlacementObjective(inst, incumbent);

  std::vector<int> eligible;
  for (int j = std::max(0, options.first_container); j < inst.n_containers; ++j) {
    eligible.push_back(j);
  }
  if (eligible.size() < 2) {
    eligible.resize(inst.n_containers);
    std::iota(eligible.begin(), eligible.end(), 0);
  }
  std::map<std::pair<int, int>, bool> exhausted;
  for (size_t p = 0; p < eligible.size(); ++p) {
    for (size_t q = p + 1; q < eligible.size(); ++q) {
      exhausted[{eligible[p], eligible[q]}] = false;
    }
  }
  const MilpInstance milp = ToMilp(inst);

  while (!budget.Exhausted()) {
    std::vector<double> score(inst.n_containers, 0.0);
    for (int j : eligible) {
      const std::vector<double> y = UnevennessByContainer(inst, result.placement, j);
      for (int k = 0; k < inst.n_dims; ++k) score[j] += inst.alpha[k] * y[k];
    }
    std::optional<std::pair<int, int>> pick;
    double best = -kInfinity;
    for (const auto& [pair, done] : exhausted) {
      if (done) continue;
      const double s = score[pair.first] + score[pair.second];
      if (s > best) {  // map order gives the index tie-break
        best = s;
        pick = pair;
      }
    }
    if (!pick) break;
    const auto [j1, j2] = *pick;
    std::vector<bool> free_container(inst.n_containers, false);
    free_container[j1] = free_container[j2] = true;
    const MilpInstance sub =
        BuildSubMip(milp, NeighborhoodSpec(inst, result.placement, free_container));
    BnbOptions bnb;
    bnb.node_limit = options.node_limit;
    bnb.gap_limit = options.gap_limit;
    bnb.start =
        Solution{PlacementValues(inst, result.placement), 0.0, FeasibilityStatus::kUnchecked};
    const BnbResult r = SolveBnb(sub, bnb, budget);
    bool accepted = false;
    if (r.incumbent) {
      Placement candidate = PlacementFromValues(inst, r.incumbent->values);
      const double obj = PlacementObjective(inst, candidate);
      if (candidate.complete() && CapacityFeasible(inst, candidate) &&
          obj < result.objective - 1e-9 * (1 + std::abs(result.objective))) {
        result.placement = std::move(candidate);
        result.objective = obj;
        ++result.accepted;
        accepted = true;
        result.trajectory.Record(budget.Elapsed(), obj, "lns_submip");
        if (on_improvement) on_improvement(result.placement, obj);
      }
    }
    if (accepted) {
      for (auto& [pair, done] : exhausted) {
        if (pair.first == j1 || pair.first == j2 || pair.second == j1 || pair.second == j2) {
          done = false;
        }
      }
    } else {
      exhausted[*pick] = true;
    }
  }
  result.budget_exhausted = budget.Exhausted();
  return result;
}

}  // namespace primalkit
