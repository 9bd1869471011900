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

#include "primalkit/heuristics/item_placement.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>

namespace primalkit {
namespace {

// Slack allowed on capacity rows; far below the checker's tolerance.
double CapacitySlack(double capacity) { return 1e-9 * (1 + std::abs(capacity)); }

bool Fits(const ItemPlacementInstance& inst, const std::vector<double>& load, int item) {
  for (int k = 0; k < inst.n_dims; ++k) {
    if (load[k] + inst.a[item][k] > inst.b[k] + CapacitySlack(inst.b[k])) return false;
  }
  return true;
}

struct Loads {
  std::vector<std::vector<double>> a;  // [container][dim]
  std::vector<std::vector<double>> d;
};

Loads ComputeLoads(const ItemPlacementInstance& inst, const Placement& p) {
  Loads loads{std::vector<std::vector<double>>(inst.n_containers,
                                               std::vector<double>(inst.n_dims, 0.0)),
              std::vector<std::vector<double>>(inst.n_containers,
                                               std::vector<double>(inst.n_dims, 0.0))};
  for (int i = 0; i < inst.n_items; ++i) {
    const int j = p.container_of[i];
    if (j < 0) continue;
    for (int k = 0; k < inst.n_dims; ++k) {
      loads.a[j][k] += inst.a[i][k];
      loads.d[j][k] += inst.d[i][k];
    }
  }
  return loads;
}

void CheckPlacementShape(const ItemPlacementInstance& inst, const Placement& p) {
  if (static_cast<int>(p.container_of.size()) != inst.n_items) {
    throw StructuralError("placement covers " + std::to_string(p.container_of.size()) +
                          " items, instance has " + std::to_string(inst.n_items));
  }
  for (int j : p.container_of) {
    if (j < -1 || j >= inst.n_containers) {
      throw StructuralError("placement uses container " + std::to_string(j) +
                            " out of range");
    }
  }
}

double Unevenness(double fill) { return std::max(0.0, 1.0 - fill); }

}  // namespace

ItemPlacementProfile ItemPlacementProfile::FromConfig(const Config& config) {
  ItemPlacementProfile p;
  p.n_items = static_cast<int>(config.GetInt("n_items", p.n_items));
  p.n_containers = static_cast<int>(config.GetInt("n_containers", p.n_containers));
  p.n_dims = static_cast<int>(config.GetInt("n_dims", p.n_dims));
  p.big_count = static_cast<int>(config.GetInt("big_count", p.big_count));
  p.big_factor = config.GetDouble("big_factor", p.big_factor);
  p.capacity_slack = config.GetDouble("capacity_slack", p.capacity_slack);
  return p;
}

void ItemPlacementInstance::Validate() const {
  if (n_items < 1 || n_containers < 1 || n_dims < 1) {
    throw StructuralError("item placement needs at least one item, container and dimension");
  }
  auto check_matrix = [&](const std::vector<std::vector<double>>& m, const char* what) {
    if (static_cast<int>(m.size()) != n_items) {
      throw StructuralError(std::string(what) + " has the wrong number of items");
    }
    for (const auto& row : m) {
      if (static_cast<int>(row.size()) != n_dims) {
        throw StructuralError(std::string(what) + " has the wrong number of dimensions");
      }
      for (double v : row) {
        if (!(v >= 0.0)) throw StructuralError(std::string(what) + " has a negative entry");
      }
    }
  };
  check_matrix(a, "a");
  check_matrix(d, "d");
  for (const auto* vec : {&b, &alpha, &beta}) {
    if (static_cast<int>(vec->size()) != n_dims) {
      throw StructuralError("per-dimension data has the wrong length");
    }
    for (double v : *vec) {
      if (!(v >= 0.0)) throw StructuralError("per-dimension data has a negative entry");
    }
  }
}

ItemPlacementInstance GenerateItemPlacement(uint64_t seed,
                                            const ItemPlacementProfile& profile) {
  if (profile.n_items < 1 || profile.n_containers < 1 || profile.n_dims < 1 ||
      profile.big_count < 0 || profile.big_count > profile.n_items ||
      !(profile.big_factor >= 1.0) || !(profile.capacity_slack > 0.0)) {
    throw std::invalid_argument("inconsistent item placement profile");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> size(1.0, 10.0);
  std::uniform_real_distribution<double> weight(1.0, 2.0);

  ItemPlacementInstance inst;
  inst.n_items = profile.n_items;
  inst.n_containers = profile.n_containers;
  inst.n_dims = profile.n_dims;

  std::vector<int> order(profile.n_items);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  inst.planted_big.assign(order.begin(), order.begin() + profile.big_count);
  std::sort(inst.planted_big.begin(), inst.planted_big.end());
  std::vector<bool> is_big(profile.n_items, false);
  for (int i : inst.planted_big) is_big[i] = true;

  inst.a.assign(profile.n_items, std::vector<double>(profile.n_dims));
  inst.d.assign(profile.n_items, std::vector<double>(profile.n_dims));
  for (int i = 0; i < profile.n_items; ++i) {
    const double scale = is_big[i] ? profile.big_factor : 1.0;
    for (int k = 0; k < profile.n_dims; ++k) {
      inst.a[i][k] = scale * size(rng);
      inst.d[i][k] = scale * size(rng);
    }
  }
  inst.b.assign(profile.n_dims, 0.0);
  for (int k = 0; k < profile.n_dims; ++k) {
    double total_a = 0.0, total_d = 0.0;
    for (int i = 0; i < profile.n_items; ++i) {
      total_a += inst.a[i][k];
      total_d += inst.d[i][k];
    }
    for (int i = 0; i < profile.n_items; ++i) {
      inst.d[i][k] *= profile.n_containers / total_d;
    }
    inst.b[k] = profile.capacity_slack * total_a / profile.n_containers;
    for (int i = 0; i < profile.n_items; ++i) {
      if (inst.a[i][k] > inst.b[k]) {
        throw std::invalid_argument("degenerate profile: item " + std::to_string(i) +
                                    " exceeds the capacity of dimension " +
                                    std::to_string(k));
      }
    }
  }
  for (int k = 0; k < profile.n_dims; ++k) {
    inst.alpha.push_back(weight(rng));
    inst.beta.push_back(weight(rng));
  }
  return inst;
}

MilpInstance ToMilp(const ItemPlacementInstance& inst) {
  inst.Validate();
  const int I = inst.n_items, J = inst.n_containers, K = inst.n_dims;
  MilpInstance m;
  m.name = "item_placement";
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      m.variables.push_back({"x_" + std::to_string(i) + "_" + std::to_string(j), 0.0, 1.0,
                             Integrality::kBinary});
    }
  }
  for (int j = 0; j < J; ++j) {
    for (int k = 0; k < K; ++k) {
      m.variables.push_back({"y_" + std::to_string(j) + "_" + std::to_string(k)});
      m.objective.terms.push_back({inst.YIndex(j, k), inst.alpha[k]});
    }
  }
  for (int k = 0; k < K; ++k) {
    m.variables.push_back({"z_" + std::to_string(k)});
    m.objective.terms.push_back({inst.ZIndex(k), inst.beta[k]});
  }
  for (int i = 0; i < I; ++i) {
    LinearConstraint row{"assign_" + std::to_string(i), {}, ConstraintSense::kEqual, 1.0};
    for (int j = 0; j < J; ++j) row.terms.push_back({inst.XIndex(i, j), 1.0});
    m.constraints.push_back(std::move(row));
  }
  auto jk = [](int j, int k) { return std::to_string(j) + "_" + std::to_string(k); };
  for (int j = 0; j < J; ++j) {
    for (int k = 0; k < K; ++k) {
      LinearConstraint row{"knap_" + jk(j, k), {}, ConstraintSense::kLessEqual, inst.b[k]};
      for (int i = 0; i < I; ++i) {
        if (inst.a[i][k] != 0.0) row.terms.push_back({inst.XIndex(i, j), inst.a[i][k]});
      }
      m.constraints.push_back(std::move(row));
    }
  }
  for (int j = 0; j < J; ++j) {
    for (int k = 0; k < K; ++k) {
      LinearConstraint row{"uneven_" + jk(j, k), {}, ConstraintSense::kGreaterEqual, 1.0};
      for (int i = 0; i < I; ++i) {
        if (inst.d[i][k] != 0.0) row.terms.push_back({inst.XIndex(i, j), inst.d[i][k]});
      }
      row.terms.push_back({inst.YIndex(j, k), 1.0});
      m.constraints.push_back(std::move(row));
    }
  }
  for (int j = 0; j < J; ++j) {
    for (int k = 0; k < K; ++k) {
      m.constraints.push_back({"link_" + jk(j, k),
                               {{inst.YIndex(j, k), 1.0}, {inst.ZIndex(k), -1.0}},
                               ConstraintSense::kLessEqual,
                               0.0});
    }
  }
  return m;
}

std::optional<ItemPlacementInstance> ItemPlacementFromMilp(const MilpInstance& milp) {
  int I = 0, J = 0, K = 0;
  for (const VariableDef& v : milp.variables) {
    int p = -1, q = -1;
    char tail = 0;
    if (std::sscanf(v.name.c_str(), "x_%d_%d%c", &p, &q, &tail) == 2) {
      I = std::max(I, p + 1);
      J = std::max(J, q + 1);
    } else if (std::sscanf(v.name.c_str(), "z_%d%c", &p, &tail) == 1) {
      K = std::max(K, p + 1);
    }
  }
  if (I == 0 || J == 0 || K == 0) return std::nullopt;
  ItemPlacementInstance inst;
  inst.n_items = I;
  inst.n_containers = J;
  inst.n_dims = K;
  if (milp.num_variables() != I * J + J * K + K ||
      milp.num_constraints() != I + 3 * J * K) {
    return std::nullopt;
  }
  // Layout check by name.
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      if (milp.variables[inst.XIndex(i, j)].name !=
          "x_" + std::to_string(i) + "_" + std::to_string(j)) {
        return std::nullopt;
      }
    }
  }
  inst.a.assign(I, std::vector<double>(K, 0.0));
  inst.d.assign(I, std::vector<double>(K, 0.0));
  inst.b.assign(K, 0.0);
  inst.alpha.assign(K, 0.0);
  inst.beta.assign(K, 0.0);
  for (int k = 0; k < K; ++k) {
    const LinearConstraint& knap = milp.constraints[I + k];
    const LinearConstraint& uneven = milp.constraints[I + J * K + k];
    if (knap.name != "knap_0_" + std::to_string(k) ||
        uneven.name != "uneven_0_" + std::to_string(k)) {
      return std::nullopt;
    }
    inst.b[k] = knap.rhs;
    for (const Term& t : knap.terms) {
      if (t.var < I * J) inst.a[t.var / J][k] = t.coef;
    }
    for (const Term& t : uneven.terms) {
      if (t.var < I * J) inst.d[t.var / J][k] = t.coef;
    }
  }
  const std::vector<double> c = milp.DenseObjective();
  for (int k = 0; k < K; ++k) {
    inst.alpha[k] = c[inst.YIndex(0, k)];
    inst.beta[k] = c[inst.ZIndex(k)];
  }
  try {
    inst.Validate();
  } catch (const StructuralError&) {
    return std::nullopt;
  }
  return inst;
}

bool Placement::complete() const {
  return std::all_of(container_of.begin(), container_of.end(), [](int j) { return j >= 0; });
}

Placement EmptyPlacement(const ItemPlacementInstance& inst) {
  return Placement{std::vector<int>(inst.n_items, -1)};
}

double PlacementObjective(const ItemPlacementInstance& inst, const Placement& p) {
  CheckPlacementShape(inst, p);
  const Loads loads = ComputeLoads(inst, p);
  double obj = 0.0;
  for (int k = 0; k < inst.n_dims; ++k) {
    double z = 0.0;
    for (int j = 0; j < inst.n_containers; ++j) {
      const double y = Unevenness(loads.d[j][k]);
      obj += inst.alpha[k] * y;
      z = std::max(z, y);
    }
    obj += inst.beta[k] * z;
  }
  return obj;
}

bool CapacityFeasible(const ItemPlacementInstance& inst, const Placement& p) {
  CheckPlacementShape(inst, p);
  const Loads loads = ComputeLoads(inst, p);
  for (int j = 0; j < inst.n_containers; ++j) {
    for (int k = 0; k < inst.n_dims; ++k) {
      if (loads.a[j][k] > inst.b[k] + CapacitySlack(inst.b[k])) return false;
    }
  }
  return true;
}

std::vector<double> PlacementValues(const ItemPlacementInstance& inst, const Placement& p) {
  CheckPlacementShape(inst, p);
  if (!p.complete()) throw std::invalid_argument("placement is incomplete");
  std::vector<double> values(inst.ZIndex(inst.n_dims - 1) + 1, 0.0);
  for (int i = 0; i < inst.n_items; ++i) values[inst.XIndex(i, p.container_of[i])] = 1.0;
  const Loads loads = ComputeLoads(inst, p);
  for (int k = 0; k < inst.n_dims; ++k) {
    double z = 0.0;
    for (int j = 0; j < inst.n_containers; ++j) {
      const double y = Unevenness(loads.d[j][k]);
      values[inst.YIndex(j, k)] = y;
      z = std::max(z, y);
    }
    values[inst.ZIndex(k)] = z;
  }
  return values;
}

Placement PlacementFromValues(const ItemPlacementInstance& inst,
                              const std::vector<double>& values) {
  Placement p = EmptyPlacement(inst);
  for (int i = 0; i < inst.n_items; ++i) {
    double best = 0.5;
    for (int j = 0; j < inst.n_containers; ++j) {
      if (values[inst.XIndex(i, j)] > best) {
        best = values[inst.XIndex(i, j)];
        p.container_of[i] = j;
      }
    }
  }
  return p;
}

double NormalizedSize(const ItemPlacementInstance& inst, int item) {
  double s = 0.0;
  for (int k = 0; k < inst.n_dims; ++k) {
    s += inst.b[k] > 0 ? inst.a[item][k] / inst.b[k] : 0.0;
  }
  return s / inst.n_dims;
}

BigItems DetectBigItems(const ItemPlacementInstance& inst, int count, double theta) {
  BigItems out;
  count = std::clamp(count, 0, inst.n_items);
  std::vector<double> sizes(inst.n_items);
  for (int i = 0; i < inst.n_items; ++i) sizes[i] = NormalizedSize(inst, i);
  std::vector<double> sorted = sizes;
  std::sort(sorted.begin(), sorted.end());
  const size_t n = sorted.size();
  const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  for (int i = 0; i < inst.n_items; ++i) {
    if (sizes[i] > theta * median) out.above_threshold.push_back(i);
  }
  if (static_cast<int>(out.above_threshold.size()) == count) {
    out.items = out.above_threshold;
    return out;
  }
  std::vector<int> order(inst.n_items);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int p, int q) { return sizes[p] > sizes[q]; });
  out.items.assign(order.begin(), order.begin() + count);
  std::sort(out.items.begin(), out.items.end());
  out.fallback = true;
  out.warning = std::to_string(out.above_threshold.size()) +
                " items exceed the big-item threshold (expected " + std::to_string(count) +
                "); using the " + std::to_string(count) + " largest";
  return out;
}

Placement PrefixBigItems(const ItemPlacementInstance& inst, const std::vector<int>& big) {
  if (static_cast<int>(big.size()) > inst.n_containers) {
    throw PlacementError("more big items than containers", big.back());
  }
  Placement p = EmptyPlacement(inst);
  const std::vector<double> empty(inst.n_dims, 0.0);
  for (size_t r = 0; r < big.size(); ++r) {
    const int item = big[r];
    if (item < 0 || item >= inst.n_items) {
      throw StructuralError("big item index " + std::to_string(item) + " out of range");
    }
    if (!Fits(inst, empty, item)) {
      throw PlacementError("infeasible prefix: big item " + std::to_string(item) +
                               " alone exceeds a capacity",
                           item);
    }
    p.container_of[item] = static_cast<int>(r);
  }
  return p;
}

Placement GreedyConstruct(const ItemPlacementInstance& inst, const Placement& partial,
                          const std::vector<bool>& allowed) {
  CheckPlacementShape(inst, partial);
  if (!CapacityFeasible(inst, partial)) {
    throw std::invalid_argument("partial placement violates a capacity");
  }
  Placement p = partial;
  Loads loads = ComputeLoads(inst, p);
  std::vector<int> order;
  std::vector<double> size(inst.n_items);
  for (int i = 0; i < inst.n_items; ++i) {
    size[i] = NormalizedSize(inst, i);
    if (p.container_of[i] < 0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return size[x] > size[y]; });
  for (int i : order) {
    int best = -1;
    double best_residual = -kInfinity;
    for (int j = 0; j < inst.n_containers; ++j) {
      if (!allowed.empty() && !allowed[j]) continue;
      if (!Fits(inst, loads.a[j], i)) continue;
      double residual = 0.0;
      for (int k = 0; k < inst.n_dims; ++k) {
        residual += inst.b[k] > 0 ? (inst.b[k] - loads.a[j][k]) / inst.b[k] : 0.0;
      }
      residual /= inst.n_dims;
      if (residual > best_residual) {
        best_residual = residual;
        best = j;
      }
    }
    if (best < 0) {
      throw PlacementError("no container can take item " + std::to_string(i), i);
    }
    p.container_of[i] = best;
    for (int k = 0; k < inst.n_dims; ++k) {
      loads.a[best][k] += inst.a[i][k];
      loads.d[best][k] += inst.d[i][k];
    }
  }
  return p;
}

namespace {

// Up to two items leaving one container of a pair.
struct Subset {
  int count = 0;
  int first = -1;
  int second = -1;
  std::vector<double> a;
  std::vector<double> d;
};

std::vector<Subset> SmallSubsets(const ItemPlacementInstance& inst,
                                 const std::vector<int>& items) {
  std::vector<Subset> out;
  out.push_back({0, -1, -1, std::vector<double>(inst.n_dims, 0.0),
                 std::vector<double>(inst.n_dims, 0.0)});
  for (size_t p = 0; p < items.size(); ++p) {
    Subset s{1, items[p], -1, inst.a[items[p]], inst.d[items[p]]};
    out.push_back(s);
  }
  for (size_t p = 0; p < items.size(); ++p) {
    for (size_t q = p + 1; q < items.size(); ++q) {
      Subset s{2, items[p], items[q], inst.a[items[p]], inst.d[items[p]]};
      for (int k = 0; k < inst.n_dims; ++k) {
        s.a[k] += inst.a[items[q]][k];
        s.d[k] += inst.d[items[q]][k];
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

class SwapSearch {
 public:
  SwapSearch(const ItemPlacementInstance& inst, Placement p)
      : inst_(inst), p_(std::move(p)), loads_(ComputeLoads(inst_, p_)) {}

  const Placement& placement() const { return p_; }

  // Applies the best improving exchange between j1 and j2, if any. Returns
  // the number of exchanges evaluated through `evaluated`.
  bool ImprovePair(int j1, int j2, double tol, int64_t* evaluated) {
    const int K = inst_.n_dims;
    std::vector<double> other_max(K, 0.0), z(K, 0.0);
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < inst_.n_containers; ++j) {
        const double y = Unevenness(loads_.d[j][k]);
        z[k] = std::max(z[k], y);
        if (j != j1 && j != j2) other_max[k] = std::max(other_max[k], y);
      }
    }
    std::vector<int> in1, in2;
    for (int i = 0; i < inst_.n_items; ++i) {
      if (p_.container_of[i] == j1) in1.push_back(i);
      if (p_.container_of[i] == j2) in2.push_back(i);
    }
    const std::vector<Subset> s1 = SmallSubsets(inst_, in1);
    const std::vector<Subset> s2 = SmallSubsets(inst_, in2);
    double best_delta = -tol;
    const Subset* best1 = nullptr;
    const Subset* best2 = nullptr;
    for (const Subset& u : s1) {
      for (const Subset& v : s2) {
        // Pure moves of one item plus 1-1, 1-2, 2-1 and 2-2 exchanges.
        if (u.count + v.count == 0 || (u.count == 2 && v.count == 0) ||
            (u.count == 0 && v.count == 2)) {
          continue;
        }
        ++*evaluated;
        double delta = 0.0;
        bool fits = true;
        for (int k = 0; k < K && fits; ++k) {
          const double cap = inst_.b[k] + CapacitySlack(inst_.b[k]);
          fits = loads_.a[j1][k] - u.a[k] + v.a[k] <= cap &&
                 loads_.a[j2][k] - v.a[k] + u.a[k] <= cap;
          const double y1 = Unevenness(loads_.d[j1][k]);
          const double y2 = Unevenness(loads_.d[j2][k]);
          const double n1 = Unevenness(loads_.d[j1][k] - u.d[k] + v.d[k]);
          const double n2 = Unevenness(loads_.d[j2][k] - v.d[k] + u.d[k]);
          const double nz = std::max({other_max[k], n1, n2});
          delta += inst_.alpha[k] * (n1 + n2 - y1 - y2) + inst_.beta[k] * (nz - z[k]);
        }
        if (fits && delta < best_delta) {
          best_delta = delta;
          best1 = &u;
          best2 = &v;
        }
      }
    }
    if (best1 == nullptr) return false;
    for (int i : {best1->first, best1->second}) {
      if (i >= 0) p_.container_of[i] = j2;
    }
    for (int i : {best2->first, best2->second}) {
      if (i >= 0) p_.container_of[i] = j1;
    }
    loads_ = ComputeLoads(inst_, p_);
    return true;
  }

 private:
  const ItemPlacementInstance& inst_;
  Placement p_;
  Loads loads_;
};

}  // namespace

LnsResult LnsSwap(const ItemPlacementInstance& inst, const Placement& incumbent,
                  const Budget& budget, uint64_t seed,
                  const PlacementCallback& on_improvement) {
  CheckPlacementShape(inst, incumbent);
  if (!incumbent.complete() || !CapacityFeasible(inst, incumbent)) {
    throw std::invalid_argument("swap search needs a feasible incumbent");
  }
  LnsResult result;
  result.placement = incumbent;
  result.objective = PlacementObjective(inst, incumbent);

  std::vector<std::pair<int, int>> pairs;
  for (int j1 = 0; j1 < inst.n_containers; ++j1) {
    for (int j2 = j1 + 1; j2 < inst.n_containers; ++j2) pairs.emplace_back(j1, j2);
  }
  std::mt19937_64 rng(seed);
  SwapSearch search(inst, incumbent);
  bool improved = true;
  while (improved) {
    improved = false;
    std::shuffle(pairs.begin(), pairs.end(), rng);
    for (const auto& [j1, j2] : pairs) {
      if (budget.Exhausted()) {
        result.budget_exhausted = true;
        return result;
      }
      int64_t evaluated = 0;
      const double tol = 1e-9 * (1 + std::abs(result.objective));
      const bool moved = search.ImprovePair(j1, j2, tol, &evaluated);
      budget.Charge(1 + evaluated / 256);
      if (!moved) continue;
      const double obj = PlacementObjective(inst, search.placement());
      // Guard against a rounding-level "improvement" on recomputation.
      if (obj >= result.objective) continue;
      improved = true;
      result.placement = search.placement();
      result.objective = obj;
      ++result.accepted;
      result.trajectory.Record(budget.Elapsed(), obj, "lns_swap");
      if (on_improvement) on_improvement(result.placement, obj);
    }
  }
  return result;
}

}  // namespace primalkit
