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

#include "primalkit/mip/submip.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace primalkit {
namespace {

void CheckVar(const MilpInstance& inst, int var, const char* what) {
  if (var < 0 || var >= inst.num_variables()) {
    throw StructuralError(std::string(what) + " references variable index " +
                          std::to_string(var) + " out of range");
  }
}

}  // namespace

MilpInstance BuildSubMip(const MilpInstance& parent, const SubMipSpec& spec) {
  MilpInstance sub;
  sub.name = parent.name;
  sub.variables = parent.variables;
  sub.objective = spec.objective_override.value_or(parent.objective);
  sub.negated_from_max = parent.negated_from_max;

  for (const auto& [var, value] : spec.fixings) {
    CheckVar(parent, var, "fixing");
    VariableDef& v = sub.variables[var];
    const double tol = kFeasibilityTolerance * (1 + std::abs(value));
    if (!std::isfinite(value) || value < v.lower - tol || value > v.upper + tol) {
      throw StructuralError("fixing of '" + v.name + "' to " +
                            std::to_string(value) + " lies outside its bounds");
    }
    if (v.IsDiscrete() && std::abs(value - std::round(value)) > kIntegralityTolerance) {
      throw StructuralError("discrete variable '" + v.name +
                            "' fixed to fractional value " + std::to_string(value));
    }
    const double fixed = v.IsDiscrete() ? std::round(value) : value;
    v.lower = v.upper = std::clamp(fixed, v.lower, v.upper);
  }
  for (int var : spec.relaxations) {
    CheckVar(parent, var, "relaxation");
    sub.variables[var].integrality = Integrality::kContinuous;
  }

  std::vector<bool> dropped(parent.constraints.size(), false);
  for (int row : spec.dropped_constraints) {
    if (row < 0 || row >= parent.num_constraints()) {
      throw StructuralError("dropped constraint index " + std::to_string(row) +
                            " out of range");
    }
    dropped[row] = true;
  }
  for (int i = 0; i < parent.num_constraints(); ++i) {
    if (!dropped[i]) sub.constraints.push_back(parent.constraints[i]);
  }
  for (const LinearConstraint& c : spec.extra_constraints) {
    sub.constraints.push_back(c);
  }
  sub.Validate();
  return sub;
}

void FixToValues(const MilpInstance& parent, const std::vector<int>& vars,
                 const std::vector<double>& values, SubMipSpec* spec) {
  for (int var : vars) {
    CheckVar(parent, var, "fixing");
    const VariableDef& v = parent.variables[var];
    double value = values[var];
    if (v.IsDiscrete()) value = std::round(value);
    spec->fixings.emplace_back(var, std::clamp(value, v.lower, v.upper));
  }
}

}  // namespace primalkit
