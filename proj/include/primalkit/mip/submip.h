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

// Declarative neighborhood construction: a SubMipSpec describes how to derive
// a sub-MIP from a parent instance by fixing variables, relaxing integrality,
// dropping rows and appending rows. The sub-MIP keeps the parent's variable
// indexing, so any of its solutions is directly a parent assignment.

#ifndef PRIMALKIT_MIP_SUBMIP_H_
#define PRIMALKIT_MIP_SUBMIP_H_

#include <optional>
#include <utility>
#include <vector>

#include "primalkit/core/milp.h"

namespace primalkit {

struct SubMipSpec {
  std::vector<std::pair<int, double>> fixings;
  std::vector<int> relaxations;
  std::vector<int> dropped_constraints;
  std::vector<LinearConstraint> extra_constraints;
  std::optional<Objective> objective_override;
};

// Throws StructuralError when an index is out of range, a fixing lies outside
// the variable's bounds, or a discrete variable is fixed to a fractional
// value.
MilpInstance BuildSubMip(const MilpInstance& parent, const SubMipSpec& spec);

// Adds fixings pinning each variable in `vars` to its entry in `values`;
// discrete variables are rounded first.
void FixToValues(const MilpInstance& parent, const std::vector<int>& vars,
                 const std::vector<double>& values, SubMipSpec* spec);

}  // namespace primalkit

#endif  // PRIMALKIT_MIP_SUBMIP_H_
