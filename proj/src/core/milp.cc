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

#include "primalkit/core/milp.h"

#include <algorithm>
#include <cmath>
#include <map>

namespace primalkit {
namespace {

void CheckDimension(const MilpInstance& inst, std::span<const double> values) {
  if (values.size() != inst.variables.size()) {
    throw StructuralError("solution has " + std::to_string(values.size()) +
                          " values but instance '" + inst.name + "' has " +
                          std::to_string(inst.variables.size()) +
                          " variables");
  }
}

void CheckTerms(const MilpInstance& inst, std::span<const Term> terms,
                const std::string& where) {
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= inst.num_variables()) {
      throw StructuralError(where + " references variable index " +
                            std::to_string(t.var) + " out of range");
    }
  }
}

}  // namespace

int MilpInstance::NumDiscrete() const {
  return static_cast<int>(
      std::count_if(variables.begin(), variables.end(),
                    [](const VariableDef& v) { return v.IsDiscrete(); }));
}

std::vector<double> MilpInstance::DenseObjective() const {
  std::vector<double> c(variables.size(), 0.0);
  for (const Term& t : objective.terms) c[t.var] += t.coef;
  return c;
}

void MilpInstance::Validate() const {
  for (const VariableDef& v : variables) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      throw StructuralError("variable '" + v.name + "' has invalid bounds");
    }
    if (v.integrality == Integrality::kBinary &&
        (v.lower < 0.0 || v.upper > 1.0)) {
      throw StructuralError("binary variable '" + v.name +
                            "' has bounds outside [0,1]");
    }
  }
  for (const LinearConstraint& c : constraints) {
    CheckTerms(*this, c.terms, "constraint '" + c.name + "'");
    std::vector<int> seen;
    seen.reserve(c.terms.size());
    for (const Term& t : c.terms) seen.push_back(t.var);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      throw StructuralError("constraint '" + c.name +
                            "' has a duplicate variable index");
    }
  }
  CheckTerms(*this, objective.terms, "objective");
}

double FeasibilityReport::MaxViolation() const {
  double worst = 0.0;
  for (const Violation& v : violations) worst = std::max(worst, v.magnitude);
  return worst;
}

double Activity(std::span<const Term> terms, std::span<const double> values) {
  double sum = 0.0;
  for (const Term& t : terms) sum += t.coef * values[t.var];
  return sum;
}

FeasibilityReport CheckFeasibility(const MilpInstance& inst,
                                   std::span<const double> values,
                                   double tol_feas, double tol_int) {
  CheckDimension(inst, values);
  FeasibilityReport report;
  auto add = [&report](ViolationKind kind, int index, double magnitude) {
    report.feasible = false;
    report.violations.push_back({kind, index, magnitude});
  };

  for (int j = 0; j < inst.num_variables(); ++j) {
    const VariableDef& v = inst.variables[j];
    const double x = values[j];
    if (std::isnan(x)) {
      add(ViolationKind::kLowerBound, j, kInfinity);
      continue;
    }
    if (v.lower > -kInfinity && v.lower - x > tol_feas * (1 + std::abs(v.lower))) {
      add(ViolationKind::kLowerBound, j, v.lower - x);
    }
    if (v.upper < kInfinity && x - v.upper > tol_feas * (1 + std::abs(v.upper))) {
      add(ViolationKind::kUpperBound, j, x - v.upper);
    }
    if (v.IsDiscrete()) {
      const double dist = std::abs(x - std::round(x));
      if (dist > tol_int) add(ViolationKind::kIntegrality, j, dist);
    }
  }

  for (int i = 0; i < inst.num_constraints(); ++i) {
    const LinearConstraint& c = inst.constraints[i];
    if (c.IsSos1()) {
      // Magnitude is the second largest member value: what must be zeroed.
      double largest = 0.0, second = 0.0;
      int nonzero = 0;
      for (const Term& t : c.terms) {
        const double a = std::abs(values[t.var]);
        if (a > tol_feas) ++nonzero;
        if (a > largest) {
          second = largest;
          largest = a;
        } else if (a > second) {
          second = a;
        }
      }
      if (nonzero > 1) add(ViolationKind::kSos1, i, second);
      continue;
    }
    const double act = Activity(c.terms, values);
    const double allowed = tol_feas * (1 + std::abs(c.rhs));
    double viol = 0.0;
    switch (c.sense) {
      case ConstraintSense::kLessEqual:
        viol = act - c.rhs;
        break;
      case ConstraintSense::kGreaterEqual:
        viol = c.rhs - act;
        break;
      case ConstraintSense::kEqual:
        viol = std::abs(act - c.rhs);
        break;
    }
    if (viol > allowed || std::isnan(viol)) add(ViolationKind::kConstraint, i, viol);
  }
  return report;
}

double EvaluateObjective(const MilpInstance& inst,
                         std::span<const double> values) {
  CheckDimension(inst, values);
  return inst.objective.offset + Activity(inst.objective.terms, values);
}

Solution MakeCertifiedSolution(const MilpInstance& inst,
                               std::vector<double> values, double tol_feas,
                               double tol_int) {
  Solution sol;
  sol.objective = EvaluateObjective(inst, values);
  sol.feasible = CheckFeasibility(inst, values, tol_feas, tol_int).feasible
                     ? FeasibilityStatus::kFeasible
                     : FeasibilityStatus::kInfeasible;
  sol.values = std::move(values);
  return sol;
}

void RoundDiscrete(const MilpInstance& inst, std::span<double> values) {
  for (int j = 0; j < inst.num_variables(); ++j) {
    if (inst.variables[j].IsDiscrete()) values[j] = std::round(values[j]);
  }
}

void CanonicalizeTerms(std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  terms = std::move(merged);
}

std::string_view ToString(ConstraintSense sense) {
  switch (sense) {
    case ConstraintSense::kLessEqual:
      return "<=";
    case ConstraintSense::kGreaterEqual:
      return ">=";
    case ConstraintSense::kEqual:
      return "=";
  }
  return "?";
}

std::string_view ToString(Integrality integrality) {
  switch (integrality) {
    case Integrality::kContinuous:
      return "continuous";
    case Integrality::kInteger:
      return "integer";
    case Integrality::kBinary:
      return "binary";
  }
  return "?";
}

std::string_view ToString(FeasibilityStatus status) {
  switch (status) {
    case FeasibilityStatus::kUnchecked:
      return "unchecked";
    case FeasibilityStatus::kFeasible:
      return "feasible";
    case FeasibilityStatus::kInfeasible:
      return "infeasible";
  }
  return "?";
}

namespace {

std::map<int, double> NonzeroMap(std::span<const Term> terms) {
  std::map<int, double> m;
  for (const Term& t : terms) m[t.var] += t.coef;
  for (auto it = m.begin(); it != m.end();) {
    it = it->second == 0.0 ? m.erase(it) : std::next(it);
  }
  return m;
}

bool Near(double a, double b, double tol) {
  if (a == b) return true;  // covers infinities
  return std::abs(a - b) <= tol * (1 + std::max(std::abs(a), std::abs(b)));
}

bool SameTerms(std::span<const Term> a, std::span<const Term> b, double tol) {
  const auto ma = NonzeroMap(a);
  const auto mb = NonzeroMap(b);
  if (ma.size() != mb.size()) return false;
  for (auto ia = ma.begin(), ib = mb.begin(); ia != ma.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !Near(ia->second, ib->second, tol)) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool SemanticallyEqual(const MilpInstance& a, const MilpInstance& b,
                       bool compare_names, double tol) {
  if (a.variables.size() != b.variables.size() ||
      a.constraints.size() != b.constraints.size()) {
    return false;
  }
  for (size_t j = 0; j < a.variables.size(); ++j) {
    const VariableDef& va = a.variables[j];
    const VariableDef& vb = b.variables[j];
    if (compare_names && va.name != vb.name) return false;
    if (va.integrality != vb.integrality || !Near(va.lower, vb.lower, tol) ||
        !Near(va.upper, vb.upper, tol)) {
      return false;
    }
  }
  // Linear rows and SOS1 sets are each compared in order; their relative
  // interleaving is not semantic.
  auto split = [](const MilpInstance& m, bool sos) {
    std::vector<const LinearConstraint*> out;
    for (const LinearConstraint& c : m.constraints) {
      if (c.IsSos1() == sos) out.push_back(&c);
    }
    return out;
  };
  for (bool sos : {false, true}) {
    const auto ra = split(a, sos);
    const auto rb = split(b, sos);
    if (ra.size() != rb.size()) return false;
    for (size_t i = 0; i < ra.size(); ++i) {
      const LinearConstraint& ca = *ra[i];
      const LinearConstraint& cb = *rb[i];
      if (compare_names && ca.name != cb.name) return false;
      if (!SameTerms(ca.terms, cb.terms, tol)) return false;
      if (!sos && (ca.sense != cb.sense || !Near(ca.rhs, cb.rhs, tol))) {
        return false;
      }
    }
  }
  return SameTerms(a.objective.terms, b.objective.terms, tol) &&
         Near(a.objective.offset, b.objective.offset, tol);
}

}  // namespace primalkit
