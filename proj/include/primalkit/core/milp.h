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

// Canonical mixed-integer linear program representation. Every heuristic in
// the toolkit consumes a MilpInstance and produces Solutions checked against
// it. The internal form is always minimization.

#ifndef PRIMALKIT_CORE_MILP_H_
#define PRIMALKIT_CORE_MILP_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace primalkit {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Default tolerances shared by all modules.
inline constexpr double kFeasibilityTolerance = 1e-7;
inline constexpr double kIntegralityTolerance = 1e-6;

// Raised for malformed instances, dimension mismatches and invalid indices.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Integrality { kContinuous, kInteger, kBinary };

struct VariableDef {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  Integrality integrality = Integrality::kContinuous;

  bool IsDiscrete() const { return integrality != Integrality::kContinuous; }
};

enum class ConstraintSense { kLessEqual, kGreaterEqual, kEqual };

struct Term {
  int var = 0;
  double coef = 0.0;

  friend bool operator==(const Term&, const Term&) = default;
};

// A linear row `terms sense rhs`. When `sos1_group` is set the constraint is
// instead a special ordered set of type 1: at most one member of `terms` may
// be nonzero, the coefficients are the SOS weights, and sense/rhs carry no
// meaning. LP relaxations ignore SOS1 constraints.
struct LinearConstraint {
  std::string name;
  std::vector<Term> terms;
  ConstraintSense sense = ConstraintSense::kLessEqual;
  double rhs = 0.0;
  std::optional<std::string> sos1_group;

  bool IsSos1() const { return sos1_group.has_value(); }
};

struct Objective {
  std::vector<Term> terms;
  double offset = 0.0;
};

struct MilpInstance {
  std::string name;
  std::vector<VariableDef> variables;
  std::vector<LinearConstraint> constraints;
  Objective objective;
  // True when the source model was a maximization. The stored objective has
  // already been negated, so reported values must be negated back.
  bool negated_from_max = false;

  int num_variables() const { return static_cast<int>(variables.size()); }
  int num_constraints() const { return static_cast<int>(constraints.size()); }
  int NumDiscrete() const;

  // Dense objective coefficient vector (duplicates summed).
  std::vector<double> DenseObjective() const;

  // Throws StructuralError on any violated invariant.
  void Validate() const;
};

enum class FeasibilityStatus { kUnchecked, kFeasible, kInfeasible };

struct Solution {
  std::vector<double> values;
  double objective = 0.0;
  FeasibilityStatus feasible = FeasibilityStatus::kUnchecked;
};

enum class ViolationKind {
  kConstraint,
  kLowerBound,
  kUpperBound,
  kIntegrality,
  kSos1,
};

struct Violation {
  ViolationKind kind;
  // Constraint index for kConstraint/kSos1, variable index otherwise.
  int index;
  double magnitude;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;

  double MaxViolation() const;
};

// Constraint rows and bounds are satisfied when their violation is at most
// tol_feas * (1 + |rhs or bound|). Discrete variables must lie within tol_int
// of an integer.
FeasibilityReport CheckFeasibility(const MilpInstance& inst,
                                   std::span<const double> values,
                                   double tol_feas = kFeasibilityTolerance,
                                   double tol_int = kIntegralityTolerance);

inline FeasibilityReport CheckFeasibility(
    const MilpInstance& inst, const Solution& sol,
    double tol_feas = kFeasibilityTolerance,
    double tol_int = kIntegralityTolerance) {
  return CheckFeasibility(inst, sol.values, tol_feas, tol_int);
}

double EvaluateObjective(const MilpInstance& inst,
                         std::span<const double> values);

inline double EvaluateObjective(const MilpInstance& inst,
                                const Solution& sol) {
  return EvaluateObjective(inst, sol.values);
}

// Row activity sum(coef * values[var]).
double Activity(std::span<const Term> terms, std::span<const double> values);

// Builds a Solution with objective filled in and feasibility certified.
Solution MakeCertifiedSolution(const MilpInstance& inst,
                               std::vector<double> values,
                               double tol_feas = kFeasibilityTolerance,
                               double tol_int = kIntegralityTolerance);

// Rounds every discrete variable to the nearest integer in place.
void RoundDiscrete(const MilpInstance& inst, std::span<double> values);

// Sorts terms by variable index and merges duplicate indices.
void CanonicalizeTerms(std::vector<Term>& terms);

std::string_view ToString(ConstraintSense sense);
std::string_view ToString(Integrality integrality);
std::string_view ToString(FeasibilityStatus status);

// Semantic comparison used by the format round-trip tests: same variables
// (by position), same bounds and types, same constraints up to term order and
// zero coefficients, same objective. Names are compared only when
// `compare_names` is set.
bool SemanticallyEqual(const MilpInstance& a, const MilpInstance& b,
                       bool compare_names = true, double tol = 0.0);

}  // namespace primalkit

#endif  // PRIMALKIT_CORE_MILP_H_
