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

// Item placement: spread items over containers so that every container is
// evenly filled. For containers j, dimensions k and items i the model is
//
//   min  sum_jk alpha_k y_jk + sum_k beta_k z_k
//   s.t. sum_j x_ij = 1                  (assign_i)
//        sum_i a_ik x_ij <= b_k          (knap_j_k)
//        sum_i d_ik x_ij + y_jk >= 1     (uneven_j_k)
//        y_jk <= z_k                     (link_j_k)
//        x binary, y >= 0, z >= 0
//
// A handful of items are much larger than the rest; they are placed first,
// one per container, and everything else is built around them.

#ifndef PRIMALKIT_HEURISTICS_ITEM_PLACEMENT_H_
#define PRIMALKIT_HEURISTICS_ITEM_PLACEMENT_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "primalkit/core/budget.h"
#include "primalkit/core/config.h"
#include "primalkit/core/milp.h"
#include "primalkit/core/trajectory.h"
#include "primalkit/mip/branch_and_bound.h"

namespace primalkit {

struct ItemPlacementProfile {
  int n_items = 105;
  int n_containers = 10;
  int n_dims = 3;
  int big_count = 5;
  double big_factor = 8.0;
  // Capacity as a multiple of the perfectly balanced per-container load.
  double capacity_slack = 1.2;

  static ItemPlacementProfile FromConfig(const Config& config);
};

struct ItemPlacementInstance {
  int n_items = 0;
  int n_containers = 0;
  int n_dims = 0;
  std::vector<std::vector<double>> a;  // [item][dim]
  std::vector<std::vector<double>> d;  // [item][dim]
  std::vector<double> b;               // [dim]
  std::vector<double> alpha;           // [dim]
  std::vector<double> beta;            // [dim]
  // Items drawn from the scaled-up distribution (sorted); empty when the
  // instance was not generated.
  std::vector<int> planted_big;

  // Throws StructuralError on inconsistent dimensions or negative data.
  void Validate() const;

  int XIndex(int item, int container) const { return item * n_containers + container; }
  int YIndex(int container, int dim) const {
    return n_items * n_containers + container * n_dims + dim;
  }
  int ZIndex(int dim) const { return n_items * n_containers + n_containers * n_dims + dim; }
};

// Sizes are uniform on [1, 10]; big items are scaled by big_factor. The
// unevenness data d is normalized so that a perfectly balanced placement
// fills every container to exactly 1 in every dimension. Throws
// std::invalid_argument when some item alone exceeds a capacity.
ItemPlacementInstance GenerateItemPlacement(uint64_t seed,
                                            const ItemPlacementProfile& profile = {});

MilpInstance ToMilp(const ItemPlacementInstance& inst);

// Recovers the structured instance from a MILP laid out by ToMilp (matched
// by variable and row names). Returns nullopt for any other MILP.
std::optional<ItemPlacementInstance> ItemPlacementFromMilp(const MilpInstance& milp);

// container_of[i] is the container of item i, or -1 while unassigned.
struct Placement {
  std::vector<int> container_of;

  bool complete() const;
  friend bool operator==(const Placement&, const Placement&) = default;
};

Placement EmptyPlacement(const ItemPlacementInstance& inst);

// Objective with y and z at their smallest feasible values.
double PlacementObjective(const ItemPlacementInstance& inst, const Placement& p);
bool CapacityFeasible(const ItemPlacementInstance& inst, const Placement& p);
// Full MILP assignment (x, y, z) for a complete placement.
std::vector<double> PlacementValues(const ItemPlacementInstance& inst, const Placement& p);
Placement PlacementFromValues(const ItemPlacementInstance& inst,
                              const std::vector<double>& values);
// Mean over dimensions of a_ik / b_k.
double NormalizedSize(const ItemPlacementInstance& inst, int item);

struct BigItems {
  std::vector<int> items;  // sorted by index
  // Items whose normalized size exceeded the threshold.
  std::vector<int> above_threshold;
  bool fallback = false;
  std::string warning;
};

// Items with normalized size above theta * median. When the count differs
// from `count`, the `count` largest items are returned instead (ties by
// index) with a warning.
BigItems DetectBigItems(const ItemPlacementInstance& inst, int count = 5,
                        double theta = 2.0);

class PlacementError : public std::runtime_error {
 public:
  PlacementError(const std::string& message, int item)
      : std::runtime_error(message), item_(item) {}
  int item() const { return item_; }

 private:
  int item_;
};

// Big item r goes to container r. Throws PlacementError when a big item
// alone exceeds a capacity or there are more big items than containers.
Placement PrefixBigItems(const ItemPlacementInstance& inst, const std::vector<int>& big);

// Places every unassigned item, largest normalized size first, into the
// fitting container with the most residual normalized capacity. `allowed`
// (per container) restricts the targets. Throws PlacementError naming the
// first item that fits nowhere.
Placement GreedyConstruct(const ItemPlacementInstance& inst, const Placement& partial,
                          const std::vector<bool>& allowed = {});

using PlacementCallback = std::function<void(const Placement&, double objective)>;

struct LnsResult {
  Placement placement;
  double objective = 0.0;
  PrimalTrajectory trajectory;  // one event per accepted step
  int64_t accepted = 0;
  bool budget_exhausted = false;
};

// Pairwise exchange local search: for each container pair (order shuffled by
// `seed` every sweep) the best of all moves and 1-1, 1-2, 2-1, 2-2 swaps is
// applied when capacity-feasible and strictly improving. Stops after a sweep
// without improvement or when the budget runs out.
LnsResult LnsSwap(const ItemPlacementInstance& inst, const Placement& incumbent,
                  const Budget& budget, uint64_t seed,
                  const PlacementCallback& on_improvement = {});

struct Candidate {
  std::vector<int> items;  // sorted small-item indices
  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// All subsets of `small` with at most `cand_max` items (the empty set
// included) that fit into a container next to `big_item` (-1 for none).
std::vector<Candidate> EnumerateCandidates(const ItemPlacementInstance& inst,
                                           int big_item, const std::vector<int>& small,
                                           int cand_max);

struct MathHeurOptions {
  int cand_max = 2;
  // Candidate cap per prefix container; singletons are always kept, larger
  // candidates are ranked by how closely they fill the container.
  int max_candidates_per_container = 150;
  int64_t step1_node_limit = 300;
  int64_t step2_node_limit = 300;
  double gap_limit = 1e-4;
};

struct AssignmentModel {
  MilpInstance milp;
  // For every binary column: the candidate and its prefix container.
  std::vector<Candidate> column_candidate;
  std::vector<int> column_container;
  std::vector<std::vector<int>> y_column;  // [container][dim]
  std::vector<std::vector<int>> f_column;  // [container][dim], -1 for prefix
  std::vector<int> z_column;               // [dim]
};

// Assignment-model point equivalent to a complete feasible placement that
// keeps every big item in its prefix container; nullopt if there is none.
std::optional<std::vector<double>> AssignmentPoint(const ItemPlacementInstance& inst,
                                                   const std::vector<int>& big,
                                                   const AssignmentModel& model,
                                                   const Placement& placement);

// Step 1 model: the big items sit in the prefix containers; binaries choose
// candidates for those containers, one SOS1 row per small item keeps every
// item in at most one chosen candidate, and the remaining small-item mass is
// spread continuously over the other containers.
AssignmentModel BuildAssignmentModel(const ItemPlacementInstance& inst,
                                     const std::vector<int>& big,
                                     const MathHeurOptions& options = {});

struct MathHeurResult {
  Placement placement;
  double objective = 0.0;
  bool used_fallback = false;
  std::optional<BnbStatus> step1_status;
  std::optional<BnbStatus> step2_status;
};

// Two steps: fill the prefix containers by solving the assignment model,
// then place the rest into the remaining containers with a sub-MIP (greedy
// start). Falls back to GreedyConstruct when either step finds nothing.
MathHeurResult MathHeurConstruct(const ItemPlacementInstance& inst,
                                 const std::vector<int>& big,
                                 const MathHeurOptions& options = {},
                                 const Budget& budget = Budget::Unlimited());

struct LnsSubMipOptions {
  // Only containers with index >= first_container take part.
  int first_container = 5;
  int64_t node_limit = 500;
  double gap_limit = 1e-4;
};

// Re-optimizes two containers at a time with every other assignment fixed.
// Pairs are ranked by sum_k alpha_k (y_j1k + y_j2k), largest first, ties by
// index; a pair whose sub-MIP brings no improvement is marked exhausted until
// one of its containers changes. `seed` is accepted for interface symmetry;
// the selection is deterministic.
LnsResult LnsSubMip(const ItemPlacementInstance& inst, const Placement& incumbent,
                    const LnsSubMipOptions& options, const Budget& budget,
                    uint64_t seed, const PlacementCallback& on_improvement = {});

}  // namespace primalkit

#endif  // PRIMALKIT_HEURISTICS_ITEM_PLACEMENT_H_
