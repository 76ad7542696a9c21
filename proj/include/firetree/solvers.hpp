#pragma once

#include <optional>
#include <string>
#include <vector>

#include "firetree/core.hpp"
#include "firetree/mincostflow.hpp"

namespace firetree {

struct SolveResult {
  Weight saved_target_weight = 0;
  Strategy strategy;
  std::string algorithm_tag;
};

enum class OracleMode { Full, Restricted };

struct OracleOptions {
  OracleMode mode = OracleMode::Restricted;
  // Instance-size caps; search cost grows exponentially past these.
  int full_cap = 14;
  int restricted_cap = 20;
};

// Exhaustive ground-truth search for the maximum achievable saved target
// weight. Full mode branches over all maximal protection sets among
// vulnerable vertices; restricted mode only considers vertices adjacent to
// a burning vertex with no protected ancestor, which is optimum-preserving
// on trees.
SolveResult solve_exact_oracle(const TreeInstance& inst,
                               OracleMode mode = OracleMode::Restricted,
                               std::optional<int> cap = std::nullopt);

// Per step protects up to b_t vertices, repeatedly picking a maximum-degree
// vulnerable vertex adjacent to a burning vertex (ties: smallest id).
SolveResult solve_greedy_degree(const TreeInstance& inst);

// Bounded-degree rule: directs the fire along a single path from the root to
// a stop vertex of degree <= b+1 minimizing the burned target weight on the
// path. Requires max degree <= b+2 and deg(root) <= b+1.
SolveResult solve_corridor(const TreeInstance& inst);

// True iff every non-leaf vertex of the tree rooted at the ignition vertex
// has the same number of children.
bool is_complete_tree(const TreeInstance& inst);

struct DecisionResult {
  bool all_saved = false;
  std::optional<Strategy> witness;
  std::string algorithm_tag;
};

// Decision problem: can all of S be saved? Normalizes S to leaves first,
// then dispatches to the cheapest applicable solver.
DecisionResult solve_bsave_decision(const TreeInstance& inst);

// Exhaustive save-all decision search with forced-move propagation; handles
// larger instances than the optimizing oracle because strategies that let a
// target burn are cut immediately.
DecisionResult decide_saves_all(const TreeInstance& inst,
                                std::optional<int> cap = std::nullopt);

struct StarDecomposition {
  Vertex center = 0;
  std::vector<std::vector<Vertex>> legs;  // root-to-tip paths, center excluded
  std::vector<int> leg_lengths;           // vertices per leg
  int max_leg_length = 0;                 // the decomposition's k
};

// A k-star has at most one vertex of degree >= 3 (the center); a path is a
// k-star centered at its middle vertex.
std::optional<StarDecomposition> recognize_kstar(const TreeInstance& inst);

// Exact solver for k-stars via reduction to min-cost flow when the root is
// the center, case analysis otherwise.
SolveResult solve_kstar(const TreeInstance& inst, const StarDecomposition& decomp);

// The flow network the center-rooted k-star reduction solves: level nodes,
// leg nodes, source/sink, plus a zero-cost bypass arc so legs may go
// unprotected. Exposed for inspection and the sign-identity checks.
FlowNetwork build_kstar_flow_network(const TreeInstance& inst,
                                     const StarDecomposition& decomp);

struct CaterpillarDecomposition {
  std::vector<Vertex> spine;  // ordered path v_1..v_p
  // legs_at[i] lists the legs hanging off spine[i], each a path ordered from
  // the vertex adjacent to the spine to the tip.
  std::vector<std::vector<std::vector<Vertex>>> legs_at;
  int max_leg_length = 0;  // the decomposition's k
};

// Canonical spine: the tree path between the two extremal degree->=3
// vertices; a single such vertex gives a one-vertex spine; a tree with none
// is a path and is handled as a k-star.
std::optional<CaterpillarDecomposition> recognize_spine(const TreeInstance& inst);

// Exact solver for k-caterpillars: enumerates spine protections, derives a
// (k+p)-star with forbidden paths and adjusted budgets for each choice, and
// takes the best flow solution.
SolveResult solve_kcaterpillar(const TreeInstance& inst,
                               const CaterpillarDecomposition& decomp);

// Burned target weight of an optimal max-save strategy: total target weight
// minus the saved weight.
Weight min_burned(const TreeInstance& inst, const SolveResult& result);

// corridor -> k-star -> k-caterpillar -> oracle.
SolveResult solve_auto(const TreeInstance& inst);

}  // namespace firetree
