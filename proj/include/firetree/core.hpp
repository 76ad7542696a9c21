#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace firetree {

using Vertex = int;
using TimeStep = int;
using Weight = long long;

enum class ErrorCode {
  NotATree,
  IdOutOfRange,
  NonPositiveBudget,
  ProtectBurnedVertex,
  BudgetExceeded,
  ForbiddenMove,
  NoSlackAtTargetLevel,
  NotAnAncestor,
  InstanceTooLarge,
  PreconditionViolated,
  NotAStar,
  NotACaterpillar,
  NoApplicableSolver,
  UnbalancedSupply,
  DegreeTooHigh,
  EpsilonOutOfRange,
  ShapeInfeasible,
  BadInput,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

std::string to_string(ErrorCode code);

// A single protection move: vertex v gets a firefighter at time step t >= 1.
struct Move {
  Vertex vertex = 0;
  TimeStep time = 0;
  auto operator<=>(const Move&) const = default;
};

// Rooted tree instance. The root is the ignition vertex; target_set is the
// set of vertices whose saving is rewarded. Budgets may vary per step; a
// list shorter than the horizon extends with its last entry. Forbidden
// pairs may never be protected.
class TreeInstance {
public:
  static TreeInstance build(int vertex_count,
                            std::vector<std::pair<Vertex, Vertex>> edges,
                            Vertex root,
                            std::set<Vertex> target_set,
                            std::map<Vertex, Weight> weights = {},
                            std::vector<Weight> budgets = {1},
                            std::set<Move> forbidden = {});

  int vertex_count() const { return n_; }
  Vertex root() const { return root_; }
  const std::vector<std::pair<Vertex, Vertex>>& edges() const { return edges_; }
  const std::set<Vertex>& target_set() const { return target_set_; }
  const std::map<Vertex, Weight>& weights() const { return weights_; }
  const std::vector<Weight>& budgets() const { return budgets_; }
  const std::set<Move>& forbidden() const { return forbidden_; }

  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }

  // Rooted structure (computed once at build time).
  Vertex parent(Vertex v) const { return parent_[v]; }
  int depth(Vertex v) const { return depth_[v]; }
  int height() const { return height_; }
  const std::vector<Vertex>& children(Vertex v) const { return children_[v]; }
  // Vertices in BFS order from the root.
  const std::vector<Vertex>& bfs_order() const { return order_; }

  Weight budget_at(TimeStep t) const;
  bool is_forbidden(Vertex v, TimeStep t) const {
    return forbidden_.count({v, t}) > 0;
  }
  bool in_target(Vertex v) const { return target_set_.count(v) > 0; }
  // Weight of v if v is a target, 0 otherwise.
  Weight target_weight(Vertex v) const;
  Weight total_target_weight() const;
  // Total target weight in the subtree rooted at v (v included).
  Weight subtree_target_weight(Vertex v) const { return subtree_weight_[v]; }
  bool is_ancestor(Vertex a, Vertex v) const;

private:
  int n_ = 0;
  std::vector<std::pair<Vertex, Vertex>> edges_;
  Vertex root_ = 0;
  std::set<Vertex> target_set_;
  std::map<Vertex, Weight> weights_;
  std::vector<Weight> budgets_;
  std::set<Move> forbidden_;

  std::vector<std::vector<Vertex>> adj_;
  std::vector<Vertex> parent_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<int> depth_;
  std::vector<Vertex> order_;
  std::vector<Weight> subtree_weight_;
  int height_ = 0;
};

// A protection strategy: a set of moves, no vertex protected twice.
class Strategy {
public:
  Strategy() = default;
  static Strategy of(std::vector<Move> moves);

  const std::vector<Move>& moves() const { return moves_; }
  bool empty() const { return moves_.empty(); }
  std::size_t size() const { return moves_.size(); }

private:
  std::vector<Move> moves_;  // sorted by (time, vertex)
};

struct StepRecord {
  TimeStep step = 0;
  std::vector<Vertex> protected_now;
  std::vector<Vertex> newly_burned;
};

struct SimulationOutcome {
  std::set<Vertex> burned;
  std::set<Vertex> saved;
  std::set<Move> protected_applied;
  std::vector<StepRecord> trace;
  TimeStep end_time = 0;
};

// Runs the spread process: at step t the moves with time t are applied, then
// every vulnerable vertex adjacent to a burned vertex burns. Moves after the
// fire has stopped are ignored. Throws on moves that violate the validity
// conditions during the active phase.
SimulationOutcome simulate(const TreeInstance& inst, const Strategy& strat);

enum class Violation { None, ProtectBurned, BudgetExceeded, ForbiddenMove };

struct ValidityReport {
  bool ok = true;
  Violation violation = Violation::None;
  Move offending{};
  TimeStep step = 0;
  std::string message;
};

ValidityReport validate_strategy(const TreeInstance& inst, const Strategy& strat);

Weight saved_target_weight(const TreeInstance& inst, const SimulationOutcome& outcome);

// Replaces move (v,t) by (a,k) where a is the ancestor of v at level k; the
// saved set under the new strategy is a superset of the old one. If level is
// not given, the smallest feasible level is chosen.
Strategy move_up_firefighter(const TreeInstance& inst, const Strategy& strat,
                             Move move, std::optional<int> level = std::nullopt);

}  // namespace firetree
