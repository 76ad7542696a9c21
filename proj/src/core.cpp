#include "firetree/core.hpp"

#include <algorithm>
#include <queue>

namespace firetree {

std::string to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotATree: return "NotATree";
    case ErrorCode::IdOutOfRange: return "IdOutOfRange";
    case ErrorCode::NonPositiveBudget: return "NonPositiveBudget";
    case ErrorCode::ProtectBurnedVertex: return "ProtectBurnedVertex";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ForbiddenMove: return "ForbiddenMove";
    case ErrorCode::NoSlackAtTargetLevel: return "NoSlackAtTargetLevel";
    case ErrorCode::NotAnAncestor: return "NotAnAncestor";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NotAStar: return "NotAStar";
    case ErrorCode::NotACaterpillar: return "NotACaterpillar";
    case ErrorCode::NoApplicableSolver: return "NoApplicableSolver";
    case ErrorCode::UnbalancedSupply: return "UnbalancedSupply";
    case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::ShapeInfeasible: return "ShapeInfeasible";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "UnknownError";
}

TreeInstance TreeInstance::build(int vertex_count,
                                 std::vector<std::pair<Vertex, Vertex>> edges,
                                 Vertex root,
                                 std::set<Vertex> target_set,
                                 std::map<Vertex, Weight> weights,
                                 std::vector<Weight> budgets,
                                 std::set<Move> forbidden) {
  if (vertex_count <= 0)
    throw Error(ErrorCode::BadInput, "vertex_count must be positive");
  const int n = vertex_count;
  auto check_id = [n](Vertex v, const char* where) {
    if (v < 0 || v >= n)
      throw Error(ErrorCode::IdOutOfRange,
                  std::string("vertex id out of range in ") + where + ": " +
                      std::to_string(v));
  };
  check_id(root, "root");
  for (auto [u, v] : edges) {
    check_id(u, "edges");
    check_id(v, "edges");
    if (u == v) throw Error(ErrorCode::NotATree, "self-loop");
  }
  if (static_cast<int>(edges.size()) != n - 1)
    throw Error(ErrorCode::NotATree,
                "expected " + std::to_string(n - 1) + " edges, got " +
                    std::to_string(edges.size()));
  for (Vertex v : target_set) check_id(v, "target_set");
  for (auto& [v, w] : weights) {
    check_id(v, "weights");
    if (!target_set.count(v))
      throw Error(ErrorCode::BadInput,
                  "weight given for non-target vertex " + std::to_string(v));
    if (w < 0) throw Error(ErrorCode::BadInput, "negative weight");
  }
  if (budgets.empty())
    throw Error(ErrorCode::NonPositiveBudget, "empty budget list");
  for (Weight b : budgets)
    if (b < 1) throw Error(ErrorCode::NonPositiveBudget, "budget < 1");
  for (const Move& m : forbidden) {
    check_id(m.vertex, "forbidden");
    if (m.time < 1)
      throw Error(ErrorCode::BadInput, "forbidden time step < 1");
  }

  TreeInstance inst;
  inst.n_ = n;
  inst.edges_ = std::move(edges);
  inst.root_ = root;
  inst.target_set_ = std::move(target_set);
  inst.weights_ = std::move(weights);
  inst.budgets_ = std::move(budgets);
  inst.forbidden_ = std::move(forbidden);

  // weights default to 1 on the target set
  for (Vertex v : inst.target_set_)
    if (!inst.weights_.count(v)) inst.weights_[v] = 1;

  inst.adj_.assign(n, {});
  for (auto [u, v] : inst.edges_) {
    inst.adj_[u].push_back(v);
    inst.adj_[v].push_back(u);
  }
  for (auto& nb : inst.adj_) std::sort(nb.begin(), nb.end());

  // BFS from the root; with n-1 edges, reaching all vertices proves a tree.
  inst.parent_.assign(n, -1);
  inst.depth_.assign(n, -1);
  inst.children_.assign(n, {});
  inst.order_.clear();
  std::queue<Vertex> q;
  q.push(inst.root_);
  inst.depth_[inst.root_] = 0;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop();
    inst.order_.push_back(u);
    for (Vertex v : inst.adj_[u]) {
      if (inst.depth_[v] == -1) {
        inst.depth_[v] = inst.depth_[u] + 1;
        inst.parent_[v] = u;
        inst.children_[u].push_back(v);
        q.push(v);
      }
    }
  }
  if (static_cast<int>(inst.order_.size()) != n)
    throw Error(ErrorCode::NotATree, "graph is disconnected or has a cycle");
  inst.height_ = 0;
  for (int d : inst.depth_) inst.height_ = std::max(inst.height_, d);

  inst.subtree_weight_.assign(n, 0);
  for (auto it = inst.order_.rbegin(); it != inst.order_.rend(); ++it) {
    Vertex v = *it;
    inst.subtree_weight_[v] = inst.target_weight(v);
    for (Vertex c : inst.children_[v]) inst.subtree_weight_[v] += inst.subtree_weight_[c];
  }
  return inst;
}

Weight TreeInstance::budget_at(TimeStep t) const {
  if (t < 1) return 0;
  std::size_t i = static_cast<std::size_t>(t - 1);
  if (i >= budgets_.size()) i = budgets_.size() - 1;
  return budgets_[i];
}

Weight TreeInstance::target_weight(Vertex v) const {
  auto it = weights_.find(v);
  return it == weights_.end() ? 0 : it->second;
}

Weight TreeInstance::total_target_weight() const {
  Weight total = 0;
  for (auto& [v, w] : weights_) total += w;
  return total;
}

bool TreeInstance::is_ancestor(Vertex a, Vertex v) const {
  while (v != -1) {
    if (v == a) return true;
    v = parent_[v];
  }
  return false;
}

Strategy Strategy::of(std::vector<Move> moves) {
  std::sort(moves.begin(), moves.end(),
            [](const Move& a, const Move& b) {
              return std::tie(a.time, a.vertex) < std::tie(b.time, b.vertex);
            });
  std::set<Vertex> seen;
  for (const Move& m : moves) {
    if (m.time < 1)
      throw Error(ErrorCode::BadInput, "move time step < 1");
    if (!seen.insert(m.vertex).second)
      throw Error(ErrorCode::BadInput,
                  "vertex " + std::to_string(m.vertex) + " protected twice");
  }
  Strategy s;
  s.moves_ = std::move(moves);
  return s;
}

namespace {

struct SimState {
  std::vector<char> burned;
  std::vector<char> protect;
};

// Returns true if some vulnerable vertex is adjacent to a burned vertex.
bool fire_active(const TreeInstance& inst, const SimState& st) {
  for (Vertex u = 0; u < inst.vertex_count(); ++u) {
    if (!st.burned[u]) continue;
    for (Vertex v : inst.neighbors(u))
      if (!st.burned[v] && !st.protect[v]) return true;
  }
  return false;
}

}  // namespace

SimulationOutcome simulate(const TreeInstance& inst, const Strategy& strat) {
  const int n = inst.vertex_count();
  std::map<TimeStep, std::vector<Vertex>> by_time;
  for (const Move& m : strat.moves()) {
    if (m.vertex < 0 || m.vertex >= n)
      throw Error(ErrorCode::IdOutOfRange, "move vertex out of range");
    by_time[m.time].push_back(m.vertex);
  }

  SimState st;
  st.burned.assign(n, 0);
  st.protect.assign(n, 0);
  st.burned[inst.root()] = 1;

  SimulationOutcome out;
  out.end_time = 0;
  for (TimeStep t = 1; t <= n; ++t) {
    if (!fire_active(inst, st)) break;  // remaining moves are ignored
    StepRecord rec;
    rec.step = t;
    auto it = by_time.find(t);
    if (it != by_time.end()) {
      if (static_cast<Weight>(it->second.size()) > inst.budget_at(t))
        throw Error(ErrorCode::BudgetExceeded,
                    "budget exceeded at step " + std::to_string(t));
      for (Vertex v : it->second) {
        if (st.burned[v])
          throw Error(ErrorCode::ProtectBurnedVertex,
                      "vertex " + std::to_string(v) + " is burned at step " +
                          std::to_string(t));
        if (inst.is_forbidden(v, t))
          throw Error(ErrorCode::ForbiddenMove,
                      "vertex " + std::to_string(v) + " is forbidden at step " +
                          std::to_string(t));
        st.protect[v] = 1;
        rec.protected_now.push_back(v);
        out.protected_applied.insert({v, t});
      }
    }
    for (Vertex u = 0; u < n; ++u) {
      if (!st.burned[u]) continue;
      for (Vertex v : inst.neighbors(u))
        if (!st.burned[v] && !st.protect[v]) rec.newly_burned.push_back(v);
    }
    std::sort(rec.newly_burned.begin(), rec.newly_burned.end());
    rec.newly_burned.erase(
        std::unique(rec.newly_burned.begin(), rec.newly_burned.end()),
        rec.newly_burned.end());
    for (Vertex v : rec.newly_burned) st.burned[v] = 1;
    bool any = !rec.newly_burned.empty() || !rec.protected_now.empty();
    if (!rec.newly_burned.empty()) out.end_time = t;
    if (any) out.trace.push_back(std::move(rec));
  }

  for (Vertex v = 0; v < n; ++v) {
    if (st.burned[v]) out.burned.insert(v);
    else out.saved.insert(v);
  }
  return out;
}

ValidityReport validate_strategy(const TreeInstance& inst, const Strategy& strat) {
  const int n = inst.vertex_count();
  ValidityReport rep;
  std::map<TimeStep, std::vector<Vertex>> by_time;
  for (const Move& m : strat.moves()) by_time[m.time].push_back(m.vertex);

  // Condition 2 is checked for every step, including steps after the fire
  // has stopped.
  for (auto& [t, vs] : by_time) {
    if (static_cast<Weight>(vs.size()) > inst.budget_at(t)) {
      rep.ok = false;
      rep.violation = Violation::BudgetExceeded;
      rep.step = t;
      rep.offending = {vs[0], t};
      rep.message = "condition 2: " + std::to_string(vs.size()) +
                    " moves at step " + std::to_string(t) + " exceed budget " +
                    std::to_string(inst.budget_at(t));
      return rep;
    }
  }

  // Condition 1 and forbidden pairs are checked by simulation; the burn
  // state freezes after extinction but late moves are still checked against
  // it (protecting an already-burned vertex is invalid at any step).
  TimeStep horizon = n;
  if (!by_time.empty()) horizon = std::max(horizon, by_time.rbegin()->first);
  SimState st;
  st.burned.assign(n, 0);
  st.protect.assign(n, 0);
  st.burned[inst.root()] = 1;
  for (TimeStep t = 1; t <= horizon; ++t) {
    auto it = by_time.find(t);
    if (it != by_time.end()) {
      for (Vertex v : it->second) {
        if (v < 0 || v >= n) {
          rep.ok = false;
          rep.violation = Violation::ProtectBurned;
          rep.offending = {v, t};
          rep.message = "vertex id out of range";
          return rep;
        }
        if (st.burned[v]) {
          rep.ok = false;
          rep.violation = Violation::ProtectBurned;
          rep.offending = {v, t};
          rep.step = t;
          rep.message = "condition 1: vertex " + std::to_string(v) +
                        " is burned at step " + std::to_string(t);
          return rep;
        }
        if (inst.is_forbidden(v, t)) {
          rep.ok = false;
          rep.violation = Violation::ForbiddenMove;
          rep.offending = {v, t};
          rep.step = t;
          rep.message = "forbidden move (" + std::to_string(v) + "," +
                        std::to_string(t) + ")";
          return rep;
        }
        st.protect[v] = 1;
      }
    }
    if (!fire_active(inst, st)) continue;
    std::vector<Vertex> newly;
    for (Vertex u = 0; u < n; ++u) {
      if (!st.burned[u]) continue;
      for (Vertex v : inst.neighbors(u))
        if (!st.burned[v] && !st.protect[v]) newly.push_back(v);
    }
    for (Vertex v : newly) st.burned[v] = 1;
  }
  return rep;
}

Weight saved_target_weight(const TreeInstance& inst,
                           const SimulationOutcome& outcome) {
  Weight total = 0;
  for (Vertex v : outcome.saved) total += inst.target_weight(v);
  return total;
}

Strategy move_up_firefighter(const TreeInstance& inst, const Strategy& strat,
                             Move move, std::optional<int> level) {
  const auto& moves = strat.moves();
  if (std::find(moves.begin(), moves.end(), move) == moves.end())
    throw Error(ErrorCode::BadInput, "move not in strategy");
  std::set<Vertex> protected_vertices;
  std::map<TimeStep, int> count_at;
  for (const Move& m : moves) {
    protected_vertices.insert(m.vertex);
    count_at[m.time]++;
  }

  auto ancestor_at = [&](int k) -> Vertex {
    Vertex a = move.vertex;
    while (a != -1 && inst.depth(a) > k) a = inst.parent(a);
    return (a != -1 && inst.depth(a) == k) ? a : -1;
  };
  auto feasible = [&](int k) -> Vertex {
    if (k < 1 || k >= move.time || k >= inst.depth(move.vertex)) return -1;
    Vertex a = ancestor_at(k);
    if (a == -1 || a == inst.root() || protected_vertices.count(a)) return -1;
    if (count_at[k] >= inst.budget_at(k)) return -2;  // no slack
    if (inst.is_forbidden(a, k)) return -1;
    return a;
  };

  Vertex target = -1;
  int target_level = -1;
  if (level) {
    Vertex a = feasible(*level);
    if (a == -2)
      throw Error(ErrorCode::NoSlackAtTargetLevel,
                  "budget full at level " + std::to_string(*level));
    if (a < 0)
      throw Error(ErrorCode::NotAnAncestor,
                  "no strict ancestor at level " + std::to_string(*level));
    target = a;
    target_level = *level;
  } else {
    bool saw_slackless = false;
    int top = std::min(move.time - 1, inst.depth(move.vertex) - 1);
    for (int k = 1; k <= top; ++k) {
      Vertex a = feasible(k);
      if (a == -2) { saw_slackless = true; continue; }
      if (a >= 0) { target = a; target_level = k; break; }
    }
    if (target == -1) {
      if (saw_slackless)
        throw Error(ErrorCode::NoSlackAtTargetLevel, "no level with slack");
      throw Error(ErrorCode::NotAnAncestor, "no applicable strict ancestor");
    }
  }

  std::vector<Move> out;
  for (const Move& m : moves)
    if (!(m == move)) out.push_back(m);
  out.push_back({target, target_level});
  return Strategy::of(std::move(out));
}

}  // namespace firetree
