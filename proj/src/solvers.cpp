#include "firetree/solvers.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <unordered_map>

namespace firetree {

namespace {

// Dynamic bitset small enough to key a hash map with.
struct Bits {
  std::vector<std::uint64_t> w;
  Bits() = default;
  explicit Bits(int n) : w((n + 63) / 64, 0) {}
  bool get(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  void set(int i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool operator==(const Bits&) const = default;
};

using KeyVec = std::vector<std::uint64_t>;

struct VecHash {
  std::size_t operator()(const KeyVec& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t x : v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

KeyVec make_key(const Bits& burned, const Bits& prot, TimeStep t) {
  KeyVec k;
  k.reserve(burned.w.size() + prot.w.size() + 1);
  k.insert(k.end(), burned.w.begin(), burned.w.end());
  k.insert(k.end(), prot.w.begin(), prot.w.end());
  k.push_back(static_cast<std::uint64_t>(t));
  return k;
}

std::vector<Vertex> frontier(const TreeInstance& inst, const Bits& burned,
                             const Bits& prot) {
  std::vector<Vertex> f;
  for (Vertex v = 0; v < inst.vertex_count(); ++v) {
    if (burned.get(v) || prot.get(v)) continue;
    for (Vertex u : inst.neighbors(v))
      if (burned.get(u)) {
        f.push_back(v);
        break;
      }
  }
  return f;
}

// Vertices still reachable by the fire through unprotected vertices.
std::vector<Vertex> threatened(const TreeInstance& inst, const Bits& burned,
                               const Bits& prot) {
  const int n = inst.vertex_count();
  std::vector<char> seen(n, 0);
  std::vector<Vertex> stack = frontier(inst, burned, prot);
  for (Vertex v : stack) seen[v] = 1;
  std::vector<Vertex> out;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (Vertex u : inst.neighbors(v)) {
      if (seen[u] || burned.get(u) || prot.get(u)) continue;
      seen[u] = 1;
      stack.push_back(u);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void spread(const TreeInstance& inst, Bits& burned, const Bits& prot) {
  std::vector<Vertex> newly;
  for (Vertex v = 0; v < inst.vertex_count(); ++v) {
    if (burned.get(v) || prot.get(v)) continue;
    for (Vertex u : inst.neighbors(v))
      if (burned.get(u)) {
        newly.push_back(v);
        break;
      }
  }
  for (Vertex v : newly) burned.set(v);
}

Weight unburned_target_weight(const TreeInstance& inst, const Bits& burned) {
  Weight total = 0;
  for (auto& [v, w] : inst.weights())
    if (!burned.get(v)) total += w;
  return total;
}

template <typename Fn>
void for_each_subset(const std::vector<Vertex>& items, int size, Fn&& fn) {
  std::vector<Vertex> chosen;
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(chosen.size()) == size) {
      fn(chosen);
      return;
    }
    int need = size - static_cast<int>(chosen.size());
    for (int i = from; i + need <= static_cast<int>(items.size()); ++i) {
      chosen.push_back(items[i]);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
}

struct OracleMemoEntry {
  Weight value = 0;
  std::vector<Vertex> choice;
};

struct OracleCtx {
  const TreeInstance& inst;
  OracleMode mode;
  std::unordered_map<KeyVec, OracleMemoEntry, VecHash> memo;
};

Weight oracle_dfs(OracleCtx& ctx, const Bits& burned, const Bits& prot,
                  TimeStep t) {
  const TreeInstance& inst = ctx.inst;
  auto f = frontier(inst, burned, prot);
  if (f.empty()) return unburned_target_weight(inst, burned);

  KeyVec key = make_key(burned, prot, t);
  if (auto it = ctx.memo.find(key); it != ctx.memo.end())
    return it->second.value;

  std::vector<Vertex> cands =
      ctx.mode == OracleMode::Restricted ? f : threatened(inst, burned, prot);
  std::erase_if(cands, [&](Vertex v) { return inst.is_forbidden(v, t); });

  int b = static_cast<int>(std::min<Weight>(inst.budget_at(t),
                                            static_cast<Weight>(cands.size())));
  OracleMemoEntry best;
  best.value = -1;
  auto try_choice = [&](const std::vector<Vertex>& chosen) {
    Bits nb = burned, np = prot;
    for (Vertex v : chosen) np.set(v);
    spread(inst, nb, np);
    Weight val = oracle_dfs(ctx, nb, np, t + 1);
    if (val > best.value) {
      best.value = val;
      best.choice = chosen;
    }
  };
  if (b == 0) {
    try_choice({});
  } else {
    // Protecting fewer vertices than possible is never better on trees.
    for_each_subset(cands, b, try_choice);
  }
  ctx.memo.emplace(std::move(key), best);
  return best.value;
}

SolveResult oracle_run(const TreeInstance& inst, OracleMode mode) {
  OracleCtx ctx{inst, mode, {}};
  Bits burned(inst.vertex_count()), prot(inst.vertex_count());
  burned.set(inst.root());
  Weight value = oracle_dfs(ctx, burned, prot, 1);

  // Reconstruct the witnessing strategy from the memo table.
  std::vector<Move> moves;
  Bits b = burned, p = prot;
  TimeStep t = 1;
  while (!frontier(inst, b, p).empty()) {
    auto it = ctx.memo.find(make_key(b, p, t));
    if (it == ctx.memo.end()) break;
    for (Vertex v : it->second.choice) {
      moves.push_back({v, t});
      p.set(v);
    }
    spread(inst, b, p);
    ++t;
  }
  SolveResult res;
  res.saved_target_weight = value;
  res.strategy = Strategy::of(std::move(moves));
  res.algorithm_tag =
      mode == OracleMode::Restricted ? "oracle-restricted" : "oracle-full";
  return res;
}

}  // namespace

SolveResult solve_exact_oracle(const TreeInstance& inst, OracleMode mode,
                               std::optional<int> cap) {
  OracleOptions defaults;
  int limit = cap.value_or(mode == OracleMode::Full ? defaults.full_cap
                                                    : defaults.restricted_cap);
  if (inst.vertex_count() > limit)
    throw Error(ErrorCode::InstanceTooLarge,
                "oracle cap " + std::to_string(limit) + " exceeded (n=" +
                    std::to_string(inst.vertex_count()) + ")");
  return oracle_run(inst, mode);
}

namespace {

struct DecisionCtx {
  const TreeInstance& inst;
  std::vector<int> subtree_targets;  // # target vertices in each subtree
  std::unordered_map<KeyVec, char, VecHash> failed;
};

bool decision_dfs(DecisionCtx& ctx, const Bits& burned, const Bits& prot,
                  TimeStep t, std::vector<Move>& moves) {
  const TreeInstance& inst = ctx.inst;
  auto f = frontier(inst, burned, prot);
  if (f.empty()) return true;  // no target burned so far, nothing more burns

  KeyVec key = make_key(burned, prot, t);
  if (ctx.failed.count(key)) return false;

  // Targets on the frontier burn this step unless protected now.
  std::vector<Vertex> forced, optional_cands;
  for (Vertex v : f) {
    if (inst.in_target(v)) forced.push_back(v);
    else if (ctx.subtree_targets[v] > 0 && !inst.is_forbidden(v, t))
      optional_cands.push_back(v);
  }
  Weight b = inst.budget_at(t);
  bool forced_ok = static_cast<Weight>(forced.size()) <= b;
  for (Vertex v : forced)
    if (inst.is_forbidden(v, t)) forced_ok = false;

  bool found = false;
  if (forced_ok) {
    int slots = static_cast<int>(
        std::min<Weight>(b - static_cast<Weight>(forced.size()),
                         static_cast<Weight>(optional_cands.size())));
    auto try_choice = [&](const std::vector<Vertex>& extra) {
      if (found) return;
      Bits nb = burned, np = prot;
      std::vector<Vertex> all = forced;
      all.insert(all.end(), extra.begin(), extra.end());
      for (Vertex v : all) np.set(v);
      spread(inst, nb, np);
      // A target may never burn.
      for (Vertex v = 0; v < inst.vertex_count(); ++v)
        if (nb.get(v) && !burned.get(v) && inst.in_target(v)) return;
      if (decision_dfs(ctx, nb, np, t + 1, moves)) {
        for (Vertex v : all) moves.push_back({v, t});
        found = true;
      }
    };
    if (slots == 0) {
      try_choice({});
    } else {
      for_each_subset(optional_cands, slots, try_choice);
    }
  }
  if (!found) ctx.failed.emplace(std::move(key), 1);
  return found;
}

}  // namespace

DecisionResult decide_saves_all(const TreeInstance& inst,
                                std::optional<int> cap) {
  int limit = cap.value_or(80);
  if (inst.vertex_count() > limit)
    throw Error(ErrorCode::InstanceTooLarge,
                "decision search cap " + std::to_string(limit) + " exceeded");
  DecisionResult res;
  res.algorithm_tag = "decision-search";
  if (inst.in_target(inst.root())) {
    res.all_saved = false;  // the ignition vertex always burns
    return res;
  }
  DecisionCtx ctx{inst, {}, {}};
  ctx.subtree_targets.assign(inst.vertex_count(), 0);
  const auto& order = inst.bfs_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Vertex v = *it;
    ctx.subtree_targets[v] = inst.in_target(v) ? 1 : 0;
    for (Vertex c : inst.children(v)) ctx.subtree_targets[v] += ctx.subtree_targets[c];
  }
  Bits burned(inst.vertex_count()), prot(inst.vertex_count());
  burned.set(inst.root());
  std::vector<Move> moves;
  res.all_saved = decision_dfs(ctx, burned, prot, 1, moves);
  if (res.all_saved) res.witness = Strategy::of(std::move(moves));
  return res;
}

SolveResult solve_greedy_degree(const TreeInstance& inst) {
  const int n = inst.vertex_count();
  std::vector<char> burned(n, 0), prot(n, 0);
  burned[inst.root()] = 1;
  std::vector<Move> moves;
  for (TimeStep t = 1; t <= n; ++t) {
    std::vector<Vertex> cands;
    for (Vertex v = 0; v < n; ++v) {
      if (burned[v] || prot[v]) continue;
      for (Vertex u : inst.neighbors(v))
        if (burned[u]) {
          cands.push_back(v);
          break;
        }
    }
    if (cands.empty()) break;
    std::erase_if(cands, [&](Vertex v) { return inst.is_forbidden(v, t); });
    Weight b = inst.budget_at(t);
    // Degree is measured in the original tree (static).
    std::sort(cands.begin(), cands.end(), [&](Vertex a, Vertex c) {
      if (inst.degree(a) != inst.degree(c)) return inst.degree(a) > inst.degree(c);
      return a < c;
    });
    for (Vertex v : cands) {
      if (b == 0) break;
      prot[v] = 1;
      moves.push_back({v, t});
      --b;
    }
    std::vector<Vertex> newly;
    for (Vertex v = 0; v < n; ++v) {
      if (burned[v] || prot[v]) continue;
      for (Vertex u : inst.neighbors(v))
        if (burned[u]) {
          newly.push_back(v);
          break;
        }
    }
    if (newly.empty()) break;
    for (Vertex v : newly) burned[v] = 1;
  }
  Strategy strat = Strategy::of(std::move(moves));
  SolveResult res;
  res.saved_target_weight = saved_target_weight(inst, simulate(inst, strat));
  res.strategy = std::move(strat);
  res.algorithm_tag = "greedy-degree";
  return res;
}

bool is_complete_tree(const TreeInstance& inst) {
  int expected = -1;
  for (Vertex v = 0; v < inst.vertex_count(); ++v) {
    int c = static_cast<int>(inst.children(v).size());
    if (c == 0) continue;
    if (expected == -1) expected = c;
    else if (c != expected) return false;
  }
  return true;
}

SolveResult solve_corridor(const TreeInstance& inst) {
  const int n = inst.vertex_count();
  Weight b = *std::min_element(inst.budgets().begin(), inst.budgets().end());
  int maxdeg = 0;
  for (Vertex v = 0; v < n; ++v) maxdeg = std::max(maxdeg, inst.degree(v));
  if (maxdeg > b + 2 || inst.degree(inst.root()) > b + 1)
    throw Error(ErrorCode::PreconditionViolated,
                "corridor rule needs max degree <= b+2 and deg(root) <= b+1");

  // Candidate stop vertices: v = root needs deg(root) <= b (all neighbors
  // protectable at once); any other v needs deg(v) <= b+1.
  Weight best_cost = -1;
  Vertex best_stop = -1;
  std::vector<Move> best_moves;
  for (Vertex stop = 0; stop < n; ++stop) {
    if (stop == inst.root() ? inst.degree(stop) > b : inst.degree(stop) > b + 1)
      continue;
    std::vector<Vertex> path;
    for (Vertex v = stop; v != -1; v = inst.parent(v)) path.push_back(v);
    std::reverse(path.begin(), path.end());  // root .. stop
    Weight cost = 0;
    for (Vertex v : path) cost += inst.target_weight(v);
    if (best_cost != -1 && cost >= best_cost) continue;
    // Protect, at step t, all unburned neighbors of the t-th path vertex
    // except the next path vertex.
    std::vector<Move> moves;
    bool feasible = true;
    int m = static_cast<int>(path.size()) - 1;
    for (TimeStep t = 1; t <= m + 1 && feasible; ++t) {
      Vertex cur = path[t - 1];  // burning at step t-1
      Weight used = 0;
      for (Vertex u : inst.neighbors(cur)) {
        if (t > 1 && u == path[t - 2]) continue;       // parent, burned
        if (t <= m && u == path[t]) continue;          // fire goes here
        if (inst.is_forbidden(u, t) || ++used > inst.budget_at(t)) {
          feasible = false;
          break;
        }
        moves.push_back({u, t});
      }
    }
    if (!feasible) continue;
    best_cost = cost;
    best_stop = stop;
    best_moves = std::move(moves);
  }
  if (best_stop == -1)
    throw Error(ErrorCode::PreconditionViolated, "no feasible stop vertex");
  Strategy strat = Strategy::of(std::move(best_moves));
  SolveResult res;
  res.saved_target_weight = saved_target_weight(inst, simulate(inst, strat));
  res.strategy = std::move(strat);
  res.algorithm_tag = "corridor";
  return res;
}

Weight min_burned(const TreeInstance& inst, const SolveResult& result) {
  return inst.total_target_weight() - result.saved_target_weight;
}

namespace {

// Remark-2 normalization: each non-leaf target becomes a leaf by deleting
// the subtree strictly below it. Returns the normalized instance (unit
// weights, decision problems ignore them) and the old-id map.
struct Normalized {
  TreeInstance inst;
  std::vector<Vertex> old_id;  // new id -> original id
};

Normalized normalize_targets_to_leaves(const TreeInstance& inst) {
  const int n = inst.vertex_count();
  std::vector<char> keep(n, 1);
  for (Vertex v : inst.bfs_order()) {
    Vertex p = inst.parent(v);
    if (p != -1 && (!keep[p] || inst.in_target(p))) keep[v] = 0;
  }
  std::vector<Vertex> old_id;
  std::vector<Vertex> new_id(n, -1);
  for (Vertex v = 0; v < n; ++v)
    if (keep[v]) {
      new_id[v] = static_cast<Vertex>(old_id.size());
      old_id.push_back(v);
    }
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (auto [u, v] : inst.edges())
    if (keep[u] && keep[v]) edges.push_back({new_id[u], new_id[v]});
  std::set<Vertex> targets;
  for (Vertex v : inst.target_set())
    if (keep[v]) targets.insert(new_id[v]);
  std::set<Move> forbidden;
  for (const Move& m : inst.forbidden())
    if (keep[m.vertex]) forbidden.insert({new_id[m.vertex], m.time});
  Normalized out{
      TreeInstance::build(static_cast<int>(old_id.size()), std::move(edges),
                          new_id[inst.root()], std::move(targets), {},
                          inst.budgets(), std::move(forbidden)),
      std::move(old_id)};
  return out;
}

}  // namespace

DecisionResult solve_bsave_decision(const TreeInstance& inst) {
  DecisionResult res;
  if (inst.target_set().empty()) {
    res.all_saved = true;
    res.witness = Strategy{};
    res.algorithm_tag = "trivial";
    return res;
  }
  if (inst.in_target(inst.root())) {
    res.all_saved = false;
    res.algorithm_tag = "trivial";
    return res;
  }
  Normalized norm = normalize_targets_to_leaves(inst);
  const TreeInstance& ni = norm.inst;
  Weight want = ni.total_target_weight();

  std::optional<SolveResult> solved;
  std::string tag;
  try {
    solved = solve_corridor(ni);
    tag = "corridor";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PreconditionViolated) throw;
  }
  if (!solved) {
    if (auto star = recognize_kstar(ni)) {
      solved = solve_kstar(ni, *star);
      tag = "kstar";
    } else if (auto cat = recognize_spine(ni)) {
      solved = solve_kcaterpillar(ni, *cat);
      tag = "kcaterpillar";
    }
  }
  if (solved) {
    res.all_saved = (solved->saved_target_weight == want);
    res.algorithm_tag = tag;
    if (res.all_saved) {
      std::vector<Move> moves;
      for (const Move& m : solved->strategy.moves())
        moves.push_back({norm.old_id[m.vertex], m.time});
      res.witness = Strategy::of(std::move(moves));
    }
    return res;
  }
  OracleOptions defaults;
  if (ni.vertex_count() <= defaults.restricted_cap) {
    SolveResult r = solve_exact_oracle(ni, OracleMode::Restricted);
    res.all_saved = (r.saved_target_weight == want);
    res.algorithm_tag = "oracle-restricted";
    if (res.all_saved) {
      std::vector<Move> moves;
      for (const Move& m : r.strategy.moves())
        moves.push_back({norm.old_id[m.vertex], m.time});
      res.witness = Strategy::of(std::move(moves));
    }
    return res;
  }
  DecisionResult d = decide_saves_all(ni, 80);
  res.all_saved = d.all_saved;
  res.algorithm_tag = d.algorithm_tag;
  if (d.all_saved && d.witness) {
    std::vector<Move> moves;
    for (const Move& m : d.witness->moves())
      moves.push_back({norm.old_id[m.vertex], m.time});
    res.witness = Strategy::of(std::move(moves));
  }
  return res;
}

SolveResult solve_auto(const TreeInstance& inst) {
  try {
    return solve_corridor(inst);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PreconditionViolated) throw;
  }
  if (auto star = recognize_kstar(inst)) return solve_kstar(inst, *star);
  if (auto cat = recognize_spine(inst)) return solve_kcaterpillar(inst, *cat);
  OracleOptions defaults;
  if (inst.vertex_count() <= defaults.restricted_cap)
    return solve_exact_oracle(inst, OracleMode::Restricted);
  throw Error(ErrorCode::NoApplicableSolver,
              "tree fits no polynomial case and exceeds the oracle cap");
}

}  // namespace firetree
