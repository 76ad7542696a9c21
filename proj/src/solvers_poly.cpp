#include <algorithm>
#include <functional>
#include <map>
#include <queue>

#include "firetree/mincostflow.hpp"
#include "firetree/solvers.hpp"

namespace firetree {

namespace {

std::vector<Vertex> degree3_vertices(const TreeInstance& inst) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < inst.vertex_count(); ++v)
    if (inst.degree(v) >= 3) out.push_back(v);
  return out;
}

std::vector<int> bfs_distances(const TreeInstance& inst, Vertex from) {
  std::vector<int> dist(inst.vertex_count(), -1);
  std::queue<Vertex> q;
  dist[from] = 0;
  q.push(from);
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop();
    for (Vertex v : inst.neighbors(u))
      if (dist[v] == -1) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist;
}

std::vector<Vertex> tree_path(const TreeInstance& inst, Vertex a, Vertex b) {
  auto dist = bfs_distances(inst, a);
  std::vector<Vertex> path{b};
  while (path.back() != a) {
    Vertex cur = path.back();
    for (Vertex u : inst.neighbors(cur))
      if (dist[u] == dist[cur] - 1) {
        path.push_back(u);
        break;
      }
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// Walks the maximal path leaving `start` away from `prev`; fails (empty
// optional) if the walk ever branches.
std::optional<std::vector<Vertex>> walk_path(const TreeInstance& inst,
                                             Vertex prev, Vertex start) {
  std::vector<Vertex> leg{start};
  Vertex p = prev, cur = start;
  for (;;) {
    std::vector<Vertex> next;
    for (Vertex u : inst.neighbors(cur))
      if (u != p) next.push_back(u);
    if (next.empty()) return leg;
    if (next.size() > 1) return std::nullopt;
    p = cur;
    cur = next[0];
    leg.push_back(cur);
  }
}

// The designated center of a path: the middle vertex of the path ordered
// from its smaller-id endpoint.
Vertex path_center(const TreeInstance& inst) {
  if (inst.vertex_count() == 1) return 0;
  std::vector<Vertex> ends;
  for (Vertex v = 0; v < inst.vertex_count(); ++v)
    if (inst.degree(v) == 1) ends.push_back(v);
  Vertex a = std::min(ends[0], ends[1]);
  Vertex b = std::max(ends[0], ends[1]);
  auto path = tree_path(inst, a, b);
  return path[(path.size() - 1) / 2];
}

}  // namespace

std::optional<StarDecomposition> recognize_kstar(const TreeInstance& inst) {
  auto deg3 = degree3_vertices(inst);
  if (deg3.size() > 1) return std::nullopt;
  StarDecomposition d;
  d.center = deg3.size() == 1 ? deg3[0] : path_center(inst);
  for (Vertex u : inst.neighbors(d.center)) {
    auto leg = walk_path(inst, d.center, u);
    if (!leg) return std::nullopt;  // cannot happen with one deg->=3 vertex
    d.legs.push_back(std::move(*leg));
  }
  for (const auto& leg : d.legs) {
    d.leg_lengths.push_back(static_cast<int>(leg.size()));
    d.max_leg_length = std::max(d.max_leg_length, static_cast<int>(leg.size()));
  }
  return d;
}

std::optional<CaterpillarDecomposition> recognize_spine(const TreeInstance& inst) {
  auto deg3 = degree3_vertices(inst);
  CaterpillarDecomposition d;
  if (deg3.size() <= 1) {
    d.spine = {deg3.empty() ? path_center(inst) : deg3[0]};
  } else {
    // Extremal pair: the two deg->=3 vertices at maximum mutual distance.
    auto pick_far = [&](Vertex from) {
      auto dist = bfs_distances(inst, from);
      Vertex best = deg3[0];
      for (Vertex v : deg3)
        if (dist[v] > dist[best] || (dist[v] == dist[best] && v < best)) best = v;
      return best;
    };
    Vertex e1 = pick_far(deg3[0]);
    Vertex e2 = pick_far(e1);
    if (e2 < e1) std::swap(e1, e2);
    d.spine = tree_path(inst, e1, e2);
    std::vector<char> on_spine(inst.vertex_count(), 0);
    for (Vertex v : d.spine) on_spine[v] = 1;
    for (Vertex v : deg3)
      if (!on_spine[v]) return std::nullopt;
  }
  std::vector<char> on_spine(inst.vertex_count(), 0);
  for (Vertex v : d.spine) on_spine[v] = 1;
  d.legs_at.resize(d.spine.size());
  for (std::size_t idx = 0; idx < d.spine.size(); ++idx) {
    Vertex u = d.spine[idx];
    for (Vertex w : inst.neighbors(u)) {
      if (on_spine[w]) continue;
      auto leg = walk_path(inst, u, w);
      if (!leg) return std::nullopt;  // leg branches
      d.max_leg_length = std::max(d.max_leg_length, static_cast<int>(leg->size()));
      d.legs_at[idx].push_back(std::move(*leg));
    }
  }
  return d;
}

namespace {

// One position on a leg of a (derived) star: the vertex that burns at that
// time step, its target weight, and whether protecting it is allowed.
struct LegSlot {
  Vertex orig = -1;  // -1 for the dummy path vertices of a derived leg
  Weight weight = 0;
  bool protectable = false;
};

struct FlowCase {
  std::vector<std::vector<LegSlot>> legs;
  std::function<Weight(TimeStep)> budget;
};

struct FlowOutcome {
  Weight value = 0;
  std::vector<Move> moves;
};

FlowNetwork build_flow_network(const FlowCase& fc,
                               std::vector<std::pair<int, int>>* arc_slots) {
  const int d = static_cast<int>(fc.legs.size());
  int p = 0;
  for (const auto& leg : fc.legs) p = std::max(p, static_cast<int>(leg.size()));
  FlowNetwork net;
  net.node_count = 2 + p + d;
  const int src = 0, snk = 1;
  auto level_node = [&](int i) { return 2 + (i - 1); };          // i in 1..p
  auto leg_node = [&](int j) { return 2 + p + (j - 1); };        // j in 1..d
  net.supply.assign(net.node_count, 0);
  net.supply[src] = d;
  net.supply[snk] = -d;
  for (int i = 1; i <= p; ++i)
    net.arcs.push_back({src, level_node(i), fc.budget(i), 0});
  for (int j = 1; j <= d; ++j) {
    const auto& leg = fc.legs[j - 1];
    Weight suffix = 0;
    for (const auto& slot : leg) suffix += slot.weight;
    for (int i = 1; i <= static_cast<int>(leg.size()); ++i) {
      if (leg[i - 1].protectable) {
        if (arc_slots)
          arc_slots->push_back({static_cast<int>(net.arcs.size()), 0});
        net.arcs.push_back({level_node(i), leg_node(j), 1, -suffix});
        if (arc_slots) {
          arc_slots->back().second = (i << 16) | (j & 0xffff);
        }
      }
      suffix -= leg[i - 1].weight;
    }
    net.arcs.push_back({leg_node(j), snk, 1, 0});
  }
  // Bypass so legs may stay unprotected; all slot arcs have cost <= 0, so
  // optimality is unaffected.
  net.arcs.push_back({src, snk, d, 0});
  return net;
}

FlowOutcome solve_star_flow(const FlowCase& fc) {
  FlowOutcome out;
  if (fc.legs.empty()) return out;
  std::vector<std::pair<int, int>> arc_slots;
  FlowNetwork net = build_flow_network(fc, &arc_slots);
  FlowSolution sol = solve_min_cost_flow(net);
  if (!sol.feasible)
    throw Error(ErrorCode::BadInput, "star flow network unexpectedly infeasible");
  out.value = -sol.total_cost;
  for (auto [arc, code] : arc_slots) {
    if (sol.arc_flows[arc] != 1) continue;
    int i = code >> 16;
    int j = code & 0xffff;
    const LegSlot& slot = fc.legs[j - 1][i - 1];
    if (slot.orig >= 0) out.moves.push_back({slot.orig, i});
  }
  return out;
}

FlowCase star_case_from(const TreeInstance& inst, const StarDecomposition& decomp) {
  FlowCase fc;
  for (const auto& leg : decomp.legs) {
    std::vector<LegSlot> slots;
    for (int i = 1; i <= static_cast<int>(leg.size()); ++i) {
      Vertex v = leg[i - 1];
      slots.push_back({v, inst.target_weight(v), !inst.is_forbidden(v, i)});
    }
    fc.legs.push_back(std::move(slots));
  }
  fc.budget = [&inst](TimeStep t) { return inst.budget_at(t); };
  return fc;
}

SolveResult finalize_from_moves(const TreeInstance& inst,
                                std::vector<Move> moves, std::string tag,
                                std::optional<Weight> expected = std::nullopt) {
  Strategy strat = Strategy::of(std::move(moves));
  Weight got = saved_target_weight(inst, simulate(inst, strat));
  if (expected && got != *expected)
    throw std::logic_error("solver value " + std::to_string(*expected) +
                           " does not match simulation " + std::to_string(got));
  SolveResult res;
  res.saved_target_weight = got;
  res.strategy = std::move(strat);
  res.algorithm_tag = std::move(tag);
  return res;
}

SolveResult solve_kstar_center(const TreeInstance& inst,
                               const StarDecomposition& decomp) {
  FlowOutcome flow = solve_star_flow(star_case_from(inst, decomp));
  return finalize_from_moves(inst, std::move(flow.moves), "kstar", flow.value);
}

SolveResult solve_structured(const TreeInstance& inst);

// Root of degree 1 or 2 somewhere off the structure's center/spine: protect
// next to the root where allowed and recurse on what the fire can still
// reach, with time steps shifted by one.
SolveResult solve_off_root(const TreeInstance& inst, const std::string& tag) {
  const Vertex s = inst.root();
  const int n = inst.vertex_count();

  // Component of the tree minus the root containing `keep_from`, rebuilt as
  // an instance rooted there with budgets/forbidden shifted one step.
  auto reduced_instance = [&](Vertex keep_from, std::vector<Vertex>* old_id) {
    std::vector<char> keep(n, 0);
    std::vector<Vertex> stack{keep_from};
    keep[keep_from] = 1;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex u : inst.neighbors(v))
        if (u != s && !keep[u]) {
          keep[u] = 1;
          stack.push_back(u);
        }
    }
    std::vector<Vertex> ids;
    std::vector<Vertex> new_id(n, -1);
    for (Vertex v = 0; v < n; ++v)
      if (keep[v]) {
        new_id[v] = static_cast<Vertex>(ids.size());
        ids.push_back(v);
      }
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (auto [u, v] : inst.edges())
      if (keep[u] && keep[v]) edges.push_back({new_id[u], new_id[v]});
    std::set<Vertex> targets;
    std::map<Vertex, Weight> weights;
    for (Vertex v : inst.target_set())
      if (keep[v]) {
        targets.insert(new_id[v]);
        weights[new_id[v]] = inst.target_weight(v);
      }
    std::vector<Weight> budgets;
    std::size_t len = std::max<std::size_t>(1, inst.budgets().size() - 1);
    for (std::size_t t = 1; t <= len; ++t)
      budgets.push_back(inst.budget_at(static_cast<TimeStep>(t + 1)));
    std::set<Move> forbidden;
    for (const Move& m : inst.forbidden())
      if (keep[m.vertex] && m.time > 1)
        forbidden.insert({new_id[m.vertex], m.time - 1});
    *old_id = ids;
    return TreeInstance::build(static_cast<int>(ids.size()), std::move(edges),
                               new_id[keep_from], std::move(targets),
                               std::move(weights), std::move(budgets),
                               std::move(forbidden));
  };

  auto allowed = [&](Vertex v) { return !inst.is_forbidden(v, 1); };
  std::optional<SolveResult> best;
  auto consider = [&](std::vector<Move> moves) {
    SolveResult r = finalize_from_moves(inst, std::move(moves), tag);
    if (!best || r.saved_target_weight > best->saved_target_weight)
      best = std::move(r);
  };

  consider({});  // floor: never worse than reported
  const auto& nbs = inst.neighbors(s);
  if (nbs.size() == 1) {
    Vertex u = nbs[0];
    if (allowed(u)) {
      consider({{u, 1}});
    } else {
      std::vector<Vertex> ids;
      TreeInstance red = reduced_instance(u, &ids);
      SolveResult sub = solve_structured(red);
      std::vector<Move> moves;
      for (const Move& m : sub.strategy.moves())
        moves.push_back({ids[m.vertex], m.time + 1});
      consider(std::move(moves));
    }
  } else if (nbs.size() == 2) {
    Vertex u1 = nbs[0], u2 = nbs[1];
    if (inst.budget_at(1) >= 2 && allowed(u1) && allowed(u2)) {
      consider({{u1, 1}, {u2, 1}});
    } else {
      for (auto [x, y] : {std::pair{u1, u2}, std::pair{u2, u1}}) {
        if (!allowed(x)) continue;
        std::vector<Vertex> ids;
        TreeInstance red = reduced_instance(y, &ids);
        SolveResult sub = solve_structured(red);
        std::vector<Move> moves{{x, 1}};
        for (const Move& m : sub.strategy.moves())
          moves.push_back({ids[m.vertex], m.time + 1});
        consider(std::move(moves));
      }
    }
  } else {
    throw Error(ErrorCode::NotAStar,
                "root of degree >= 3 is not off-center in a k-star");
  }
  return *best;
}

SolveResult solve_kcaterpillar_spine(const TreeInstance& inst,
                                     const CaterpillarDecomposition& decomp);

SolveResult solve_structured(const TreeInstance& inst) {
  if (inst.vertex_count() == 1) {
    SolveResult res;
    res.algorithm_tag = "trivial";
    return res;
  }
  if (auto star = recognize_kstar(inst)) {
    if (star->center == inst.root()) return solve_kstar_center(inst, *star);
    return solve_off_root(inst, "kstar");
  }
  if (auto cat = recognize_spine(inst)) {
    auto it = std::find(cat->spine.begin(), cat->spine.end(), inst.root());
    if (it != cat->spine.end()) return solve_kcaterpillar_spine(inst, *cat);
    return solve_off_root(inst, "kcaterpillar");
  }
  throw Error(ErrorCode::NoApplicableSolver,
              "reduced instance is neither a k-star nor a k-caterpillar");
}

SolveResult solve_kcaterpillar_spine(const TreeInstance& inst,
                                     const CaterpillarDecomposition& decomp) {
  const auto& spine = decomp.spine;
  const int p = static_cast<int>(spine.size());
  int i = 0;
  for (int idx = 0; idx < p; ++idx)
    if (spine[idx] == inst.root()) i = idx + 1;  // 1-based

  // Target weight of a spine vertex plus all its legs.
  auto block_weight = [&](int r) {  // 1-based
    Weight w = inst.target_weight(spine[r - 1]);
    for (const auto& leg : decomp.legs_at[r - 1])
      for (Vertex v : leg) w += inst.target_weight(v);
    return w;
  };
  std::vector<Weight> prefix(p + 2, 0), suffix(p + 2, 0);
  for (int r = 1; r <= p; ++r) prefix[r] = prefix[r - 1] + block_weight(r);
  for (int r = p; r >= 1; --r) suffix[r] = suffix[r + 1] + block_weight(r);

  std::optional<Weight> best_value;
  std::vector<Move> best_moves;
  // j = 0: nothing protected on the left of the root; q = p+1: nothing on
  // the right. Otherwise spine[j] / spine[q] are protected when the fire
  // reaches the vertex just before them.
  for (int j = 0; j <= i - 1; ++j) {
    for (int q = i + 1; q <= p + 1; ++q) {
      std::vector<Move> spine_moves;
      std::map<TimeStep, Weight> used;
      if (j >= 1) {
        TimeStep t = i - j;
        if (inst.is_forbidden(spine[j - 1], t)) continue;
        spine_moves.push_back({spine[j - 1], t});
        used[t]++;
      }
      if (q <= p) {
        TimeStep t = q - i;
        if (inst.is_forbidden(spine[q - 1], t)) continue;
        spine_moves.push_back({spine[q - 1], t});
        used[t]++;
      }
      bool ok = true;
      for (auto [t, c] : used)
        if (inst.budget_at(t) < c) ok = false;
      if (!ok) continue;

      FlowCase fc;
      // The root's own legs keep their positions.
      for (const auto& leg : decomp.legs_at[i - 1]) {
        std::vector<LegSlot> slots;
        for (int pos = 1; pos <= static_cast<int>(leg.size()); ++pos) {
          Vertex v = leg[pos - 1];
          slots.push_back({v, inst.target_weight(v), !inst.is_forbidden(v, pos)});
        }
        fc.legs.push_back(std::move(slots));
      }
      // Legs of the doomed spine vertices re-hang behind an unprotectable
      // path of the same length as the fire's travel time.
      auto add_derived = [&](int r) {
        int dist = std::abs(i - r);
        for (const auto& leg : decomp.legs_at[r - 1]) {
          std::vector<LegSlot> slots(dist);  // dummies, not protectable
          for (int m = 1; m <= static_cast<int>(leg.size()); ++m) {
            Vertex v = leg[m - 1];
            int pos = dist + m;
            slots.push_back({v, inst.target_weight(v), !inst.is_forbidden(v, pos)});
          }
          fc.legs.push_back(std::move(slots));
        }
      };
      for (int r = j + 1; r <= i - 1; ++r) add_derived(r);
      for (int r = i + 1; r <= q - 1; ++r) add_derived(r);
      auto used_copy = used;
      fc.budget = [&inst, used_copy](TimeStep t) {
        Weight b = inst.budget_at(t);
        if (auto it = used_copy.find(t); it != used_copy.end()) b -= it->second;
        return b;
      };

      FlowOutcome flow = solve_star_flow(fc);
      Weight base = prefix[j] + suffix[q <= p ? q : p + 1];
      Weight value = base + flow.value;
      if (!best_value || value > *best_value) {
        best_value = value;
        best_moves = spine_moves;
        best_moves.insert(best_moves.end(), flow.moves.begin(), flow.moves.end());
      }
    }
  }
  if (!best_value)
    throw Error(ErrorCode::NotACaterpillar, "no feasible spine case");
  return finalize_from_moves(inst, std::move(best_moves), "kcaterpillar",
                             *best_value);
}

void check_star_matches(const TreeInstance& inst, const StarDecomposition& d) {
  if (d.center < 0 || d.center >= inst.vertex_count() ||
      static_cast<int>(d.legs.size()) != inst.degree(d.center))
    throw Error(ErrorCode::NotAStar, "decomposition does not match instance");
  std::size_t covered = 1;
  for (const auto& leg : d.legs) covered += leg.size();
  if (covered != static_cast<std::size_t>(inst.vertex_count()))
    throw Error(ErrorCode::NotAStar, "decomposition does not cover the tree");
}

}  // namespace

FlowNetwork build_kstar_flow_network(const TreeInstance& inst,
                                     const StarDecomposition& decomp) {
  check_star_matches(inst, decomp);
  return build_flow_network(star_case_from(inst, decomp), nullptr);
}

SolveResult solve_kstar(const TreeInstance& inst, const StarDecomposition& decomp) {
  check_star_matches(inst, decomp);
  if (inst.root() == decomp.center) return solve_kstar_center(inst, decomp);
  if (inst.degree(inst.root()) > 2)
    throw Error(ErrorCode::NotAStar, "off-center root must have degree <= 2");
  return solve_off_root(inst, "kstar");
}

SolveResult solve_kcaterpillar(const TreeInstance& inst,
                               const CaterpillarDecomposition& decomp) {
  if (decomp.spine.empty())
    throw Error(ErrorCode::NotACaterpillar, "empty spine");
  auto recheck = recognize_spine(inst);
  if (!recheck)
    throw Error(ErrorCode::NotACaterpillar, "instance is not a k-caterpillar");
  auto it = std::find(decomp.spine.begin(), decomp.spine.end(), inst.root());
  if (it != decomp.spine.end()) return solve_kcaterpillar_spine(inst, decomp);
  return solve_off_root(inst, "kcaterpillar");
}

}  // namespace firetree
