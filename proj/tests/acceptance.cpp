// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every solver result is also re-simulated and validated (witness
// soundness, reported as criterion 8).
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "firetree/core.hpp"
#include "firetree/generators.hpp"
#include "firetree/mincostflow.hpp"
#include "firetree/solvers.hpp"

using namespace firetree;

namespace {

long long g_witnesses_checked = 0;
long long g_witness_failures = 0;

// Criterion 8 is accumulated across all other suites.
bool check_witness(const TreeInstance& inst, const SolveResult& res) {
  ++g_witnesses_checked;
  bool ok = validate_strategy(inst, res.strategy).ok;
  if (ok) {
    SimulationOutcome out = simulate(inst, res.strategy);
    ok = saved_target_weight(inst, out) == res.saved_target_weight;
  }
  if (!ok) ++g_witness_failures;
  return ok;
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

TreeInstance from_parents(const std::vector<Vertex>& parent,
                          std::set<Vertex> targets, Weight b) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 1; v < static_cast<Vertex>(parent.size()); ++v)
    edges.push_back({parent[v], v});
  return TreeInstance::build(static_cast<int>(parent.size()), std::move(edges),
                             0, std::move(targets), {}, {b});
}

std::set<Vertex> leaves_of(const TreeInstance& inst) {
  std::set<Vertex> out;
  for (Vertex v = 0; v < inst.vertex_count(); ++v)
    if (inst.children(v).empty()) out.insert(v);
  return out;
}

bool criterion1_kstar_exactness(std::string& detail) {
  std::mt19937_64 rng(101);
  int mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    RandomTreeOptions opt;
    opt.shape = TreeShape::KStar;
    opt.k = 1 + static_cast<int>(rng() % 3);
    opt.budget = 1 + static_cast<Weight>(rng() % 2);
    opt.random_weights = true;
    opt.max_weight = 5;
    opt.random_root = (i % 2 == 1);  // alternate center / off-center roots
    opt.targets = (rng() & 1) ? RandomTreeOptions::Targets::Leaves
                              : RandomTreeOptions::Targets::RandomSubset;
    int n = 3 + static_cast<int>(rng() % 10);
    TreeInstance inst = gen_random_tree(n, opt, rng());
    auto d = recognize_kstar(inst);
    if (!d) return false;
    SolveResult star = solve_kstar(inst, *d);
    SolveResult oracle = solve_exact_oracle(inst);
    if (star.saved_target_weight != oracle.saved_target_weight) ++mismatches;
    if (!check_witness(inst, star) || !check_witness(inst, oracle))
      ++mismatches;
  }
  detail = "200 seeded k-stars, " + std::to_string(mismatches) + " mismatches";
  return mismatches == 0;
}

bool criterion2_caterpillar_exactness(std::string& detail) {
  std::mt19937_64 rng(202);
  int mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    RandomTreeOptions opt;
    opt.shape = TreeShape::KCaterpillar;
    opt.k = 2;
    opt.budget = 1 + static_cast<Weight>(rng() % 2);
    opt.random_root = (rng() & 1);
    opt.targets = (rng() & 1) ? RandomTreeOptions::Targets::All
                              : RandomTreeOptions::Targets::Leaves;
    int n = 4 + static_cast<int>(rng() % 10);
    TreeInstance inst = gen_random_tree(n, opt, rng());
    auto d = recognize_spine(inst);
    if (!d) return false;
    SolveResult cat = solve_kcaterpillar(inst, *d);
    SolveResult oracle = solve_exact_oracle(inst);
    if (cat.saved_target_weight != oracle.saved_target_weight) ++mismatches;
    if (!check_witness(inst, cat) || !check_witness(inst, oracle))
      ++mismatches;
  }
  detail =
      "200 seeded 2-caterpillars, " + std::to_string(mismatches) + " mismatches";
  return mismatches == 0;
}

// Enumerate all rooted trees with a degree filter; returns parent arrays.
std::vector<std::vector<Vertex>> filtered_trees(int n, int max_deg,
                                                int max_root_deg) {
  std::vector<std::vector<Vertex>> out;
  for (auto& parent : enumerate_rooted_trees(n)) {
    std::vector<int> deg(n, 0);
    for (Vertex v = 1; v < n; ++v) {
      deg[v]++;
      deg[parent[v]]++;
    }
    bool ok = deg[0] <= max_root_deg;
    for (Vertex v = 0; v < n && ok; ++v) ok = deg[v] <= max_deg;
    if (ok) out.push_back(parent);
  }
  return out;
}

bool criterion3_complete_tree_threshold(std::string& detail) {
  int checked = 0;
  for (Weight b = 1; b <= 2; ++b)
    for (int h = 1; h <= 3; ++h) {
      TreeInstance inst =
          gen_complete_tree(h, static_cast<int>(b) + 1, 0, b);
      DecisionResult dec = solve_bsave_decision(inst);
      if (dec.all_saved) {
        detail = "complete tree reported savable";
        return false;
      }
      SolveResult oracle = solve_exact_oracle(inst, OracleMode::Restricted,
                                              inst.vertex_count());
      Weight expect = 1;
      for (int i = 0; i < h; ++i) expect *= (b + 1);
      --expect;  // (b+1)^h - 1
      if (oracle.saved_target_weight != expect || !check_witness(inst, oracle)) {
        detail = "wrong optimum on the complete tree";
        return false;
      }
      ++checked;
    }

  // Every non-complete tree obeying the degree bounds is fully savable.
  int yes = 0;
  for (Weight b = 1; b <= 2; ++b)
    for (int n = 2; n <= 10; ++n)
      for (auto& parent :
           filtered_trees(n, static_cast<int>(b) + 2, static_cast<int>(b) + 1)) {
        TreeInstance inst = from_parents(parent, {}, b);
        TreeInstance with_s = from_parents(parent, leaves_of(inst), b);
        if (is_complete_tree(with_s)) continue;
        if (!solve_bsave_decision(with_s).all_saved) {
          detail = "non-complete tree reported unsavable (n=" +
                   std::to_string(n) + ")";
          return false;
        }
        ++yes;
      }
  detail = std::to_string(checked) + " complete trees, " + std::to_string(yes) +
           " non-complete trees";
  return true;
}

bool criterion4_greedy_pathology(std::string& detail) {
  std::vector<long long> opt_conv, greedy_conv;
  for (int h = 3; h <= 5; ++h) {
    const Weight b = 1;
    GreedyPathologyLayout layout;
    TreeInstance inst = gen_greedy_pathology(h, b, &layout);

    SolveResult greedy = solve_greedy_degree(inst);
    if (!check_witness(inst, greedy)) return false;
    SimulationOutcome gout = simulate(inst, greedy.strategy);
    long long pendant_saved = 0;
    for (Vertex p : layout.pendants) pendant_saved += gout.saved.count(p);
    long long g_h = static_cast<long long>(h - 1) * (b + 2);
    if (pendant_saved != g_h) {
      detail = "greedy pendant count " + std::to_string(pendant_saved) +
               " != " + std::to_string(g_h) + " at h=" + std::to_string(h);
      return false;
    }

    // Exact optimum under the reference counting convention: count only the
    // pendants and the complete-subtree vertices, i.e. make exactly those
    // the target set and maximize.
    std::set<Vertex> counted(layout.pendants.begin(), layout.pendants.end());
    counted.insert(layout.core.begin(), layout.core.end());
    TreeInstance conv_inst = TreeInstance::build(
        inst.vertex_count(), inst.edges(), inst.root(), counted, {}, {b});
    SolveResult opt = solve_exact_oracle(conv_inst, OracleMode::Restricted,
                                         conv_inst.vertex_count());
    if (!check_witness(conv_inst, opt)) return false;
    long long opt_h = static_cast<long long>(h - 2) * (b + 2);
    long long pw = 1;
    for (int i = 0; i < h; ++i) {
      opt_h += pw;
      pw *= (b + 1);
    }
    if (opt.saved_target_weight < opt_h) {
      detail = "optimum " + std::to_string(opt.saved_target_weight) + " < " +
               std::to_string(opt_h) + " at h=" + std::to_string(h);
      return false;
    }
    opt_conv.push_back(opt.saved_target_weight);
    greedy_conv.push_back(g_h);
  }
  for (size_t i = 0; i + 1 < opt_conv.size(); ++i)
    if (opt_conv[i + 1] * greedy_conv[i] <= opt_conv[i] * greedy_conv[i + 1]) {
      detail = "opt/greedy ratio not strictly increasing";
      return false;
    }
  detail = "h=3,4,5: greedy 6,9,12; optimum " + std::to_string(opt_conv[0]) +
           "," + std::to_string(opt_conv[1]) + "," +
           std::to_string(opt_conv[2]);
  return true;
}

bool criterion5_flow_kernel(std::string& detail) {
  std::mt19937_64 rng(505);
  int done = 0;
  while (done < 100) {
    FlowNetwork net;
    net.node_count = 3 + static_cast<int>(rng() % 6);  // <= 8 nodes
    int m = 2 + static_cast<int>(rng() % 11);          // <= 12 arcs
    for (int a = 0; a < m; ++a) {
      int u = static_cast<int>(rng() % net.node_count);
      int v = static_cast<int>(rng() % net.node_count);
      if (u == v) continue;
      if (u > v) std::swap(u, v);  // node order keeps the network acyclic
      net.arcs.push_back({u, v, static_cast<long long>(rng() % 3),
                          static_cast<long long>(rng() % 11) - 5});
    }
    net.supply.assign(net.node_count, 0);
    long long d = static_cast<long long>(rng() % 4);
    net.supply[0] = d;
    net.supply[net.node_count - 1] = -d;

    FlowSolution sol = solve_min_cost_flow(net);
    // Exhaustive enumeration of integral flows.
    std::vector<long long> flow(net.arcs.size(), 0);
    bool found = false;
    long long best = 0;
    auto rec = [&](auto&& self, size_t i) -> void {
      if (i == net.arcs.size()) {
        std::vector<long long> out(net.node_count, 0);
        long long cost = 0;
        for (size_t a = 0; a < net.arcs.size(); ++a) {
          out[net.arcs[a].tail] += flow[a];
          out[net.arcs[a].head] -= flow[a];
          cost += flow[a] * net.arcs[a].cost;
        }
        for (int v = 0; v < net.node_count; ++v)
          if (out[v] != net.supply[v]) return;
        if (!found || cost < best) best = cost;
        found = true;
        return;
      }
      for (long long f = 0; f <= net.arcs[i].capacity; ++f) {
        flow[i] = f;
        self(self, i + 1);
      }
      flow[i] = 0;
    };
    rec(rec, 0);
    if (found != sol.feasible || (found && sol.total_cost != best)) {
      detail = "solver disagrees with enumeration on network " +
               std::to_string(done);
      return false;
    }
    ++done;
  }
  detail = "100 seeded DAG networks match enumeration";
  return true;
}

bool criterion6_npc_equivalence(std::string& detail) {
  int checked = 0;
  for (int n = 2; n <= 7; ++n)
    for (auto& parent : filtered_trees(n, 3, 3)) {
      TreeInstance probe = from_parents(parent, {}, 1);
      TreeInstance inner = from_parents(parent, leaves_of(probe), 1);
      TreeInstance lifted = gen_npc_reduction(inner, 1);
      bool inner_yes = decide_saves_all(inner).all_saved;
      bool lifted_yes = decide_saves_all(lifted, 80).all_saved;
      if (inner_yes != lifted_yes) {
        detail = "equivalence broken at n=" + std::to_string(n);
        return false;
      }
      ++checked;
    }
  detail = std::to_string(checked) + " inner trees, equivalence holds";
  return true;
}

bool criterion7_oracle_normalization(std::string& detail) {
  int checked = 0;
  for (int n = 1; n <= 9; ++n)
    for (auto& parent : enumerate_rooted_trees(n))
      for (Weight b = 1; b <= 2; ++b) {
        std::set<Vertex> all;
        for (Vertex v = 0; v < n; ++v) all.insert(v);
        TreeInstance inst = from_parents(parent, all, b);
        SolveResult r = solve_exact_oracle(inst, OracleMode::Restricted);
        SolveResult f = solve_exact_oracle(inst, OracleMode::Full);
        if (r.saved_target_weight != f.saved_target_weight ||
            !check_witness(inst, r) || !check_witness(inst, f)) {
          detail = "restricted != full at n=" + std::to_string(n);
          return false;
        }
        ++checked;
      }
  detail = std::to_string(checked) + " (tree, budget) pairs agree";
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*fn)(std::string&);
    double limit_s;
  };
  const Criterion criteria[] = {
      {"1 k-star exactness vs oracle", criterion1_kstar_exactness, 60},
      {"2 k-caterpillar exactness vs oracle", criterion2_caterpillar_exactness,
       300},
      {"3 complete-tree threshold / savability", criterion3_complete_tree_threshold,
       120},
      {"4 greedy pathology counts and ratio", criterion4_greedy_pathology, 60},
      {"5 min-cost-flow kernel vs enumeration", criterion5_flow_kernel, 30},
      {"6 budget-lift reduction equivalence", criterion6_npc_equivalence, 300},
      {"7 restricted oracle = full oracle", criterion7_oracle_normalization,
       600},
  };

  bool all_ok = true;
  for (const Criterion& c : criteria) {
    Timer t;
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = t.seconds();
    if (secs > c.limit_s) {
      ok = false;
      detail += " [over time limit]";
    }
    std::printf("criterion %s: %s (%s, %.1fs)\n", c.name, ok ? "PASS" : "FAIL",
                detail.c_str(), secs);
    std::fflush(stdout);
    all_ok = all_ok && ok;
  }

  bool witness_ok = g_witness_failures == 0 && g_witnesses_checked > 0;
  std::printf("criterion 8 witness soundness: %s (%lld witnesses checked, %lld failures)\n",
              witness_ok ? "PASS" : "FAIL", g_witnesses_checked,
              g_witness_failures);
  all_ok = all_ok && witness_ok;
  return all_ok ? 0 : 1;
}
