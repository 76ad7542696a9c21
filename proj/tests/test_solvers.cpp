#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "firetree/core.hpp"
#include "firetree/generators.hpp"
#include "firetree/mincostflow.hpp"
#include "firetree/solvers.hpp"

using namespace firetree;

namespace {

TreeInstance path_instance(int n, std::set<Vertex> targets, Weight b = 1,
                           Vertex root = 0,
                           std::map<Vertex, Weight> weights = {}) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return TreeInstance::build(n, std::move(edges), root, std::move(targets),
                             std::move(weights), {b});
}

// Star centered at 0 with three legs of two vertices each; targets = tips.
TreeInstance three_leg_star(Weight b) {
  return TreeInstance::build(
      7, {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {0, 5}, {5, 6}}, 0, {2, 4, 6}, {},
      {b});
}

void check_witness(const TreeInstance& inst, const SolveResult& res) {
  CHECK(validate_strategy(inst, res.strategy).ok);
  SimulationOutcome out = simulate(inst, res.strategy);
  CHECK(saved_target_weight(inst, out) == res.saved_target_weight);
}

}  // namespace

TEST_CASE("oracle on a path protects the root's neighbor") {
  TreeInstance inst = path_instance(5, {0, 1, 2, 3, 4});
  SolveResult res = solve_exact_oracle(inst);
  CHECK(res.saved_target_weight == 4);
  REQUIRE(res.strategy.size() == 1);
  CHECK(res.strategy.moves()[0] == Move{1, 1});
  check_witness(inst, res);
}

TEST_CASE("oracle saves 3 of 4 leaves of the full binary tree of height 2") {
  TreeInstance inst = gen_complete_tree(2, 2);
  SolveResult restricted = solve_exact_oracle(inst, OracleMode::Restricted);
  SolveResult full = solve_exact_oracle(inst, OracleMode::Full);
  CHECK(restricted.saved_target_weight == 3);
  CHECK(full.saved_target_weight == 3);
  check_witness(inst, restricted);
  check_witness(inst, full);
}

TEST_CASE("oracle rejects instances above its cap") {
  TreeInstance inst = gen_complete_tree(4, 2);  // 31 vertices
  CHECK_THROWS_AS(solve_exact_oracle(inst), Error);
  try {
    solve_exact_oracle(inst);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InstanceTooLarge);
  }
}

TEST_CASE("greedy on a 4-leaf star saves one vertex") {
  TreeInstance inst = TreeInstance::build(
      5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, 0, {0, 1, 2, 3, 4});
  SolveResult res = solve_greedy_degree(inst);
  CHECK(res.saved_target_weight == 1);
  check_witness(inst, res);
}

TEST_CASE("greedy on the pathology family follows the decoy tips") {
  GreedyPathologyLayout layout;
  TreeInstance inst = gen_greedy_pathology(4, 1, &layout);
  SolveResult res = solve_greedy_degree(inst);
  SimulationOutcome out = simulate(inst, res.strategy);
  int pendant_saved = 0;
  for (Vertex p : layout.pendants) pendant_saved += out.saved.count(p);
  CHECK(pendant_saved == 9);  // (h-1)(b+2)
  // The 9 pendants, the 3 protected tips, and one last-step core leaf the
  // greedy grabs while the fire finishes.
  CHECK(res.saved_target_weight == 13);
  check_witness(inst, res);
}

TEST_CASE("corridor directs the fire along a cheapest stoppable path") {
  // Root 0 with children 1,2,3; vertex 1 has three children of its own.
  TreeInstance inst = TreeInstance::build(
      7, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {1, 5}, {1, 6}}, 0,
      {0, 1, 2, 3, 4, 5, 6}, {}, {2});
  SolveResult res = solve_corridor(inst);
  CHECK(res.saved_target_weight == 5);  // n-2: the fire burns a 2-vertex path
  check_witness(inst, res);
  SolveResult oracle = solve_exact_oracle(inst);
  CHECK(oracle.saved_target_weight == 5);
}

TEST_CASE("corridor on the complete ternary tree loses exactly one leaf") {
  TreeInstance inst = gen_complete_tree(2, 3, 0, 2);
  SolveResult res = solve_corridor(inst);
  CHECK(res.saved_target_weight == 8);
  check_witness(inst, res);
}

TEST_CASE("corridor on a path rooted at a degree-1 endpoint burns only s") {
  TreeInstance inst = path_instance(4, {0, 1, 2, 3});
  SolveResult res = solve_corridor(inst);
  CHECK(res.saved_target_weight == 3);
  check_witness(inst, res);
}

TEST_CASE("corridor enforces its degree preconditions") {
  TreeInstance star = TreeInstance::build(
      5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, 0, {1, 2, 3, 4});  // deg 4 > b+2
  CHECK_THROWS_AS(solve_corridor(star), Error);
  try {
    solve_corridor(star);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolated);
  }
}

TEST_CASE("complete tree recognition") {
  CHECK(is_complete_tree(gen_complete_tree(2, 3)));
  CHECK(is_complete_tree(TreeInstance::build(1, {}, 0, {0})));
  // T(r,2,3) minus one leaf: rebuild with 12 vertices.
  TreeInstance full = gen_complete_tree(2, 3);
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (auto [u, v] : full.edges())
    if (u != 12 && v != 12) edges.push_back({u, v});
  TreeInstance pruned = TreeInstance::build(12, std::move(edges), 0, {11});
  CHECK_FALSE(is_complete_tree(pruned));
}

TEST_CASE("save-all decision examples") {
  // Complete (b+1)-ary: no.
  DecisionResult no = solve_bsave_decision(gen_complete_tree(2, 2));
  CHECK_FALSE(no.all_saved);
  // Non-complete with max degree b+2, deg(root) <= b+1: yes.
  TreeInstance inst = TreeInstance::build(
      6, {{0, 1}, {1, 2}, {1, 3}, {0, 4}, {4, 5}}, 0, {2, 3, 5});
  DecisionResult yes = solve_bsave_decision(inst);
  CHECK(yes.all_saved);
  REQUIRE(yes.witness.has_value());
  SimulationOutcome out = simulate(inst, *yes.witness);
  CHECK(saved_target_weight(inst, out) == inst.total_target_weight());
  // Empty target set: trivially yes.
  TreeInstance empty_s = path_instance(3, {});
  CHECK(solve_bsave_decision(empty_s).all_saved);
}

TEST_CASE("k-star recognition") {
  // Hub 0 with five legs of lengths 3,3,2,1,1.
  TreeInstance star = TreeInstance::build(
      11,
      {{0, 1}, {1, 2}, {2, 3}, {0, 4}, {4, 5}, {5, 6}, {0, 7}, {7, 8}, {0, 9},
       {0, 10}},
      0, {3, 6, 8, 9, 10});
  auto d = recognize_kstar(star);
  REQUIRE(d.has_value());
  CHECK(d->center == 0);
  CHECK(d->legs.size() == 5);
  CHECK(d->max_leg_length == 3);

  // Two branch vertices: not a k-star.
  TreeInstance two = TreeInstance::build(
      8, {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {4, 5}, {4, 6}, {4, 7}}, 0, {5});
  CHECK_FALSE(recognize_kstar(two).has_value());

  // A path is a k-star centered at its middle vertex.
  auto p = recognize_kstar(path_instance(5, {4}));
  REQUIRE(p.has_value());
  CHECK(p->center == 2);
  CHECK(p->max_leg_length == 2);
}

TEST_CASE("k-star solver center-rooted") {
  TreeInstance inst = three_leg_star(1);
  auto d = recognize_kstar(inst);
  REQUIRE(d.has_value());
  SolveResult res = solve_kstar(inst, *d);
  CHECK(res.saved_target_weight == 2);
  check_witness(inst, res);
  CHECK(min_burned(inst, res) == 1);

  TreeInstance rich = three_leg_star(3);
  SolveResult all = solve_kstar(rich, *recognize_kstar(rich));
  CHECK(all.saved_target_weight == 3);
  check_witness(rich, all);
}

TEST_CASE("k-star solver off-center root of degree 2") {
  // Path 0-1-2-3-4 rooted at 1; both neighbors of the root are targets.
  TreeInstance inst = path_instance(5, {0, 2}, 1, 1);
  auto d = recognize_kstar(inst);
  REQUIRE(d.has_value());
  CHECK(d->center != inst.root());
  SolveResult res = solve_kstar(inst, *d);
  CHECK(res.saved_target_weight == 1);  // |S| - 1
  check_witness(inst, res);
  CHECK(res.saved_target_weight == solve_exact_oracle(inst).saved_target_weight);
}

TEST_CASE("sign identity: saved weight equals minus the flow cost") {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 30; ++iter) {
    RandomTreeOptions opt;
    opt.shape = TreeShape::KStar;
    opt.k = 3;
    opt.random_weights = true;
    opt.budget = 1 + static_cast<Weight>(rng() % 2);
    TreeInstance inst = gen_random_tree(4 + static_cast<int>(rng() % 8), opt,
                                        rng());
    auto d = recognize_kstar(inst);
    REQUIRE(d.has_value());
    if (inst.root() != d->center) continue;
    FlowNetwork net = build_kstar_flow_network(inst, *d);
    FlowSolution sol = solve_min_cost_flow(net);
    REQUIRE(sol.feasible);
    SolveResult res = solve_kstar(inst, *d);
    CHECK(res.saved_target_weight == -sol.total_cost);
  }
}

TEST_CASE("spine recognition") {
  // Spine 0-1-2: legs 3 and 7 at 0; 4-5 at 1; 6 and 8 at 2.
  TreeInstance cat = TreeInstance::build(
      9, {{0, 1}, {1, 2}, {0, 3}, {0, 7}, {1, 4}, {4, 5}, {2, 6}, {2, 8}}, 0,
      {3, 5, 6});
  auto d = recognize_spine(cat);
  REQUIRE(d.has_value());
  CHECK(d->spine == std::vector<Vertex>{0, 1, 2});
  CHECK(d->max_leg_length == 2);

  // Three branch vertices hanging off a hub cannot lie on one spine.
  TreeInstance bad = TreeInstance::build(
      10,
      {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {1, 5}, {2, 6}, {2, 7}, {3, 8}, {3, 9}},
      0, {4});
  CHECK_FALSE(recognize_spine(bad).has_value());

  // A k-star is a k-caterpillar with a one-vertex spine.
  auto s = recognize_spine(three_leg_star(1));
  REQUIRE(s.has_value());
  CHECK(s->spine == std::vector<Vertex>{0});
}

TEST_CASE("caterpillar solver on a path saves n-1") {
  TreeInstance inst = path_instance(6, {0, 1, 2, 3, 4, 5});
  auto d = recognize_spine(inst);
  REQUIRE(d.has_value());
  SolveResult res = solve_kcaterpillar(inst, *d);
  CHECK(res.saved_target_weight == 5);
  check_witness(inst, res);
}

TEST_CASE("caterpillar solver matches the oracle on random 2-caterpillars") {
  std::mt19937_64 rng(4242);
  int done = 0;
  while (done < 40) {
    RandomTreeOptions opt;
    opt.shape = TreeShape::KCaterpillar;
    opt.k = 2;
    opt.targets = (rng() & 1) ? RandomTreeOptions::Targets::All
                              : RandomTreeOptions::Targets::Leaves;
    opt.random_root = true;
    opt.budget = 1 + static_cast<Weight>(rng() % 2);
    TreeInstance inst =
        gen_random_tree(4 + static_cast<int>(rng() % 10), opt, rng());
    auto d = recognize_spine(inst);
    REQUIRE(d.has_value());
    SolveResult cat = solve_kcaterpillar(inst, *d);
    SolveResult oracle = solve_exact_oracle(inst);
    CHECK(cat.saved_target_weight == oracle.saved_target_weight);
    check_witness(inst, cat);
    ++done;
  }
}

TEST_CASE("pathology optimum reproduces the known count at h=4") {
  // Count saved vertices among the pendants and the complete-subtree core;
  // this is the convention under which greedy scores (h-1)(b+2) and the
  // optimum scores (h-2)(b+2) + sum of (b+1)^i.
  GreedyPathologyLayout layout;
  TreeInstance inst = gen_greedy_pathology(4, 1, &layout);
  SolveResult res = solve_exact_oracle(inst, OracleMode::Restricted, 40);
  SimulationOutcome out = simulate(inst, res.strategy);
  long long count = 0;
  for (Vertex v : layout.pendants) count += out.saved.count(v);
  for (Vertex v : layout.core) count += out.saved.count(v);
  CHECK(count == 21);  // (4-2)*3 + (1+2+4+8)
  check_witness(inst, res);
}

TEST_CASE("min burned complements the saved weight") {
  TreeInstance root_only = path_instance(3, {0});
  SolveResult res = solve_exact_oracle(root_only);
  CHECK(res.saved_target_weight == 0);
  CHECK(min_burned(root_only, res) == 1);

  TreeInstance easy = path_instance(4, {3});
  SolveResult saved = solve_exact_oracle(easy);
  CHECK(min_burned(easy, saved) == 0);
}

TEST_CASE("restricted oracle equals full oracle on random trees") {
  std::mt19937_64 rng(321);
  for (int iter = 0; iter < 40; ++iter) {
    RandomTreeOptions opt;
    opt.targets = RandomTreeOptions::Targets::RandomSubset;
    opt.budget = 1 + static_cast<Weight>(rng() % 2);
    TreeInstance inst =
        gen_random_tree(3 + static_cast<int>(rng() % 8), opt, rng());
    SolveResult r = solve_exact_oracle(inst, OracleMode::Restricted);
    SolveResult f = solve_exact_oracle(inst, OracleMode::Full);
    CHECK(r.saved_target_weight == f.saved_target_weight);
    check_witness(inst, r);
    check_witness(inst, f);
  }
}

TEST_CASE("save-all search agrees with the oracle") {
  std::mt19937_64 rng(555);
  for (int iter = 0; iter < 50; ++iter) {
    RandomTreeOptions opt;
    opt.targets = RandomTreeOptions::Targets::Leaves;
    TreeInstance inst =
        gen_random_tree(3 + static_cast<int>(rng() % 8), opt, rng());
    DecisionResult dec = decide_saves_all(inst);
    SolveResult oracle = solve_exact_oracle(inst);
    CHECK(dec.all_saved ==
          (oracle.saved_target_weight == inst.total_target_weight()));
    if (dec.all_saved) {
      REQUIRE(dec.witness.has_value());
      SimulationOutcome out = simulate(inst, *dec.witness);
      CHECK(saved_target_weight(inst, out) == inst.total_target_weight());
    }
  }
}

TEST_CASE("auto dispatch picks an exact solver and reports its tag") {
  TreeInstance star = three_leg_star(1);
  SolveResult res = solve_auto(star);
  CHECK(res.saved_target_weight == 2);
  CHECK_FALSE(res.algorithm_tag.empty());
  check_witness(star, res);
}
