#include "firetree/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>

namespace firetree {

namespace {

// Collects the pieces of a tree under construction.
struct Builder {
  std::vector<std::pair<Vertex, Vertex>> edges;
  int next_id = 0;

  Vertex fresh() { return next_id++; }
  void link(Vertex u, Vertex v) { edges.push_back({u, v}); }
};

std::vector<Vertex> leaves_of(const TreeInstance& inst) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < inst.vertex_count(); ++v)
    if (inst.children(v).empty()) out.push_back(v);
  return out;
}

void require_targets_are_leaves(const TreeInstance& inst, const char* who) {
  auto ls = leaves_of(inst);
  std::set<Vertex> leaf_set(ls.begin(), ls.end());
  if (inst.target_set() != leaf_set)
    throw Error(ErrorCode::BadInput,
                std::string(who) + " requires the target set to be the leaves");
}

}  // namespace

TreeInstance gen_complete_tree(int h, int d, Vertex root_label, Weight budget) {
  if (h < 0 || d < 1)
    throw Error(ErrorCode::BadInput, "complete tree needs h >= 0, d >= 1");
  Builder b;
  Vertex root = b.fresh();
  std::vector<Vertex> level{root};
  for (int depth = 1; depth <= h; ++depth) {
    std::vector<Vertex> next;
    for (Vertex u : level)
      for (int c = 0; c < d; ++c) {
        Vertex v = b.fresh();
        b.link(u, v);
        next.push_back(v);
      }
    level = std::move(next);
  }
  const int n = b.next_id;
  if (root_label < 0 || root_label >= n)
    throw Error(ErrorCode::IdOutOfRange, "root_label out of range");
  auto relabel = [&](Vertex v) {
    if (v == 0) return root_label;
    if (v == root_label) return Vertex{0};
    return v;
  };
  for (auto& [u, v] : b.edges) {
    u = relabel(u);
    v = relabel(v);
  }
  std::set<Vertex> targets;
  for (Vertex v : level) targets.insert(relabel(v));
  if (h == 0) targets = {root_label};  // the single vertex is a leaf
  return TreeInstance::build(n, std::move(b.edges), root_label,
                             std::move(targets), {}, {budget});
}

TreeInstance gen_greedy_pathology(int h, Weight b, GreedyPathologyLayout* layout) {
  if (h < 2 || b < 1)
    throw Error(ErrorCode::BadInput, "greedy pathology needs h >= 2, b >= 1");
  Builder bu;
  Vertex s = bu.fresh();
  // Complete (b+1)-ary tree of height h-1 rooted at r.
  Vertex r = bu.fresh();
  bu.link(s, r);
  std::vector<Vertex> core{r};
  std::vector<Vertex> level{r};
  for (int depth = 1; depth <= h - 1; ++depth) {
    std::vector<Vertex> next;
    for (Vertex u : level)
      for (Weight c = 0; c < b + 1; ++c) {
        Vertex v = bu.fresh();
        bu.link(u, v);
        next.push_back(v);
        core.push_back(v);
      }
    level = std::move(next);
  }
  std::vector<Vertex> spur_tips;
  Vertex v1 = bu.fresh();
  bu.link(s, v1);
  spur_tips.push_back(v1);
  for (int i = 2; i <= h - 1; ++i) {
    // Path of length i-1 (i vertices) from u_i (adjacent to s) to v_i, so
    // v_i sits at distance i from s.
    Vertex prev = bu.fresh();
    bu.link(s, prev);
    for (int step = 1; step < i; ++step) {
      Vertex nxt = bu.fresh();
      bu.link(prev, nxt);
      prev = nxt;
    }
    spur_tips.push_back(prev);
  }
  std::vector<Vertex> pendants;
  for (Vertex tip : spur_tips)
    for (Weight c = 0; c < b + 2; ++c) {
      Vertex p = bu.fresh();
      bu.link(tip, p);
      pendants.push_back(p);
    }
  const int n = bu.next_id;
  std::set<Vertex> all;
  for (Vertex v = 0; v < n; ++v) all.insert(v);
  if (layout) {
    layout->ignition = s;
    layout->core_root = r;
    layout->spur_tips = spur_tips;
    layout->pendants = pendants;
    layout->core = core;
  }
  return TreeInstance::build(n, std::move(bu.edges), s, std::move(all), {}, {b});
}

TreeInstance gen_npc_reduction(const TreeInstance& inner, Weight b) {
  require_targets_are_leaves(inner, "npc reduction");
  for (Vertex v = 0; v < inner.vertex_count(); ++v)
    if (inner.degree(v) > b + 2)
      throw Error(ErrorCode::DegreeTooHigh,
                  "inner tree has a vertex of degree > b+2");
  const int h = inner.height();
  if (h < 1)
    throw Error(ErrorCode::BadInput,
                "npc reduction needs an inner tree of height >= 1");

  Builder bu;
  bu.next_id = inner.vertex_count();
  std::vector<std::pair<Vertex, Vertex>> edges = inner.edges();
  auto link = [&](Vertex u, Vertex v) { edges.push_back({u, v}); };

  Vertex sp = bu.fresh();
  std::set<Vertex> targets = inner.target_set();

  // y-path from s' down to the inner root.
  std::vector<Vertex> y;
  Vertex prev = sp;
  for (int i = 1; i <= h - 1; ++i) {
    Vertex yi = bu.fresh();
    link(prev, yi);
    y.push_back(yi);
    prev = yi;
  }
  link(prev, inner.root());

  // x-path carrying the w-paths whose deep leaves pace the extra firefighter.
  std::vector<Vertex> x;
  prev = sp;
  for (int i = 1; i <= h; ++i) {
    Vertex xi = bu.fresh();
    link(prev, xi);
    x.push_back(xi);
    prev = xi;
  }
  for (Weight l = 0; l < b + 1; ++l) {
    Vertex v = bu.fresh();
    link(sp, v);
    targets.insert(v);
  }
  for (int i = 1; i <= h - 1; ++i)
    for (Weight l = 0; l < b + 1; ++l) {
      Vertex v = bu.fresh();
      link(y[i - 1], v);
      targets.insert(v);
    }
  for (int i = 1; i <= h; ++i) {
    Vertex w = bu.fresh();
    link(x[i - 1], w);
    for (int j = 2; j <= h; ++j) {
      Vertex nxt = bu.fresh();
      link(w, nxt);
      w = nxt;
    }
    targets.insert(w);  // w_{i,h}
  }
  return TreeInstance::build(bu.next_id, std::move(edges), sp,
                             std::move(targets), {}, {b + 1});
}

MaxsaveReduction gen_maxsave_reduction(const TreeInstance& inner, Weight b) {
  require_targets_are_leaves(inner, "maxsave reduction");
  const long long n = inner.vertex_count();
  // ceil(log_{b+1}(n)) + 1: the smallest height making each copy at least
  // as big as the inner tree.
  int g = 0;
  long long pow = 1;
  while (pow < n) {
    pow *= (b + 1);
    ++g;
  }
  const int height = g + 1;
  long long copy_size = 0;
  long long term = 1;
  for (int i = 0; i <= height; ++i) {
    copy_size += term;
    term *= (b + 1);
  }

  Builder bu;
  bu.next_id = inner.vertex_count();
  std::vector<std::pair<Vertex, Vertex>> edges = inner.edges();
  auto leaves = leaves_of(inner);
  for (Vertex leaf : leaves)
    for (Weight c = 0; c < b + 2; ++c) {
      Vertex root = bu.fresh();
      edges.push_back({leaf, root});
      std::vector<Vertex> level{root};
      for (int depth = 1; depth <= height; ++depth) {
        std::vector<Vertex> next;
        for (Vertex u : level)
          for (Weight ch = 0; ch < b + 1; ++ch) {
            Vertex v = bu.fresh();
            edges.push_back({u, v});
            next.push_back(v);
          }
        level = std::move(next);
      }
    }
  std::set<Vertex> all;
  for (Vertex v = 0; v < bu.next_id; ++v) all.insert(v);
  MaxsaveReduction out{
      TreeInstance::build(bu.next_id, std::move(edges), inner.root(),
                          std::move(all), {}, {b}),
      (b + 2) * static_cast<long long>(leaves.size()) * copy_size, copy_size,
      height};
  return out;
}

MinsaveReduction gen_minsave_reduction(const TreeInstance& inner, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorCode::EpsilonOutOfRange, "epsilon must be in (0,1)");
  require_targets_are_leaves(inner, "minsave reduction");
  const double n1 = inner.vertex_count();
  const double beta = 4.0 / epsilon - 3.0;
  const Weight b = inner.budget_at(1);
  const double raw = std::pow(n1, beta) + static_cast<double>(b);
  if (!(raw < 5e6))
    throw Error(ErrorCode::ShapeInfeasible,
                "pendant count too large to materialize");
  const long long pendants = static_cast<long long>(std::floor(raw));

  Builder bu;
  bu.next_id = inner.vertex_count();
  std::vector<std::pair<Vertex, Vertex>> edges = inner.edges();
  for (Vertex leaf : leaves_of(inner))
    for (long long c = 0; c < pendants; ++c) {
      Vertex v = bu.fresh();
      edges.push_back({leaf, v});
    }
  std::set<Vertex> all;
  for (Vertex v = 0; v < bu.next_id; ++v) all.insert(v);
  MinsaveReduction out{
      TreeInstance::build(bu.next_id, std::move(edges), inner.root(),
                          std::move(all), {}, inner.budgets()),
      beta, pendants};
  return out;
}

namespace {

std::vector<std::pair<Vertex, Vertex>> random_prufer_tree(int n,
                                                          std::mt19937_64& rng) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  if (n == 1) return edges;
  if (n == 2) return {{0, 1}};
  std::vector<int> seq(n - 2);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int& x : seq) x = pick(rng);
  std::vector<int> degree(n, 1);
  for (int x : seq) degree[x]++;
  std::priority_queue<int, std::vector<int>, std::greater<>> leaves;
  for (int v = 0; v < n; ++v)
    if (degree[v] == 1) leaves.push(v);
  for (int x : seq) {
    int leaf = leaves.top();
    leaves.pop();
    edges.push_back({leaf, x});
    if (--degree[x] == 1) leaves.push(x);
  }
  int a = leaves.top();
  leaves.pop();
  int c = leaves.top();
  edges.push_back({a, c});
  return edges;
}

}  // namespace

TreeInstance gen_random_tree(int n, const RandomTreeOptions& opt,
                             std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::BadInput, "n must be >= 1");
  if (opt.shape != TreeShape::Any && opt.k < 1)
    throw Error(ErrorCode::ShapeInfeasible, "shaped trees need k >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Vertex, Vertex>> edges;
  Vertex structural_root = 0;
  if (opt.shape == TreeShape::Any) {
    edges = random_prufer_tree(n, rng);
  } else {
    // The recognizers pick a canonical center/spine, so the construction has
    // to pin it: a star center gets at least three legs (degree >= 3) and
    // both spine endpoints get two legs each. Otherwise the canonical choice
    // can differ from the built one and split off legs longer than k.
    int spine_len = 1;
    if (opt.shape == TreeShape::KCaterpillar && n >= 7)
      spine_len = 2 + static_cast<int>(
                          rng() % static_cast<std::uint64_t>(n - 5));
    int next = 0;
    std::vector<Vertex> spine;
    for (int i = 0; i < spine_len; ++i) {
      Vertex v = next++;
      if (!spine.empty()) edges.push_back({spine.back(), v});
      spine.push_back(v);
    }
    int remaining = n - spine_len;
    auto add_leg = [&](Vertex attach, int len) {
      Vertex prev = attach;
      for (int i = 0; i < len; ++i) {
        Vertex v = next++;
        edges.push_back({prev, v});
        prev = v;
      }
      remaining -= len;
    };
    int legs_made = 0;
    if (spine_len >= 2) {
      add_leg(spine.front(), 1);
      add_leg(spine.front(), 1);
      add_leg(spine.back(), 1);
      add_leg(spine.back(), 1);
    }
    while (remaining > 0) {
      Vertex attach = spine[rng() % spine.size()];
      // Keep enough budget for three legs at a lone center.
      int reserve = spine_len == 1 ? std::max(0, 2 - legs_made) : 0;
      int cap = std::min(opt.k, remaining - reserve);
      int len = cap <= 1
                    ? 1
                    : 1 + static_cast<int>(rng() %
                                           static_cast<std::uint64_t>(cap));
      add_leg(attach, len);
      ++legs_made;
    }
    structural_root = spine[0];
  }

  // Random label permutation keeps ids uninformative.
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (auto& [u, v] : edges) {
    u = perm[u];
    v = perm[v];
  }
  Vertex root = perm[structural_root];
  if (opt.random_root) root = static_cast<Vertex>(rng() % n);

  // Build once without targets to learn the rooted leaf set.
  std::set<Vertex> all;
  for (Vertex v = 0; v < n; ++v) all.insert(v);
  TreeInstance probe = TreeInstance::build(n, edges, root, all, {}, {opt.budget});

  std::set<Vertex> targets;
  switch (opt.targets) {
    case RandomTreeOptions::Targets::All:
      targets = all;
      break;
    case RandomTreeOptions::Targets::Leaves:
      for (Vertex v = 0; v < n; ++v)
        if (probe.children(v).empty()) targets.insert(v);
      break;
    case RandomTreeOptions::Targets::RandomSubset:
      for (Vertex v = 0; v < n; ++v)
        if (v != root && (rng() & 1)) targets.insert(v);
      break;
  }
  std::map<Vertex, Weight> weights;
  if (opt.random_weights)
    for (Vertex v : targets)
      weights[v] = 1 + static_cast<Weight>(
                           rng() % static_cast<std::uint64_t>(opt.max_weight));
  return TreeInstance::build(n, std::move(edges), root, std::move(targets),
                             std::move(weights), {opt.budget});
}

std::vector<std::vector<Vertex>> enumerate_rooted_trees(int n) {
  std::vector<std::vector<Vertex>> out;
  if (n < 1) return out;
  if (n == 1) {
    out.push_back({-1});
    return out;
  }
  // Beyer-Hedetniemi level-sequence enumeration.
  std::vector<int> level(n);
  for (int i = 0; i < n; ++i) level[i] = i + 1;
  for (;;) {
    std::vector<Vertex> parent(n, -1);
    std::vector<Vertex> last_at_level(n + 2, -1);
    for (int i = 0; i < n; ++i) {
      if (level[i] > 1) parent[i] = last_at_level[level[i] - 1];
      last_at_level[level[i]] = i;
    }
    out.push_back(std::move(parent));

    int p = -1;
    for (int i = n - 1; i >= 0; --i)
      if (level[i] > 2) {
        p = i;
        break;
      }
    if (p == -1) break;
    int q = -1;
    for (int i = p - 1; i >= 0; --i)
      if (level[i] == level[p] - 1) {
        q = i;
        break;
      }
    for (int i = p; i < n; ++i) level[i] = level[i - (p - q)];
  }
  return out;
}

GeneratedInstance generate(const GenSpec& spec) {
  if (spec.family == "complete") {
    GeneratedInstance g{gen_complete_tree(spec.h, spec.d, 0, spec.b), {}};
    g.meta["h"] = spec.h;
    g.meta["d"] = spec.d;
    return g;
  }
  if (spec.family == "greedy-pathology") {
    GeneratedInstance g{gen_greedy_pathology(spec.h, spec.b), {}};
    g.meta["h"] = spec.h;
    g.meta["g_h"] = static_cast<double>((spec.h - 1) * (spec.b + 2));
    return g;
  }
  if (spec.family == "npc-reduction") {
    if (!spec.inner)
      throw Error(ErrorCode::BadInput, "npc-reduction needs an inner instance");
    GeneratedInstance g{gen_npc_reduction(*spec.inner, spec.b), {}};
    g.meta["inner_n"] = spec.inner->vertex_count();
    return g;
  }
  if (spec.family == "maxsave-reduction") {
    if (!spec.inner)
      throw Error(ErrorCode::BadInput, "maxsave-reduction needs an inner instance");
    MaxsaveReduction r = gen_maxsave_reduction(*spec.inner, spec.b);
    GeneratedInstance g{std::move(r.instance), {}};
    g.meta["threshold_k"] = static_cast<double>(r.threshold);
    g.meta["copy_size"] = static_cast<double>(r.copy_size);
    g.meta["copy_height"] = r.copy_height;
    return g;
  }
  if (spec.family == "minsave-reduction") {
    if (!spec.inner)
      throw Error(ErrorCode::BadInput, "minsave-reduction needs an inner instance");
    MinsaveReduction r = gen_minsave_reduction(*spec.inner, spec.epsilon);
    GeneratedInstance g{std::move(r.instance), {}};
    g.meta["beta"] = r.beta;
    g.meta["pendants_per_leaf"] = static_cast<double>(r.pendants_per_leaf);
    return g;
  }
  if (spec.family == "random") {
    RandomTreeOptions opt;
    opt.k = spec.k;
    opt.budget = spec.b;
    if (spec.shape == "any") opt.shape = TreeShape::Any;
    else if (spec.shape == "kstar") opt.shape = TreeShape::KStar;
    else if (spec.shape == "kcaterpillar") opt.shape = TreeShape::KCaterpillar;
    else throw Error(ErrorCode::BadInput, "unknown shape " + spec.shape);
    GeneratedInstance g{gen_random_tree(spec.n, opt, spec.seed), {}};
    g.meta["seed"] = static_cast<double>(spec.seed);
    return g;
  }
  throw Error(ErrorCode::BadInput, "unknown family " + spec.family);
}

}  // namespace firetree
