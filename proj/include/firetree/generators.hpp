#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "firetree/core.hpp"

namespace firetree {

// Complete tree of height h where every non-leaf vertex has exactly d
// children; the target set is the leaf set. root_label picks the id the
// root gets (the labels 0 and root_label are swapped).
TreeInstance gen_complete_tree(int h, int d, Vertex root_label = 0,
                               Weight budget = 1);

struct GreedyPathologyLayout {
  Vertex ignition = -1;   // s
  Vertex core_root = -1;  // r, root of the complete subtree
  std::vector<Vertex> spur_tips;  // v_1 .. v_{h-1}
  std::vector<Vertex> pendants;   // the b+2 pendant leaves per spur tip
  std::vector<Vertex> core;       // the complete subtree's vertices
};

// The family on which the degree-greedy heuristic has no approximation
// guarantee: a complete (b+1)-ary tree next to increasingly long decoy
// paths ending in high-degree spur tips.
TreeInstance gen_greedy_pathology(int h, Weight b,
                                  GreedyPathologyLayout* layout = nullptr);

// Budget-lifting gadget: embeds `inner` (max degree <= b+2, targets =
// leaves) into a tree of max degree <= b+3 such that the new instance with
// budget b+1 saves all targets iff `inner` does with budget b.
TreeInstance gen_npc_reduction(const TreeInstance& inner, Weight b);

struct MaxsaveReduction {
  TreeInstance instance;
  long long threshold = 0;  // saving >= threshold targets <=> inner saves all
  long long copy_size = 0;  // vertices per attached complete tree
  int copy_height = 0;
};

// Attaches b+2 large complete trees to every leaf of `inner` so that losing
// any leaf costs at least one whole copy; targets become all vertices.
MaxsaveReduction gen_maxsave_reduction(const TreeInstance& inner, Weight b);

struct MinsaveReduction {
  TreeInstance instance;
  double beta = 0;
  long long pendants_per_leaf = 0;
};

// Pendant-blowup gadget behind the minimization inapproximability bound:
// floor(n1^beta + b) pendants per leaf with beta = 4/epsilon - 3.
MinsaveReduction gen_minsave_reduction(const TreeInstance& inner, double epsilon);

enum class TreeShape { Any, KStar, KCaterpillar };

struct RandomTreeOptions {
  TreeShape shape = TreeShape::Any;
  int k = 2;  // max leg length for the shaped families
  enum class Targets { Leaves, RandomSubset, All } targets = Targets::Leaves;
  bool random_root = false;  // default: the structural root/center
  bool random_weights = false;
  Weight max_weight = 5;
  Weight budget = 1;
};

// Seed-deterministic random tree of the requested shape.
TreeInstance gen_random_tree(int n, const RandomTreeOptions& opt,
                             std::uint64_t seed);

// All non-isomorphic rooted trees on n vertices as parent arrays (vertex 0
// is the root, parent[0] == -1, vertices in preorder).
std::vector<std::vector<Vertex>> enumerate_rooted_trees(int n);

// CLI-facing family dispatch.
struct GenSpec {
  std::string family;  // complete | greedy-pathology | npc-reduction |
                       // maxsave-reduction | minsave-reduction | random
  int h = 0;
  int d = 0;
  Weight b = 1;
  int k = 2;
  int n = 0;
  double epsilon = 0.5;
  std::uint64_t seed = 0;
  std::string shape = "any";           // for family=random
  const TreeInstance* inner = nullptr;  // for the reduction families
};

struct GeneratedInstance {
  TreeInstance instance;
  std::map<std::string, double> meta;
};

GeneratedInstance generate(const GenSpec& spec);

}  // namespace firetree
