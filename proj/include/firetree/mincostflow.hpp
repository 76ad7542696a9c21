#pragma once

#include <string>
#include <vector>

namespace firetree {

// Directed network with integer capacities, integer (possibly negative)
// arc costs and node supplies. Positive supply = source, negative = sink.
struct FlowNetwork {
  struct Arc {
    int tail = 0;
    int head = 0;
    long long capacity = 0;
    long long cost = 0;
  };
  int node_count = 0;
  std::vector<Arc> arcs;
  std::vector<long long> supply;  // size node_count

  // Line-oriented debug form: one "arc tail head cap cost" line per arc.
  std::string dump() const;
};

struct FlowSolution {
  std::vector<long long> arc_flows;  // parallel to FlowNetwork::arcs
  long long total_cost = 0;
  bool feasible = false;
};

// Successive shortest augmenting paths with node potentials; the first
// shortest-path pass tolerates negative arc costs (Bellman-Ford), so acyclic
// networks with negative costs are handled. Requires sum(supply) == 0.
FlowSolution solve_min_cost_flow(const FlowNetwork& net);

}  // namespace firetree
