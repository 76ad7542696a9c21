#include "firetree/mincostflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>

#include "firetree/core.hpp"

namespace firetree {

std::string FlowNetwork::dump() const {
  std::ostringstream os;
  for (const Arc& a : arcs)
    os << "arc " << a.tail << ' ' << a.head << ' ' << a.capacity << ' '
       << a.cost << '\n';
  return os.str();
}

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

struct ResidualEdge {
  int to;
  long long cap;
  long long cost;
  int rev;       // index of the reverse edge in graph[to]
  int arc = -1;  // original arc index, -1 for reverse/auxiliary edges
};

struct ResidualGraph {
  std::vector<std::vector<ResidualEdge>> g;

  void add(int u, int v, long long cap, long long cost, int arc) {
    g[u].push_back({v, cap, cost, static_cast<int>(g[v].size()), arc});
    g[v].push_back({u, 0, -cost, static_cast<int>(g[u].size()) - 1, -1});
  }
};

}  // namespace

FlowSolution solve_min_cost_flow(const FlowNetwork& net) {
  const int n = net.node_count;
  if (static_cast<int>(net.supply.size()) != n)
    throw Error(ErrorCode::BadInput, "supply size mismatch");
  long long total_supply = 0;
  for (long long s : net.supply) total_supply += s;
  if (total_supply != 0)
    throw Error(ErrorCode::UnbalancedSupply, "supplies do not sum to zero");
  for (const auto& a : net.arcs) {
    if (a.tail < 0 || a.tail >= n || a.head < 0 || a.head >= n)
      throw Error(ErrorCode::BadInput, "arc endpoint out of range");
    if (a.tail == a.head) throw Error(ErrorCode::BadInput, "self-loop arc");
    if (a.capacity < 0) throw Error(ErrorCode::BadInput, "negative capacity");
  }

  const int source = n;
  const int sink = n + 1;
  ResidualGraph rg;
  rg.g.assign(n + 2, {});
  for (int i = 0; i < static_cast<int>(net.arcs.size()); ++i) {
    const auto& a = net.arcs[i];
    rg.add(a.tail, a.head, a.capacity, a.cost, i);
  }
  long long need = 0;
  for (int v = 0; v < n; ++v) {
    if (net.supply[v] > 0) {
      rg.add(source, v, net.supply[v], 0, -1);
      need += net.supply[v];
    } else if (net.supply[v] < 0) {
      rg.add(v, sink, -net.supply[v], 0, -1);
    }
  }

  const int nn = n + 2;
  // Initial potentials: Bellman-Ford over all residual arcs with every node
  // at distance 0, so negative costs anywhere are covered.
  std::vector<long long> pot(nn, 0);
  for (int round = 0; round < nn; ++round) {
    bool changed = false;
    for (int u = 0; u < nn; ++u)
      for (const auto& e : rg.g[u])
        if (e.cap > 0 && pot[u] + e.cost < pot[e.to]) {
          pot[e.to] = pot[u] + e.cost;
          changed = true;
        }
    if (!changed) break;
    if (round == nn - 1)
      throw Error(ErrorCode::BadInput, "negative cost cycle in network");
  }

  long long routed = 0;
  long long cost = 0;
  std::vector<long long> dist(nn);
  std::vector<int> prev_node(nn), prev_edge(nn);
  while (routed < need) {
    // Dijkstra with reduced costs.
    std::fill(dist.begin(), dist.end(), kInf);
    dist[source] = 0;
    using Item = std::pair<long long, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0, source});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (int i = 0; i < static_cast<int>(rg.g[u].size()); ++i) {
        const auto& e = rg.g[u][i];
        if (e.cap <= 0) continue;
        long long nd = d + e.cost + pot[u] - pot[e.to];
        if (nd < dist[e.to]) {
          dist[e.to] = nd;
          prev_node[e.to] = u;
          prev_edge[e.to] = i;
          pq.push({nd, e.to});
        }
      }
    }
    if (dist[sink] >= kInf) break;  // no augmenting path: infeasible
    for (int v = 0; v < nn; ++v)
      if (dist[v] < kInf) pot[v] += dist[v];

    long long push = need - routed;
    for (int v = sink; v != source; v = prev_node[v])
      push = std::min(push, rg.g[prev_node[v]][prev_edge[v]].cap);
    for (int v = sink; v != source; v = prev_node[v]) {
      auto& e = rg.g[prev_node[v]][prev_edge[v]];
      e.cap -= push;
      rg.g[v][e.rev].cap += push;
      cost += push * e.cost;
    }
    routed += push;
  }

  FlowSolution sol;
  sol.arc_flows.assign(net.arcs.size(), 0);
  for (int u = 0; u < nn; ++u)
    for (const auto& e : rg.g[u])
      if (e.arc >= 0)
        sol.arc_flows[e.arc] = net.arcs[e.arc].capacity - e.cap;
  sol.total_cost = cost;
  sol.feasible = (routed == need);
  return sol;
}

}  // namespace firetree
