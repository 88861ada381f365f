#include "sector/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace sector::tur {

const Edge* Graph::edge(NodeId from, NodeId to) const {
  for (const Edge& e : adj[from]) {
    if (e.to == to) return &e;
  }
  return nullptr;
}

Graph tur_graph(const NetworkTopology& topo, const LinkModel& link) {
  Graph g;
  g.adj.resize(topo.size());
  const double theta = link.trx().theta_min;
  const double reach = link.d_max();
  for (NodeId i = 0; i < topo.size(); ++i) {
    for (NodeId j = 0; j < topo.size(); ++j) {
      if (i == j) continue;
      const double r = distance(topo.pos(i), topo.pos(j));
      if (r == 0.0 || r > reach) continue;
      const LinkGeometry geom{r, 0.0};
      const double b = link.ber_at(theta, geom);
      const double per = link.per_at(theta, geom);
      g.adj[i].push_back({j, r, b, per, 1.0 - per});
    }
  }
  return g;
}

std::optional<Path> dijkstra(const Graph& graph, NodeId s, NodeId d) {
  const std::size_t n = graph.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<NodeId> prev(n, n);
  std::vector<bool> done(n, false);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[s] = 0.0;
  heap.push({0.0, s});
  while (!heap.empty()) {
    const auto [du, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = true;
    if (u == d) break;
    for (const Edge& e : graph.adj[u]) {
      const double alt = du + e.weight;
      if (alt < dist[e.to] || (alt == dist[e.to] && !done[e.to] && u < prev[e.to])) {
        dist[e.to] = alt;
        prev[e.to] = u;
        heap.push({alt, e.to});
      }
    }
  }
  if (!std::isfinite(dist[d])) return std::nullopt;
  Path p;
  p.total_weight = dist[d];
  for (NodeId v = d; v != s; v = prev[v]) p.nodes.push_back(v);
  p.nodes.push_back(s);
  std::reverse(p.nodes.begin(), p.nodes.end());
  return p;
}

E2EMetrics tur_e2e(const Path& path, const Graph& graph, const HopCostModel& cost) {
  E2EMetrics e;
  for (std::size_t k = 0; k + 1 < path.nodes.size(); ++k) {
    const Edge* edge = graph.edge(path.nodes[k], path.nodes[k + 1]);
    if (!edge) throw std::invalid_argument("tur_e2e: path uses a missing edge");
    const double exnt = exnt_unicast_norm(edge->pdr);
    e.pdr *= edge->pdr;
    e.exnt += exnt;
    e.distance += edge->weight;
    e.energy += cost.energy(exnt, 1);
    e.delay += cost.delay(exnt, 1);
  }
  e.hop_count = path.nodes.empty() ? 0 : path.nodes.size() - 1;
  return e;
}

RouteResult route(const NetworkTopology& topo, const RoutingConfig& cfg) {
  const LinkModel link(cfg.link);
  const Graph g = tur_graph(topo, link);
  const HopCostModel cost = HopCostModel::from(cfg.link, cfg.ed);
  RouteResult res;
  const auto path = dijkstra(g, topo.source, topo.dest);
  if (!path) {
    res.failure = FailureReason::NoCandidate;
    return res;
  }
  for (std::size_t k = 0; k + 1 < path->nodes.size(); ++k) {
    const NodeId i = path->nodes[k];
    const NodeId j = path->nodes[k + 1];
    const Edge* edge = g.edge(i, j);
    HopRecord h;
    h.forwarder = i;
    h.chosen_next = j;
    h.sector = Sector{topo.pos(i), bearing(topo.pos(i), topo.pos(j)), link.trx().theta_min};
    h.prioritized_cs.members = {j};
    h.prioritized_cs.sector = h.sector;
    h.prioritized_cs.per_member = {{j, edge->pdr, edge->pdr, edge->weight}};
    h.prioritized_cs.fitness = edge->weight;
    h.metrics.pdr_bc = edge->pdr;
    h.metrics.exnt_bc = exnt_unicast_norm(edge->pdr);
    h.metrics.distance_m = edge->weight;
    h.metrics.energy_j = cost.energy(h.metrics.exnt_bc, 1);
    h.metrics.delay_s = cost.delay(h.metrics.exnt_bc, 1);
    res.hops.push_back(std::move(h));
  }
  res.reached = true;
  res.e2e = tur_e2e(*path, g, cost);
  return res;
}

}  // namespace sector::tur
