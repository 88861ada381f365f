#pragma once

#include <optional>
#include <vector>

#include "sector/metrics.hpp"
#include "sector/protocol.hpp"
#include "sector/topology.hpp"

namespace sector::tur {

/// Unicast link of the baseline: narrowest beam, aimed straight at the peer.
struct Edge {
  NodeId to = 0;
  double weight = 0.0;  // Euclidean length, m
  double ber = 0.0;
  double per = 0.0;
  double pdr = 1.0;
};

struct Graph {
  std::vector<std::vector<Edge>> adj;  // adj[i] sorted by target id

  std::size_t size() const { return adj.size(); }
  const Edge* edge(NodeId from, NodeId to) const;
};

/// Edge i -> j whenever j is within the theta_min on-axis range of i.
Graph tur_graph(const NetworkTopology& topo, const LinkModel& link);

struct Path {
  std::vector<NodeId> nodes;  // source first, destination last
  double total_weight = 0.0;
};

/// Minimum-weight path; nullopt when `d` is unreachable. Equal-weight ties
/// resolve towards the smaller predecessor id.
std::optional<Path> dijkstra(const Graph& graph, NodeId s, NodeId d);

/// End-to-end metrics of a unicast path. Each hop pays one acknowledgement
/// exchange with a single listener.
E2EMetrics tur_e2e(const Path& path, const Graph& graph, const HopCostModel& cost);

/// Baseline route in the same record format as SectOR routes. The hop sector
/// is the theta_min beam aimed at the next hop.
RouteResult route(const NetworkTopology& topo, const RoutingConfig& cfg);

}  // namespace sector::tur
