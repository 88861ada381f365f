#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sector/metrics.hpp"
#include "sector/topology.hpp"

namespace sector {

struct RoutingConfig {
  LinkParams link;
  EnergyDelayParams ed;
};

/// Raised when a forwarder has nothing to broadcast to.
class NoCandidate : public std::runtime_error {
 public:
  explicit NoCandidate(NodeId node)
      : std::runtime_error("node " + std::to_string(node) + " has no feasible candidate set"),
        node_(node) {}
  NodeId node() const { return node_; }

 private:
  NodeId node_;
};

struct HopMetrics {
  double pdr_bc = 0.0;
  double exnt_bc = 0.0;     // 1 / pdr_bc
  double distance_m = 0.0;  // forwarder -> chosen next hop
  double energy_j = 0.0;
  double delay_s = 0.0;
};

struct HopRecord {
  NodeId forwarder = 0;
  Sector sector;
  PrioritizedCS prioritized_cs;
  NodeId chosen_next = 0;
  HopMetrics metrics;
  int attempts = 1;  // transmissions actually used (stochastic mode)
};

struct E2EMetrics {
  double pdr = 1.0;
  double exnt = 0.0;
  double distance = 0.0;
  double energy = 0.0;
  double delay = 0.0;
  std::size_t hop_count = 0;
};

enum class FailureReason { None, NoCandidate, Dropped, Loop };
std::string_view failure_name(FailureReason r);

struct RouteResult {
  std::vector<HopRecord> hops;
  bool reached = false;
  FailureReason failure = FailureReason::None;
  E2EMetrics e2e;
};

enum class RouteMode { Expected, Stochastic };

/// Hop-wise aggregation: product of broadcast PDRs, sums of everything else.
E2EMetrics aggregate_e2e(const std::vector<HopRecord>& hops);

/// SectOR routing engine for one topology and one metric. Per-node selections
/// are cached; they only depend on node positions.
class SectorRouter {
 public:
  SectorRouter(const NetworkTopology& topo, MetricKind kind, RoutingConfig cfg);

  const LinkModel& link() const { return link_; }
  MetricKind kind() const { return kind_; }
  const NetworkTopology& topology() const { return *topo_; }

  /// Global fitness table; only built for global metrics.
  const GlobalFitnessTable* global_table() const { return global_.get(); }

  /// Best prioritized candidate set of node i. Throws NoCandidate.
  const PrioritizedCS& filter_select_prioritize(NodeId i);

  /// Forwards from source to destination. Routing failures are reported in
  /// the result, never thrown.
  RouteResult route(RouteMode mode = RouteMode::Expected, std::uint64_t seed = 0);

  MetricContext context() const;

 private:
  HopRecord make_hop(NodeId i, const PrioritizedCS& pcs, NodeId next) const;

  const NetworkTopology* topo_;
  MetricKind kind_;
  RoutingConfig cfg_;
  LinkModel link_;
  std::unique_ptr<GlobalFitnessTable> global_;
  std::vector<std::optional<PrioritizedCS>> cache_;
  std::vector<bool> cached_;
};

/// Convenience wrapper around SectorRouter::filter_select_prioritize.
PrioritizedCS filter_select_prioritize(const NetworkTopology& topo, NodeId i, MetricKind kind,
                                       const RoutingConfig& cfg);

RouteResult route(const NetworkTopology& topo, MetricKind kind, const RoutingConfig& cfg,
                  RouteMode mode = RouteMode::Expected, std::uint64_t seed = 0);

}  // namespace sector
