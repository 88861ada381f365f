#include "sector/protocol.hpp"

#include <cmath>

#include "sector/rng.hpp"

namespace sector {

std::string_view failure_name(FailureReason r) {
  switch (r) {
    case FailureReason::None: return "none";
    case FailureReason::NoCandidate: return "no_candidate";
    case FailureReason::Dropped: return "dropped";
    case FailureReason::Loop: return "loop";
  }
  return "?";
}

E2EMetrics aggregate_e2e(const std::vector<HopRecord>& hops) {
  E2EMetrics e;
  for (const HopRecord& h : hops) {
    e.pdr *= h.metrics.pdr_bc;
    e.exnt += h.metrics.exnt_bc;
    e.distance += h.metrics.distance_m;
    e.energy += h.metrics.energy_j;
    e.delay += h.metrics.delay_s;
  }
  e.hop_count = hops.size();
  return e;
}

SectorRouter::SectorRouter(const NetworkTopology& topo, MetricKind kind, RoutingConfig cfg)
    : topo_(&topo), kind_(kind), cfg_(std::move(cfg)), link_(cfg_.link) {
  topo.validate();
  cfg_.ed.validate();
  cache_.resize(topo.size());
  cached_.assign(topo.size(), false);
  if (is_global(kind_)) global_ = std::make_unique<GlobalFitnessTable>(link_, topo, kind_, cfg_.ed);
}

MetricContext SectorRouter::context() const {
  return MetricContext{HopCostModel::from(cfg_.link, cfg_.ed), cfg_.link.max_retx_K, topo_->dest};
}

const PrioritizedCS& SectorRouter::filter_select_prioritize(NodeId i) {
  if (i == topo_->dest) throw std::invalid_argument("the destination does not forward");
  if (!cached_[i]) {
    if (global_) {
      cache_[i] = global_->selection(i);
    } else {
      const NodeFamilies fam = node_families(link_, *topo_, i, SearchMode::Local);
      const Vec2 here = topo_->pos(i);
      const Vec2 dest = topo_->pos(topo_->dest);
      cache_[i] = select_best(
          kind_, *topo_, i, fam,
          [&](const CandidateSetEntry& e, std::vector<Candidate>& out) {
            for (const CoveredMember& m : e.members) {
              out.push_back({m.id, m.pdr, dp(here, dest, topo_->pos(m.id)), 0.0});
            }
          },
          context());
    }
    cached_[i] = true;
  }
  if (!cache_[i]) throw NoCandidate(i);
  return *cache_[i];
}

HopRecord SectorRouter::make_hop(NodeId i, const PrioritizedCS& pcs, NodeId next) const {
  HopRecord h;
  h.forwarder = i;
  h.sector = pcs.sector;
  h.prioritized_cs = pcs;
  h.chosen_next = next;
  const HopCostModel cost = HopCostModel::from(cfg_.link, cfg_.ed);
  const std::size_t size = pcs.members.size();
  h.metrics.pdr_bc = pcs.pdr_bc();
  h.metrics.exnt_bc = 1.0 / h.metrics.pdr_bc;
  h.metrics.distance_m = distance(topo_->pos(i), topo_->pos(next));
  h.metrics.energy_j = cost.energy(h.metrics.exnt_bc, size);
  h.metrics.delay_s = cost.delay(h.metrics.exnt_bc, size);
  return h;
}

RouteResult SectorRouter::route(RouteMode mode, std::uint64_t seed) {
  RouteResult res;
  SplitMix64 rng(seed);
  std::vector<bool> visited(topo_->size(), false);
  NodeId current = topo_->source;
  const int K = cfg_.link.max_retx_K;

  while (current != topo_->dest) {
    if (visited[current] || res.hops.size() >= topo_->size()) {
      res.failure = FailureReason::Loop;
      break;
    }
    visited[current] = true;

    const PrioritizedCS* pcs = nullptr;
    try {
      pcs = &filter_select_prioritize(current);
    } catch (const NoCandidate&) {
      res.failure = FailureReason::NoCandidate;
      break;
    }

    NodeId next = pcs->members.front();
    int attempts = 1;
    if (mode == RouteMode::Stochastic) {
      bool delivered = false;
      for (attempts = 1; attempts <= K && !delivered; ++attempts) {
        // Every member draws independently; the first receiver in priority
        // order takes over.
        for (const MemberScore& m : pcs->per_member) {
          const bool rx = rng.uniform01() < m.pdr;
          if (rx && !delivered) {
            next = m.id;
            delivered = true;
          }
        }
        if (delivered) break;
      }
      if (!delivered) {
        res.failure = FailureReason::Dropped;
        break;
      }
    }
    HopRecord h = make_hop(current, *pcs, next);
    h.attempts = attempts;
    res.hops.push_back(std::move(h));
    current = next;
  }

  res.reached = current == topo_->dest && res.failure == FailureReason::None;
  if (res.reached) {
    res.e2e = aggregate_e2e(res.hops);
  } else {
    res.e2e = E2EMetrics{};
    res.e2e.hop_count = res.hops.size();
  }
  return res;
}

PrioritizedCS filter_select_prioritize(const NetworkTopology& topo, NodeId i, MetricKind kind,
                                       const RoutingConfig& cfg) {
  SectorRouter router(topo, kind, cfg);
  return router.filter_select_prioritize(i);
}

RouteResult route(const NetworkTopology& topo, MetricKind kind, const RoutingConfig& cfg,
                  RouteMode mode, std::uint64_t seed) {
  SectorRouter router(topo, kind, cfg);
  return router.route(mode, seed);
}

}  // namespace sector
