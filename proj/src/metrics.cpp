#include "sector/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace sector {

namespace {

constexpr std::array<std::pair<MetricKind, std::string_view>, 8> kMetricNames{{
    {MetricKind::DP, "DP"},
    {MetricKind::EDP, "EDP"},
    {MetricKind::EEM_local, "EEM_local"},
    {MetricKind::LLM_local, "LLM_local"},
    {MetricKind::ExNT_local, "ExNT_local"},
    {MetricKind::EEM_global, "EEM_global"},
    {MetricKind::LLM_global, "LLM_global"},
    {MetricKind::ExNT_global, "ExNT_global"},
}};

// Fills SFR values for the current member order.
void fill_sfr(PrioritizedCS& pcs) {
  double fail_prefix = 1.0;
  for (auto& m : pcs.per_member) {
    m.sfr = m.pdr * fail_prefix;
    fail_prefix *= 1.0 - m.pdr;
  }
}

PrioritizedCS from_candidates(std::span<const Candidate> cs) {
  PrioritizedCS pcs;
  pcs.members.reserve(cs.size());
  pcs.per_member.reserve(cs.size());
  for (const Candidate& c : cs) {
    pcs.members.push_back(c.id);
    pcs.per_member.push_back({c.id, c.pdr, 0.0, 0.0});
  }
  return pcs;
}

void move_dest_first(std::vector<Candidate>& order, std::optional<NodeId> dest) {
  if (!dest) return;
  auto it = std::find_if(order.begin(), order.end(), [&](const Candidate& c) { return c.id == *dest; });
  if (it != order.end()) std::rotate(order.begin(), it, it + 1);
}

}  // namespace

bool maximizes(MetricKind kind) { return kind == MetricKind::DP || kind == MetricKind::EDP; }

bool is_global(MetricKind kind) {
  return kind == MetricKind::EEM_global || kind == MetricKind::LLM_global ||
         kind == MetricKind::ExNT_global;
}

std::string_view metric_name(MetricKind kind) {
  for (const auto& [k, name] : kMetricNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<MetricKind> parse_metric(std::string_view name) {
  for (const auto& [k, n] : kMetricNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::string_view coord_name(CoordScheme s) {
  switch (s) {
    case CoordScheme::SA: return "SA";
    case CoordScheme::CSA: return "CSA";
    case CoordScheme::FSA: return "FSA";
  }
  return "?";
}

std::optional<CoordScheme> parse_coord(std::string_view name) {
  if (name == "SA") return CoordScheme::SA;
  if (name == "CSA") return CoordScheme::CSA;
  if (name == "FSA") return CoordScheme::FSA;
  return std::nullopt;
}

void EnergyDelayParams::validate() const {
  if (!(p_listen >= 0.0 && p_coord >= 0.0 && tau_sifs >= 0.0 && tau_ack >= 0.0 && tau_sens >= 0.0)) {
    throw std::invalid_argument("energy/delay parameters must be non-negative");
  }
}

double dp(const Vec2& ref, const Vec2& dest, const Vec2& cand) {
  return distance(ref, dest) - distance(cand, dest);
}

double coord_delay(std::size_t cs_size, const EnergyDelayParams& p) {
  const double c = static_cast<double>(cs_size);
  switch (p.coord_scheme) {
    case CoordScheme::SA: return c * (p.tau_sifs + p.tau_ack);
    case CoordScheme::CSA: return p.tau_sifs + c * p.tau_ack;
    case CoordScheme::FSA: return p.tau_sifs + p.tau_ack + c * p.tau_sens;
  }
  return 0.0;
}

double energy_cost(double k, double rate, std::size_t cs_size, const EnergyDelayParams& params,
                   double coord_T, double p_tx, double packet_L) {
  const double t_s = packet_L / rate;
  const double listen = static_cast<double>(cs_size) * params.p_listen;
  return k * (t_s * (p_tx + listen) + params.p_coord * coord_T);
}

double delay_cost(double k, double rate, double coord_T, double packet_L) {
  return k * (packet_L / rate + coord_T);
}

HopCostModel HopCostModel::from(const LinkParams& link, const EnergyDelayParams& ed) {
  return HopCostModel{link.rate_R, link.packet_L, link.trx.p_tx, ed};
}

double HopCostModel::energy(double attempts, std::size_t cs_size) const {
  return energy_cost(attempts, rate_R, cs_size, ed, coord_delay(cs_size, ed), p_tx, packet_L);
}

double HopCostModel::delay(double attempts, std::size_t cs_size) const {
  return delay_cost(attempts, rate_R, coord_delay(cs_size, ed), packet_L);
}

double HopCostModel::attempt_cost(MetricKind kind, std::size_t cs_size) const {
  switch (kind) {
    case MetricKind::EEM_local:
    case MetricKind::EEM_global: return energy(1.0, cs_size);
    case MetricKind::LLM_local:
    case MetricKind::LLM_global: return delay(1.0, cs_size);
    default: return 1.0;
  }
}

double PrioritizedCS::per_bc() const {
  double prod = 1.0;
  for (const auto& m : per_member) prod *= 1.0 - m.pdr;
  return prod;
}

PrioritizedCS dp_prioritize(std::span<const Candidate> cs) {
  if (cs.empty()) throw EmptyCandidateSet();
  std::vector<Candidate> order(cs.begin(), cs.end());
  std::sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dp != b.dp) return a.dp > b.dp;
    return a.id < b.id;
  });
  PrioritizedCS pcs = from_candidates(order);
  fill_sfr(pcs);
  for (std::size_t k = 0; k < order.size(); ++k) pcs.per_member[k].score = order[k].dp;
  pcs.fitness = order.front().dp;
  return pcs;
}

PrioritizedCS edp_prioritize(std::span<const Candidate> cs) {
  if (cs.empty()) throw EmptyCandidateSet();
  std::vector<Candidate> order(cs.begin(), cs.end());
  // Swapping neighbours j,l changes sum(DP*SFR) by pdr_j pdr_l (DP_j - DP_l),
  // so descending DP is optimal; equal-DP members are ordered by reliability.
  std::sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dp != b.dp) return a.dp > b.dp;
    if (a.pdr != b.pdr) return a.pdr > b.pdr;
    return a.id < b.id;
  });
  PrioritizedCS pcs = from_candidates(order);
  fill_sfr(pcs);
  double total = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    pcs.per_member[k].score = order[k].dp * pcs.per_member[k].sfr;
    total += pcs.per_member[k].score;
  }
  pcs.fitness = total;
  return pcs;
}

PrioritizedCS prioritize(MetricKind kind, std::span<const Candidate> cs, const MetricContext& ctx) {
  if (cs.empty()) throw EmptyCandidateSet();
  std::vector<Candidate> order(cs.begin(), cs.end());
  const std::size_t size = order.size();
  const int K = ctx.max_retx_K;

  // Per-member score that drives the ordering (ascending for cost metrics).
  std::vector<std::pair<double, Candidate>> scored;
  scored.reserve(size);
  for (const Candidate& c : order) {
    double score = 0.0;
    switch (kind) {
      case MetricKind::DP:
      case MetricKind::EDP: score = c.dp; break;
      case MetricKind::EEM_local: score = ctx.cost.energy(exnt_unicast(1.0 - c.pdr, K), size); break;
      case MetricKind::LLM_local: score = ctx.cost.delay(exnt_unicast(1.0 - c.pdr, K), size); break;
      case MetricKind::ExNT_local: score = exnt_unicast(1.0 - c.pdr, K); break;
      default: score = c.downstream; break;
    }
    scored.emplace_back(score, c);
  }

  if (kind == MetricKind::DP || kind == MetricKind::EDP) {
    std::sort(scored.begin(), scored.end(), [kind](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      if (kind == MetricKind::EDP && a.second.pdr != b.second.pdr) return a.second.pdr > b.second.pdr;
      return a.second.id < b.second.id;
    });
  } else {
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second.id < b.second.id;
    });
  }
  for (std::size_t k = 0; k < size; ++k) order[k] = scored[k].second;
  move_dest_first(order, ctx.dest);

  PrioritizedCS pcs = from_candidates(order);
  fill_sfr(pcs);
  for (std::size_t k = 0; k < size; ++k) {
    const Candidate& c = order[k];
    auto& m = pcs.per_member[k];
    switch (kind) {
      case MetricKind::DP: m.score = c.dp; break;
      case MetricKind::EDP: m.score = c.dp * m.sfr; break;
      case MetricKind::EEM_local: m.score = ctx.cost.energy(exnt_unicast(1.0 - c.pdr, K), size); break;
      case MetricKind::LLM_local: m.score = ctx.cost.delay(exnt_unicast(1.0 - c.pdr, K), size); break;
      case MetricKind::ExNT_local: m.score = exnt_unicast(1.0 - c.pdr, K); break;
      default: m.score = c.downstream; break;
    }
  }
  if (kind == MetricKind::DP) {
    double best = order.front().dp;
    for (const Candidate& c : order) best = std::max(best, c.dp);
    pcs.fitness = best;
  } else if (is_global(kind)) {
    pcs.fitness = global_cs_fitness(kind, pcs, ctx);
  } else {
    pcs.fitness = local_fitness(kind, pcs, ctx);
  }
  return pcs;
}

double local_fitness(MetricKind kind, const PrioritizedCS& pcs, const MetricContext& ctx) {
  if (pcs.per_member.empty()) throw EmptyCandidateSet();
  const std::size_t size = pcs.per_member.size();
  switch (kind) {
    case MetricKind::DP: {
      double best = pcs.per_member.front().score;
      for (const auto& m : pcs.per_member) best = std::max(best, m.score);
      return best;
    }
    case MetricKind::EDP: {
      double total = 0.0;
      for (const auto& m : pcs.per_member) total += m.score;
      return total;
    }
    case MetricKind::EEM_local: return ctx.cost.energy(1.0 / pcs.pdr_bc(), size);
    case MetricKind::LLM_local: return ctx.cost.delay(1.0 / pcs.pdr_bc(), size);
    case MetricKind::ExNT_local: return 1.0 / pcs.pdr_bc();
    default: throw std::invalid_argument("local_fitness: global metric");
  }
}

double global_cs_fitness(MetricKind kind, const PrioritizedCS& pcs, const MetricContext& ctx) {
  if (pcs.per_member.empty()) throw EmptyCandidateSet();
  const double unit = ctx.cost.attempt_cost(kind, pcs.per_member.size());
  const double per_bc = pcs.per_bc();
  const int K = ctx.max_retx_K;

  double total = 0.0;
  double per_pow = 1.0;  // PER_bc^(k-1)
  for (int k = 1; k <= K; ++k) {
    for (const auto& m : pcs.per_member) {
      // The destination is reached whenever it decodes (it never defers).
      const double forward = (ctx.dest && m.id == *ctx.dest) ? m.pdr : m.sfr;
      total += (k * unit + m.score) * per_pow * forward;
    }
    per_pow *= per_bc;
  }
  return total + K * unit * per_pow;
}

bool better(MetricKind kind, const PrioritizedCS& a, const PrioritizedCS& b) {
  if (a.fitness != b.fitness) return maximizes(kind) ? a.fitness > b.fitness : a.fitness < b.fitness;
  if (a.sector.theta != b.sector.theta) return a.sector.theta < b.sector.theta;
  return a.sector.psi < b.sector.psi;
}

std::optional<PrioritizedCS> select_best(MetricKind kind, const NetworkTopology& topo, NodeId i,
                                         const NodeFamilies& fam, const CandidateBuilder& build,
                                         const MetricContext& ctx) {
  std::optional<PrioritizedCS> best;
  std::vector<Candidate> cands;
  for (std::size_t p = 0; p < fam.psis.size(); ++p) {
    for (const CandidateSetEntry& entry : fam.by_psi[p]) {
      cands.clear();
      build(entry, cands);
      if (cands.empty()) continue;
      PrioritizedCS pcs = prioritize(kind, cands, ctx);
      if (!std::isfinite(pcs.fitness)) continue;
      pcs.sector = Sector{topo.pos(i), fam.psis[p], entry.theta};
      if (!best || better(kind, pcs, *best)) best = std::move(pcs);
    }
  }
  return best;
}

GlobalFitnessTable::GlobalFitnessTable(const LinkModel& link, const NetworkTopology& topo,
                                       MetricKind kind, const EnergyDelayParams& ed)
    : kind_(kind), topo_(&topo) {
  if (!is_global(kind)) throw std::invalid_argument("GlobalFitnessTable needs a global metric");
  const std::size_t n = topo.size();
  const double inf = std::numeric_limits<double>::infinity();
  families_.resize(n);
  fitness_.assign(n, inf);
  rank_.assign(n, kUnranked);
  selection_.assign(n, std::nullopt);

  std::vector<std::vector<NodeId>> watchers(n);  // nodes whose search space contains x
  for (NodeId i = 0; i < n; ++i) {
    if (i == topo.dest) continue;
    families_[i] = node_families(link, topo, i, SearchMode::Global);
    for (NodeId x : families_[i].search_space) watchers[x].push_back(i);
  }

  const MetricContext ctx{HopCostModel::from(link.params(), ed), link.params().max_retx_K, topo.dest};
  std::vector<double> tentative(n, inf);
  std::vector<std::optional<PrioritizedCS>> pending(n);

  fitness_[topo.dest] = 0.0;
  rank_[topo.dest] = 0;
  std::size_t next_rank = 1;
  NodeId settled = topo.dest;

  for (;;) {
    for (NodeId i : watchers[settled]) {
      if (rank_[i] != kUnranked) continue;
      pending[i] = select_best(
          kind_, topo, i, families_[i],
          [this, i](const CandidateSetEntry& e, std::vector<Candidate>& out) { build_candidates(i, e, out); },
          ctx);
      tentative[i] = pending[i] ? pending[i]->fitness : inf;
    }
    NodeId pick = n;
    for (NodeId i = 0; i < n; ++i) {
      if (rank_[i] != kUnranked || !std::isfinite(tentative[i])) continue;
      if (pick == n || tentative[i] < tentative[pick]) pick = i;
    }
    if (pick == n) break;
    fitness_[pick] = tentative[pick];
    rank_[pick] = next_rank++;
    selection_[pick] = std::move(pending[pick]);
    settled = pick;
  }
}

void GlobalFitnessTable::build_candidates(NodeId i, const CandidateSetEntry& entry,
                                          std::vector<Candidate>& out) const {
  const Vec2& here = topo_->pos(i);
  const Vec2& dest = topo_->pos(topo_->dest);
  for (const CoveredMember& m : entry.members) {
    if (rank_[m.id] == kUnranked || (rank_[i] != kUnranked && rank_[m.id] >= rank_[i])) continue;
    out.push_back({m.id, m.pdr, dp(here, dest, topo_->pos(m.id)), fitness_[m.id]});
  }
}

}  // namespace sector
