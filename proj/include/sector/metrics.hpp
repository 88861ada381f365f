#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "sector/link.hpp"
#include "sector/topology.hpp"

namespace sector {

enum class MetricKind {
  DP,
  EDP,
  EEM_local,
  LLM_local,
  ExNT_local,
  EEM_global,
  LLM_global,
  ExNT_global,
};

/// DP and EDP pick the largest fitness; every other metric the smallest.
bool maximizes(MetricKind kind);
bool is_global(MetricKind kind);
std::string_view metric_name(MetricKind kind);
std::optional<MetricKind> parse_metric(std::string_view name);

/// Candidate coordination (acknowledgement) schemes.
enum class CoordScheme { SA, CSA, FSA };

std::string_view coord_name(CoordScheme s);
std::optional<CoordScheme> parse_coord(std::string_view name);

struct EnergyDelayParams {
  double p_listen = 0.01;   // W, per listening candidate
  double p_coord = 0.05;    // W, during coordination
  double tau_sifs = 1e-3;   // s
  double tau_ack = 1e-3;    // s
  double tau_sens = 1e-4;   // s, acoustic channel sensing
  CoordScheme coord_scheme = CoordScheme::FSA;

  void validate() const;
};

class EmptyCandidateSet : public std::invalid_argument {
 public:
  EmptyCandidateSet() : std::invalid_argument("empty candidate set") {}
};

/// Distance progress of candidate `cand` measured from reference `ref`.
double dp(const Vec2& ref, const Vec2& dest, const Vec2& cand);

/// Coordination delay T_c for a candidate set of `cs_size` members.
double coord_delay(std::size_t cs_size, const EnergyDelayParams& params);

/// Energy of `k` transmission attempts (k may be an expectation).
double energy_cost(double k, double rate, std::size_t cs_size, const EnergyDelayParams& params,
                   double coord_T, double p_tx, double packet_L);

/// Delay of `k` transmission attempts.
double delay_cost(double k, double rate, double coord_T, double packet_L);

/// Binds the per-hop cost formulas to one parameter set.
struct HopCostModel {
  double rate_R = 1e9;
  double packet_L = 992.0;
  double p_tx = 0.1;
  EnergyDelayParams ed;

  static HopCostModel from(const LinkParams& link, const EnergyDelayParams& ed);

  double energy(double attempts, std::size_t cs_size) const;
  double delay(double attempts, std::size_t cs_size) const;
  /// Cost of a single attempt under `kind` (energy, delay or one transmission).
  double attempt_cost(MetricKind kind, std::size_t cs_size) const;
};

/// A covered node as seen by the metric layer.
struct Candidate {
  NodeId id = 0;
  double pdr = 0.0;
  double dp = 0.0;          // progress from the current forwarder
  double downstream = 0.0;  // global fitness of the candidate (global metrics)
};

struct MemberScore {
  NodeId id = 0;
  double pdr = 0.0;
  double sfr = 0.0;
  double score = 0.0;
};

/// Candidate set in forwarding order together with the sector that formed it.
struct PrioritizedCS {
  std::vector<NodeId> members;
  Sector sector;
  double fitness = 0.0;
  std::vector<MemberScore> per_member;

  double per_bc() const;
  double pdr_bc() const { return 1.0 - per_bc(); }
};

struct MetricContext {
  HopCostModel cost;
  int max_retx_K = 3;
  std::optional<NodeId> dest;  // placed first whenever it is a member
};

/// Descending DP; fitness is the largest DP.
PrioritizedCS dp_prioritize(std::span<const Candidate> cs);

/// Order maximising expected progress sum(DP * SFR); fitness is that sum.
PrioritizedCS edp_prioritize(std::span<const Candidate> cs);

/// Orders `cs` by the rule of `kind`, fills SFRs and per-member scores and
/// evaluates the fitness. Global kinds read `Candidate::downstream`.
PrioritizedCS prioritize(MetricKind kind, std::span<const Candidate> cs, const MetricContext& ctx);

/// Fitness of an already ordered set under a local metric.
double local_fitness(MetricKind kind, const PrioritizedCS& pcs, const MetricContext& ctx);

/// Expected end-to-end cost through an ordered set whose member scores hold
/// their own global fitness:
///   F = sum_j sum_k (cost(k) + F_j) PER_bc^(k-1) SFR_j + cost(K) PER_bc^K
double global_cs_fitness(MetricKind kind, const PrioritizedCS& pcs, const MetricContext& ctx);

/// True when `a` should be preferred to `b`: better fitness, then narrower
/// divergence, then smaller pointing angle.
bool better(MetricKind kind, const PrioritizedCS& a, const PrioritizedCS& b);

using CandidateBuilder =
    std::function<void(const CandidateSetEntry& entry, std::vector<Candidate>& out)>;

/// Scans every (pointing angle, candidate set) pair of node `i` and returns
/// the best prioritized set, or nothing when no non-empty set exists.
std::optional<PrioritizedCS> select_best(MetricKind kind, const NetworkTopology& topo, NodeId i,
                                         const NodeFamilies& fam, const CandidateBuilder& build,
                                         const MetricContext& ctx);

/// Global fitness of every node, evaluated in label-setting order: a node's
/// candidates are the nodes whose fitness was fixed before its own, so the
/// recursion is acyclic. The destination has fitness 0; nodes that cannot
/// reach it have +inf.
class GlobalFitnessTable {
 public:
  static constexpr std::size_t kUnranked = std::numeric_limits<std::size_t>::max();

  GlobalFitnessTable(const LinkModel& link, const NetworkTopology& topo, MetricKind kind,
                     const EnergyDelayParams& ed);

  MetricKind kind() const { return kind_; }
  double fitness(NodeId i) const { return fitness_[i]; }
  /// Position in the settle order (destination is 0), kUnranked if unreachable.
  std::size_t rank(NodeId i) const { return rank_[i]; }
  const std::optional<PrioritizedCS>& selection(NodeId i) const { return selection_[i]; }
  const NodeFamilies& families(NodeId i) const { return families_[i]; }

  /// Candidates of node i drawn from `entry`: members settled before i.
  void build_candidates(NodeId i, const CandidateSetEntry& entry, std::vector<Candidate>& out) const;

 private:
  MetricKind kind_;
  const NetworkTopology* topo_;
  std::vector<NodeFamilies> families_;
  std::vector<double> fitness_;
  std::vector<std::size_t> rank_;
  std::vector<std::optional<PrioritizedCS>> selection_;
};

}  // namespace sector
