#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sector/metrics.hpp"
#include "sector/rng.hpp"

using namespace sector;

namespace {

MetricContext default_ctx(std::optional<NodeId> dest = std::nullopt) {
  return {HopCostModel::from(LinkParams{}, EnergyDelayParams{}), 3, dest};
}

NetworkTopology make(std::vector<Vec2> pts, NodeId s = 0, NodeId d = 1) {
  NetworkTopology t;
  for (std::size_t k = 0; k < pts.size(); ++k) t.nodes.push_back({k, pts[k]});
  t.source = s;
  t.dest = d;
  return t;
}

}  // namespace

TEST_CASE("metric names round trip") {
  for (auto k : {MetricKind::DP, MetricKind::EDP, MetricKind::EEM_local, MetricKind::LLM_local,
                 MetricKind::ExNT_local, MetricKind::EEM_global, MetricKind::LLM_global,
                 MetricKind::ExNT_global}) {
    CHECK(parse_metric(metric_name(k)) == k);
  }
  CHECK_FALSE(parse_metric("nope"));
  CHECK(parse_coord("CSA") == CoordScheme::CSA);
  CHECK_FALSE(parse_coord("csa"));
  CHECK(maximizes(MetricKind::EDP));
  CHECK_FALSE(maximizes(MetricKind::ExNT_local));
  CHECK(is_global(MetricKind::LLM_global));
}

TEST_CASE("distance progress") {
  CHECK(dp({0, 0}, {3, 4}, {0, 0}) == 0.0);
  CHECK(dp({0, 0}, {3, 4}, {3, 4}) == 5.0);
  CHECK(dp({0, 0}, {100, 100}, {50, 50}) == doctest::Approx(70.7107).epsilon(1e-6));
  CHECK(dp({0, 0}, {10, 0}, {-1, 0}) == -1.0);
}

TEST_CASE("coordination delay") {
  EnergyDelayParams p;
  p.coord_scheme = CoordScheme::FSA;
  CHECK(coord_delay(1, p) == doctest::Approx(p.tau_sifs + p.tau_ack + p.tau_sens));
  p.coord_scheme = CoordScheme::SA;
  const double sa1 = coord_delay(1, p);
  CHECK(coord_delay(4, p) == doctest::Approx(4 * (p.tau_sifs + p.tau_ack)));
  p.coord_scheme = CoordScheme::CSA;
  CHECK(coord_delay(1, p) == doctest::Approx(sa1));
  CHECK(coord_delay(4, p) == doctest::Approx(p.tau_sifs + 4 * p.tau_ack));
  EnergyDelayParams sa = p, fsa = p;
  sa.coord_scheme = CoordScheme::SA;
  fsa.coord_scheme = CoordScheme::FSA;
  // One listener: FSA pays the sensing slot on top of SA.
  CHECK(coord_delay(1, fsa) == doctest::Approx(coord_delay(1, sa) + p.tau_sens));
  for (std::size_t c = 2; c < 10; ++c) CHECK(coord_delay(c, fsa) <= coord_delay(c, sa));
}

TEST_CASE("energy and delay costs") {
  EnergyDelayParams p;
  CHECK(energy_cost(0, 1e9, 2, p, 1e-3, 0.1, 992) == 0.0);
  const double e1 = energy_cost(1, 1e9, 2, p, 1e-3, 0.1, 992);
  CHECK(e1 == doctest::Approx(9.92e-7 * 0.12 + 5e-5).epsilon(1e-14));
  CHECK(e1 == doctest::Approx(5.011904e-5).epsilon(1e-12));
  CHECK(energy_cost(3.5, 1e9, 2, p, 1e-3, 0.1, 992) == doctest::Approx(3.5 * e1));
  CHECK(delay_cost(2, 1e9, 1e-3, 992) == doctest::Approx(2 * (9.92e-7 + 1e-3)));

  const HopCostModel m = HopCostModel::from(LinkParams{}, p);
  CHECK(m.attempt_cost(MetricKind::ExNT_global, 4) == 1.0);
  CHECK(m.attempt_cost(MetricKind::EEM_global, 4) == doctest::Approx(m.energy(1, 4)));
  CHECK(m.attempt_cost(MetricKind::LLM_local, 2) == doctest::Approx(m.delay(1, 2)));
}

TEST_CASE("DP prioritization") {
  std::vector<Candidate> cs{{5, 0.9, 1.0, 0}, {6, 0.95, 3.0, 0}, {7, 0.99, 2.0, 0}};
  const auto p = dp_prioritize(cs);
  CHECK(p.members == std::vector<NodeId>{6, 7, 5});
  CHECK(p.fitness == 3.0);
  std::reverse(cs.begin(), cs.end());
  CHECK(dp_prioritize(cs).members == p.members);
  CHECK_THROWS_AS(dp_prioritize(std::vector<Candidate>{}), EmptyCandidateSet);
}

TEST_CASE("EDP prioritization") {
  SUBCASE("single candidate") {
    const auto p = edp_prioritize(std::vector<Candidate>{{3, 0.9, 2.0, 0}});
    CHECK(p.fitness == doctest::Approx(1.8));
  }
  SUBCASE("equal progress prefers the more reliable node") {
    const auto p = edp_prioritize(std::vector<Candidate>{{3, 0.9, 2.0, 0}, {4, 0.95, 2.0, 0}});
    CHECK(p.members.front() == 4);
  }
  SUBCASE("matches every permutation on random sets") {
    SplitMix64 rng(3);
    for (int t = 0; t < 200; ++t) {
      std::vector<Candidate> cs;
      const int n = 1 + t % 5;
      for (int k = 0; k < n; ++k) cs.push_back({NodeId(k), 0.05 + 0.95 * rng.uniform01(), 3 * rng.uniform01(), 0});
      const auto p = edp_prioritize(cs);
      CHECK(p.fitness == doctest::Approx(oracle::best_permutation_progress(cs)).epsilon(1e-13));
      std::vector<Candidate> ordered;
      for (NodeId id : p.members) ordered.push_back(cs[id]);
      CHECK(p.fitness == doctest::Approx(oracle::expected_progress(ordered)).epsilon(1e-13));
    }
  }
  SUBCASE("input order does not matter") {
    std::vector<Candidate> cs{{1, 0.5, 1.0, 0}, {2, 0.7, 1.0, 0}, {3, 0.7, 1.0, 0}};
    const auto a = edp_prioritize(cs);
    std::reverse(cs.begin(), cs.end());
    CHECK(edp_prioritize(cs).members == a.members);
    CHECK(a.members == std::vector<NodeId>{2, 3, 1});
  }
}

TEST_CASE("local cost metrics") {
  const auto ctx = default_ctx();
  SUBCASE("singleton") {
    const std::vector<Candidate> cs{{2, 0.8, 1.0, 0}};
    CHECK(prioritize(MetricKind::EEM_local, cs, ctx).fitness == doctest::Approx(ctx.cost.energy(1 / 0.8, 1)));
    CHECK(prioritize(MetricKind::LLM_local, cs, ctx).fitness == doctest::Approx(ctx.cost.delay(1 / 0.8, 1)));
    CHECK(prioritize(MetricKind::ExNT_local, cs, ctx).fitness == doctest::Approx(1.25));
  }
  SUBCASE("two candidates by hand") {
    const std::vector<Candidate> cs{{2, 0.6, 1.0, 0}, {3, 0.9, 0.5, 0}};
    const auto p = prioritize(MetricKind::ExNT_local, cs, ctx);
    CHECK(p.members == std::vector<NodeId>{3, 2});  // more reliable first
    CHECK(p.fitness == doctest::Approx(1.0 / (1.0 - 0.4 * 0.1)));
    CHECK(p.per_member[0].sfr == doctest::Approx(0.9));
    CHECK(p.per_member[1].sfr == doctest::Approx(0.1 * 0.6));
    const auto e = prioritize(MetricKind::EEM_local, cs, ctx);
    CHECK(e.fitness == doctest::Approx(ctx.cost.energy(1.0 / 0.96, 2)));
  }
  SUBCASE("adding candidates never raises normalised ExNT") {
    SplitMix64 rng(5);
    std::vector<Candidate> cs;
    double prev = 1e300;
    for (int k = 0; k < 8; ++k) {
      cs.push_back({NodeId(k), 0.05 + 0.9 * rng.uniform01(), 1.0, 0});
      const double f = prioritize(MetricKind::ExNT_local, cs, ctx).fitness;
      CHECK(f <= prev);
      prev = f;
    }
  }
  SUBCASE("destination is always first") {
    const auto c = default_ctx(NodeId{9});
    const std::vector<Candidate> cs{{2, 0.99, 3.0, 0}, {9, 0.5, 2.0, 0}};
    for (auto k : {MetricKind::DP, MetricKind::EDP, MetricKind::ExNT_local, MetricKind::EEM_local}) {
      CHECK(prioritize(k, cs, c).members.front() == 9);
    }
  }
}

TEST_CASE("global set fitness") {
  const auto ctx = default_ctx(NodeId{1});
  SUBCASE("perfect link to the destination costs one attempt") {
    const std::vector<Candidate> cs{{1, 1.0, 1.0, 0.0}};
    CHECK(prioritize(MetricKind::ExNT_global, cs, ctx).fitness == doctest::Approx(1.0));
    CHECK(prioritize(MetricKind::EEM_global, cs, ctx).fitness == doctest::Approx(ctx.cost.energy(1, 1)));
    CHECK(prioritize(MetricKind::LLM_global, cs, ctx).fitness == doctest::Approx(ctx.cost.delay(1, 1)));
  }
  SUBCASE("telescoping along a perfect chain") {
    const double f2 = ctx.cost.energy(1, 1);
    const std::vector<Candidate> cs{{4, 1.0, 1.0, f2}};
    CHECK(prioritize(MetricKind::EEM_global, cs, ctx).fitness == doctest::Approx(2 * f2));
  }
  SUBCASE("agrees with the outcome tree") {
    SplitMix64 rng(8);
    for (int t = 0; t < 100; ++t) {
      std::vector<Candidate> cs;
      const int n = 1 + t % 4;
      for (int k = 0; k < n; ++k) cs.push_back({NodeId(k + 2), 0.05 + 0.95 * rng.uniform01(), 0, 5 * rng.uniform01()});
      for (auto kind : {MetricKind::ExNT_global, MetricKind::EEM_global, MetricKind::LLM_global}) {
        const auto p = prioritize(kind, cs, ctx);
        std::vector<double> pdr, down;
        for (const auto& m : p.per_member) {
          pdr.push_back(m.pdr);
          down.push_back(m.score);
        }
        CHECK(std::is_sorted(down.begin(), down.end()));
        const double unit = ctx.cost.attempt_cost(kind, cs.size());
        CHECK(p.fitness == doctest::Approx(oracle::outcome_tree_cost(pdr, down, unit, 3)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("selection tie-break") {
  PrioritizedCS a, b;
  a.fitness = b.fitness = 2.0;
  a.sector.theta = 0.4;
  b.sector.theta = 0.5;
  CHECK(better(MetricKind::ExNT_local, a, b));
  CHECK_FALSE(better(MetricKind::ExNT_local, b, a));
  b.sector.theta = 0.4;
  a.sector.psi = 1.0;
  b.sector.psi = 2.0;
  CHECK(better(MetricKind::DP, a, b));
  a.fitness = 3.0;
  CHECK(better(MetricKind::DP, a, b));
  CHECK_FALSE(better(MetricKind::ExNT_local, a, b));
}

TEST_CASE("global fitness table") {
  const LinkModel link;
  SUBCASE("a line settles from the destination outwards") {
    const auto t = make({{0, 0}, {6, 0}, {2, 0}, {4, 0}});
    const GlobalFitnessTable g(link, t, MetricKind::ExNT_global, {});
    CHECK(g.fitness(1) == 0.0);
    CHECK(g.rank(1) == 0);
    CHECK(g.rank(3) == 1);
    CHECK(g.rank(2) == 2);
    CHECK(g.rank(0) == 3);
    CHECK(g.fitness(3) < g.fitness(2));
    CHECK(g.fitness(2) < g.fitness(0));
    REQUIRE(g.selection(0));
    CHECK(g.selection(0)->members == std::vector<NodeId>{2});
  }
  SUBCASE("unreachable nodes stay unranked") {
    const auto t = make({{0, 0}, {2, 0}, {50, 50}});
    const GlobalFitnessTable g(link, t, MetricKind::LLM_global, {});
    CHECK(g.rank(2) == GlobalFitnessTable::kUnranked);
    CHECK(std::isinf(g.fitness(2)));
    CHECK_FALSE(g.selection(2));
    CHECK(std::isfinite(g.fitness(0)));
  }
  CHECK_THROWS(GlobalFitnessTable(link, make({{0, 0}, {1, 0}}), MetricKind::EDP, {}));
}

TEST_CASE("select_best aims at a side node when the sink is out of reach") {
  const LinkModel link;
  const auto t = make({{0, 0}, {10, 0}, {1.5, 1.5}});
  const auto fam = node_families(link, t, 0, SearchMode::Local);
  const auto ctx = default_ctx(NodeId{1});
  const auto best = select_best(
      MetricKind::DP, t, 0, fam,
      [&](const CandidateSetEntry& e, std::vector<Candidate>& out) {
        for (const auto& m : e.members) out.push_back({m.id, m.pdr, dp(t.pos(0), t.pos(1), t.pos(m.id)), 0});
      },
      ctx);
  REQUIRE(best);
  CHECK(best->members == std::vector<NodeId>{2});
  CHECK(best->sector.psi == doctest::Approx(std::numbers::pi / 4));
  CHECK(best->sector.theta == link.trx().theta_min);
}
