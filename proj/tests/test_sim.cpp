#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sector/config.hpp"
#include "sector/sim.hpp"

using namespace sector;

namespace {

SimConfig small(std::vector<double> sls, std::size_t trials) {
  SimConfig c;
  c.side_lengths = std::move(sls);
  c.n_trials = trials;
  c.n_nodes = 30;
  return c;
}

std::string csv(const SweepResult& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("scheme names") {
  CHECK(parse_scheme("TUR")->unicast);
  CHECK(parse_scheme("GOR-ExNT")->kind == MetricKind::ExNT_global);
  CHECK(parse_scheme("LOR-EDP")->kind == MetricKind::EDP);
  CHECK_FALSE(parse_scheme("GOR-DP"));
  CHECK(default_schemes().size() == 5);
}

TEST_CASE("config file parsing") {
  SimConfig c;
  std::istringstream in(
      "# comment\n"
      "p_tx = 0.2\n"
      "theta_min=0.3   # trailing comment\n"
      "\n"
      "coord_scheme=SA\n"
      "side_lengths=5, 7.5\n"
      "schemes=TUR,LOR-DP\n"
      "max_retx_K=4\n"
      "threads=2\n");
  load_config(c, in);
  CHECK(c.routing.link.trx.p_tx == 0.2);
  CHECK(c.routing.link.trx.theta_min == 0.3);
  CHECK(c.routing.ed.coord_scheme == CoordScheme::SA);
  CHECK(c.side_lengths == std::vector<double>{5.0, 7.5});
  REQUIRE(c.schemes.size() == 2);
  CHECK(c.schemes[1].name == "LOR-DP");
  CHECK(c.routing.link.max_retx_K == 4);
  CHECK(c.threads == 2);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("config errors") {
  SimConfig c;
  CHECK_THROWS_AS(apply_setting(c, "p_txx", "1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "p_tx", "abc"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "p_tx", "1.0x"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "n_trials", "-3"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "schemes", "TUR,XYZ"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "coord_scheme", "fast"), ConfigError);
  std::istringstream bad("p_tx 0.1\n");
  CHECK_THROWS_AS(load_config(c, bad), ConfigError);
  c = {};
  c.routing.link.target_per = 2.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.side_lengths.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_THROWS_AS(load_config_file(c, "/nonexistent/sector.cfg"), ConfigError);
}

TEST_CASE("config write/load round trip") {
  SimConfig a;
  a.routing.link.water.alpha = 0.25;
  a.routing.ed.tau_sens = 3e-5;
  a.side_lengths = {4.0, 6.5};
  a.master_seed = 77;
  std::stringstream ss;
  write_config(ss, a);
  SimConfig b;
  load_config(b, ss);
  std::stringstream again;
  write_config(again, b);
  CHECK(again.str() == ss.str());
  CHECK(b.routing.link.water.alpha == 0.25);
  CHECK(b.master_seed == 77);
}

TEST_CASE("mean and standard error") {
  const auto s = mean_se({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == 2.5);
  CHECK(s.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(std::isnan(mean_se({1.0}).se));
  CHECK(std::isnan(mean_se({}).mean));
}

TEST_CASE("trial seeds") {
  CHECK(trial_seed(1, 0, 0) == trial_seed(1, 0, 0));
  CHECK(trial_seed(1, 0, 1) != trial_seed(1, 0, 0));
  CHECK(trial_seed(1, 1, 0) != trial_seed(1, 0, 0));
  CHECK(trial_seed(2, 0, 0) != trial_seed(1, 0, 0));
}

TEST_CASE("schemes share topologies") {
  auto c = small({8.0}, 1);
  c.schemes = {*parse_scheme("TUR"), *parse_scheme("LOR-DP")};
  const auto r = run_sweep(c, true);
  REQUIRE(r.trials.size() == 2);
  CHECK(r.trials[0].seed == r.trials[1].seed);
  CHECK(r.trials[0].connected == r.trials[1].connected);
}

TEST_CASE("a tiny field is always crossed in one hop") {
  auto c = small({1.0}, 20);
  c.schemes.clear();
  for (const char* n : {"TUR", "LOR-DP", "LOR-EDP", "LOR-EEM", "LOR-LLM", "LOR-ExNT", "GOR-EEM", "GOR-LLM", "GOR-ExNT"}) {
    c.schemes.push_back(*parse_scheme(n));
  }
  const auto r = run_sweep(c);
  for (const auto& cell : r.cells) CHECK(cell.discovery_rate == 1.0);
  CHECK(r.connectivity_rate[0] == 1.0);
}

TEST_CASE("global ExNT discovers exactly the connected trials") {
  auto c = small({7.0, 10.0}, 60);
  const auto r = run_sweep(c, true);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(find_cell(r, k, "TUR").discovery_rate == r.connectivity_rate[k]);
    CHECK(find_cell(r, k, "GOR-ExNT").discovery_rate == r.connectivity_rate[k]);
  }
  for (const auto& t : r.trials) {
    if (c.schemes[t.scheme_index].name == "GOR-ExNT") CHECK(t.reached == t.connected);
  }
}

TEST_CASE("CSV output") {
  auto c = small({6.0, 9.0}, 25);
  SUBCASE("no schemes: header only") {
    c.schemes.clear();
    const auto s = csv(run_sweep(c));
    CHECK(lines(s) == 1);
    CHECK(s.rfind("side_len,scheme,metric_kind,discovery_rate,", 0) == 0);
  }
  SUBCASE("one row per side length and scheme") {
    CHECK(lines(csv(run_sweep(c))) == 1 + 2 * c.schemes.size());
  }
  SUBCASE("row recomputed from the trial log") {
    const auto r = run_sweep(c, true);
    std::vector<double> pdr, dist;
    std::size_t disc = 0;
    for (const auto& t : r.trials) {
      if (t.sl_index != 1 || c.schemes[t.scheme_index].name != "LOR-EDP" || !t.reached) continue;
      ++disc;
      pdr.push_back(t.e2e.pdr);
      dist.push_back(t.e2e.distance);
    }
    double m = 0;
    for (double x : pdr) m += x;
    m /= pdr.size();
    double ss = 0;
    for (double x : pdr) ss += (x - m) * (x - m);
    const auto& cell = find_cell(r, 1, "LOR-EDP");
    CHECK(cell.n_discovered == disc);
    CHECK(cell.pdr.mean == doctest::Approx(m).epsilon(1e-14));
    CHECK(cell.pdr.se == doctest::Approx(std::sqrt(ss / (pdr.size() - 1) / pdr.size())).epsilon(1e-12));
    std::ostringstream trials;
    write_trials_csv(trials, c, r);
    CHECK(lines(trials.str()) == 1 + r.trials.size());
  }
}

TEST_CASE("sweeps are reproducible across runs and thread counts") {
  auto c = small({6.0, 9.0}, 40);
  const auto a = csv(run_sweep(c));
  CHECK(csv(run_sweep(c)) == a);
  c.threads = 3;
  CHECK(csv(run_sweep(c)) == a);
  c.master_seed = 2;
  CHECK(csv(run_sweep(c)) != a);
}
