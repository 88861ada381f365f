// sector_cli: link-budget queries, single-topology routing, topology
// generation and Monte Carlo sweeps.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sector/benchmark.hpp"
#include "sector/config.hpp"
#include "sector/numerics.hpp"
#include "sector/protocol.hpp"
#include "sector/sim.hpp"
#include "sector/topology.hpp"

namespace {

using json = nlohmann::json;
using namespace sector;

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 1;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> settings;  // key=value overrides
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config_path,
                  "key=value parameter file (default: $SECTOR_CONFIG if set)");
  sub->add_option("--set", o.settings, "override one parameter, e.g. --set theta_min=0.3")
      ->type_name("KEY=VALUE");
}

SimConfig load(const CommonOpts& o) {
  SimConfig cfg;
  std::string path = o.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("SECTOR_CONFIG")) path = env;
  }
  if (!path.empty()) load_config_file(cfg, path);
  for (const auto& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

// "a:b:n" -> n evenly spaced values from a to b inclusive.
std::vector<double> parse_grid(const std::string& spec) {
  double a = 0, b = 0;
  int n = 0;
  char tail = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d%c", &a, &b, &n, &tail) != 3 || n < 1) {
    throw UsageError("grid must look like START:STOP:COUNT, got '" + spec + "'");
  }
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(n == 1 ? a : a + (b - a) * k / (n - 1));
  return out;
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---- link -------------------------------------------------------------------

struct LinkOpts {
  CommonOpts common;
  std::vector<double> thetas;
  std::vector<double> distances;
  double phi = 0.0;
  std::string sweep_theta, sweep_distance;
};

int cmd_link(const LinkOpts& o) {
  const SimConfig cfg = load(o.common);
  cfg.validate();
  const LinkModel link(cfg.routing.link);
  const auto& p = link.params();

  std::vector<double> thetas = o.thetas;
  if (!o.sweep_theta.empty()) thetas = parse_grid(o.sweep_theta);
  if (thetas.empty()) thetas.push_back(p.trx.theta_min);
  std::vector<double> dists = o.distances;
  if (!o.sweep_distance.empty()) dists = parse_grid(o.sweep_distance);
  if (dists.empty()) dists.push_back(link.d_max());

  std::cout << "theta\tphi\tdistance\tgain\tp_rx_W\tber\tper\tpdr\tmax_rate_bps\tmax_range_m\n";
  for (double th : thetas) {
    if (!(th > 0.0 && th < std::numbers::pi)) {
      throw numerics::DomainError("theta " + g17(th) + " outside (0, pi)");
    }
    const double range = link.max_range(th, o.phi);
    for (double d : dists) {
      const LinkGeometry geom{d, o.phi};
      geom.validate();
      const double p_rx = link.received_power(th, geom);
      const double rate =
          achievable_rate(p_rx, p.target_per, p.packet_L, p.trx, p.water.wavelength);
      std::cout << g17(th) << '\t' << g17(o.phi) << '\t' << g17(d) << '\t'
                << g17(link.gain(th, geom)) << '\t' << g17(p_rx) << '\t'
                << g17(link.ber_at(th, geom)) << '\t' << g17(link.per_at(th, geom)) << '\t'
                << g17(link.pdr_at(th, geom)) << '\t' << g17(rate) << '\t' << g17(range) << '\n';
    }
  }
  return 0;
}

// ---- route ------------------------------------------------------------------

struct RouteOpts {
  CommonOpts common;
  std::string topo_path;
  std::string scheme = "GOR-ExNT";
  double side_len = 8.0;
  std::size_t nodes = 50;
  std::uint64_t seed = 1;
  bool stochastic = false;
  int indent = 2;
};

json hop_json(const HopRecord& h) {
  json members = json::array();
  for (std::size_t k = 0; k < h.prioritized_cs.per_member.size(); ++k) {
    const auto& m = h.prioritized_cs.per_member[k];
    members.push_back({{"priority", k + 1}, {"id", m.id}, {"pdr", num(m.pdr)},
                       {"sfr", num(m.sfr)}, {"score", num(m.score)}});
  }
  return {{"forwarder", h.forwarder},
          {"sector",
           {{"apex", {h.sector.apex.x, h.sector.apex.y}}, {"psi", h.sector.psi}, {"theta", h.sector.theta}}},
          {"candidates", members},
          {"fitness", num(h.prioritized_cs.fitness)},
          {"next", h.chosen_next},
          {"attempts", h.attempts},
          {"pdr_bc", num(h.metrics.pdr_bc)},
          {"exnt_bc", num(h.metrics.exnt_bc)},
          {"distance_m", num(h.metrics.distance_m)},
          {"energy_j", num(h.metrics.energy_j)},
          {"delay_s", num(h.metrics.delay_s)}};
}

int cmd_route(const RouteOpts& o) {
  const SimConfig cfg = load(o.common);
  cfg.validate();
  const auto scheme = parse_scheme(o.scheme);
  if (!scheme) throw UsageError("unknown scheme '" + o.scheme + "'");

  NetworkTopology topo;
  if (!o.topo_path.empty()) {
    std::ifstream in(o.topo_path);
    if (!in) throw UsageError("cannot open topology file '" + o.topo_path + "'");
    topo = read_topology(in);
  } else {
    topo = generate_random(o.side_len, o.nodes, o.seed, cfg.acoustic_range);
  }
  topo.validate();

  const RouteResult res = scheme->unicast
                              ? tur::route(topo, cfg.routing)
                              : route(topo, scheme->kind, cfg.routing,
                                      o.stochastic ? RouteMode::Stochastic : RouteMode::Expected, o.seed);
  json hops = json::array();
  for (const auto& h : res.hops) hops.push_back(hop_json(h));
  json out = {{"scheme", scheme->name},
              {"source", topo.source},
              {"dest", topo.dest},
              {"nodes", topo.size()},
              {"reached", res.reached},
              {"failure", std::string(failure_name(res.failure))},
              {"hops", hops}};
  if (res.reached) {
    out["e2e"] = {{"pdr", num(res.e2e.pdr)},           {"exnt", num(res.e2e.exnt)},
                  {"distance_m", num(res.e2e.distance)}, {"energy_j", num(res.e2e.energy)},
                  {"delay_s", num(res.e2e.delay)},       {"hop_count", res.e2e.hop_count}};
  } else {
    out["e2e"] = nullptr;
  }
  std::cout << out.dump(o.indent) << '\n';
  return 0;
}

// ---- topo-gen ---------------------------------------------------------------

struct TopoOpts {
  double side_len = 8.0;
  std::size_t nodes = 50;
  std::uint64_t seed = 1;
  double acoustic_range = 0.0;
  std::string out_path;
};

int cmd_topo_gen(const TopoOpts& o) {
  if (!(o.side_len > 0.0)) throw UsageError("--side-len must be positive");
  const NetworkTopology topo = generate_random(o.side_len, o.nodes, o.seed, o.acoustic_range);
  if (o.out_path.empty() || o.out_path == "-") {
    write_topology(std::cout, topo);
  } else {
    std::ofstream out(o.out_path);
    if (!out) throw UsageError("cannot write '" + o.out_path + "'");
    write_topology(out, topo);
  }
  return 0;
}

// ---- sweep ------------------------------------------------------------------

struct SweepOpts {
  CommonOpts common;
  std::vector<double> side_lengths;
  std::vector<std::string> schemes;
  std::size_t trials = 0;
  std::size_t nodes = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool full_scale = false;
  std::string out_path;
  std::string dump_path;
  bool print_config = false;
};

int cmd_sweep(SweepOpts o) {
  SimConfig cfg = load(o.common);
  if (!o.side_lengths.empty()) cfg.side_lengths = o.side_lengths;
  if (!o.schemes.empty()) {
    cfg.schemes.clear();
    for (const auto& name : o.schemes) {
      const auto s = parse_scheme(name);
      if (!s) throw UsageError("unknown scheme '" + name + "'");
      cfg.schemes.push_back(*s);
    }
  }
  if (o.full_scale) cfg.n_trials = 10000;
  if (o.trials) cfg.n_trials = o.trials;
  if (o.nodes) cfg.n_nodes = o.nodes;
  if (o.seed) cfg.master_seed = o.seed;
  if (o.threads) cfg.threads = o.threads;
  cfg.validate();
  if (o.print_config) {
    write_config(std::cerr, cfg);
  }

  const SweepResult res = run_sweep(cfg, !o.dump_path.empty());
  if (o.out_path.empty() || o.out_path == "-") {
    write_csv(std::cout, res);
  } else {
    std::ofstream out(o.out_path);
    if (!out) throw UsageError("cannot write '" + o.out_path + "'");
    write_csv(out, res);
  }
  if (!o.dump_path.empty()) {
    std::ofstream dump(o.dump_path);
    if (!dump) throw UsageError("cannot write '" + o.dump_path + "'");
    write_trials_csv(dump, cfg, res);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SectOR opportunistic routing simulator for underwater optical networks"};
  app.require_subcommand(1);

  LinkOpts link_o;
  auto* link = app.add_subcommand("link", "link budget table over theta/distance grids");
  add_common(link, link_o.common);
  link->add_option("--theta", link_o.thetas, "divergence angle(s), rad (default theta_min)");
  link->add_option("--distance", link_o.distances, "distance(s), m (default d_max)");
  link->add_option("--phi", link_o.phi, "misalignment angle, rad");
  link->add_option("--sweep-theta", link_o.sweep_theta, "theta grid START:STOP:COUNT");
  link->add_option("--sweep-distance", link_o.sweep_distance, "distance grid START:STOP:COUNT");

  RouteOpts route_o;
  auto* route = app.add_subcommand("route", "route one topology and print the hop trace as JSON");
  add_common(route, route_o.common);
  route->add_option("--topo", route_o.topo_path, "topology file (otherwise generated from --seed)");
  route->add_option("--scheme", route_o.scheme,
                    "TUR, LOR-DP, LOR-EDP, LOR-EEM, LOR-LLM, LOR-ExNT, GOR-EEM, GOR-LLM or GOR-ExNT")
      ->capture_default_str();
  route->add_option("--side-len", route_o.side_len, "side length of a generated topology, m")
      ->capture_default_str();
  route->add_option("--nodes", route_o.nodes, "random nodes of a generated topology")->capture_default_str();
  route->add_option("--seed", route_o.seed, "topology and stochastic-mode seed")->capture_default_str();
  route->add_flag("--stochastic", route_o.stochastic, "draw receptions instead of following expectations");
  route->add_option("--indent", route_o.indent, "JSON indent, -1 for one line")->capture_default_str();

  TopoOpts topo_o;
  auto* topo = app.add_subcommand("topo-gen", "write a random topology file");
  topo->add_option("--side-len", topo_o.side_len, "side length, m")->capture_default_str();
  topo->add_option("--nodes", topo_o.nodes, "random nodes besides source and destination")
      ->capture_default_str();
  topo->add_option("--seed", topo_o.seed, "generator seed")->capture_default_str();
  topo->add_option("--acoustic-range", topo_o.acoustic_range, "control-plane range, m (<= 0: d_max)");
  topo->add_option("-o,--output", topo_o.out_path, "output file (default stdout)");

  SweepOpts sweep_o;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over side lengths, CSV output");
  add_common(sweep, sweep_o.common);
  sweep->add_option("--side-lengths", sweep_o.side_lengths, "side lengths, m")->delimiter(',');
  sweep->add_option("--schemes", sweep_o.schemes, "comma-separated scheme names")->delimiter(',');
  sweep->add_option("--trials", sweep_o.trials, "trials per side length");
  sweep->add_option("--nodes", sweep_o.nodes, "random nodes per topology");
  sweep->add_option("--seed", sweep_o.seed, "master seed");
  sweep->add_option("--threads", sweep_o.threads, "worker threads");
  sweep->add_flag("--full-scale", sweep_o.full_scale, "10,000 trials per side length");
  sweep->add_option("-o,--output", sweep_o.out_path, "CSV file (default stdout)");
  sweep->add_option("--dump-trials", sweep_o.dump_path, "write per-trial records to this CSV");
  sweep->add_flag("--print-config", sweep_o.print_config, "echo the effective configuration to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*link) return cmd_link(link_o);
    if (*route) return cmd_route(route_o);
    if (*topo) return cmd_topo_gen(topo_o);
    if (*sweep) return cmd_sweep(sweep_o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}
