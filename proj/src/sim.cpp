#include "sector/sim.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "sector/benchmark.hpp"
#include "sector/rng.hpp"
#include "sector/topology.hpp"

namespace sector {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Job {
  std::size_t sl_index;
  std::size_t trial;
};

// One topology, every scheme. Writes schemes.size() consecutive records and
// returns whether the unicast graph connects source and destination.
bool run_trial(const SimConfig& cfg, const LinkModel& link, const Job& job, TrialRecord* out) {
  const double sl = cfg.side_lengths[job.sl_index];
  const std::uint64_t seed = trial_seed(cfg.master_seed, job.sl_index, job.trial);
  const NetworkTopology topo = generate_random(sl, cfg.n_nodes, seed, cfg.acoustic_range);
  const auto graph = tur::tur_graph(topo, link);
  const bool connected = tur::dijkstra(graph, topo.source, topo.dest).has_value();

  for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
    const Scheme& scheme = cfg.schemes[s];
    const RouteResult res = scheme.unicast ? tur::route(topo, cfg.routing)
                                           : route(topo, scheme.kind, cfg.routing, RouteMode::Expected, seed);
    TrialRecord& r = out[s];
    r.sl_index = job.sl_index;
    r.trial = job.trial;
    r.seed = seed;
    r.scheme_index = s;
    r.connected = connected;
    r.reached = res.reached;
    r.failure = res.failure;
    r.e2e = res.e2e;
  }
  return connected;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, std::size_t sl_index, std::size_t trial) {
  const std::uint64_t counter = (static_cast<std::uint64_t>(sl_index) << 32) ^ static_cast<std::uint64_t>(trial);
  return mix64(mix64(master) ^ mix64(counter));
}

Stat mean_se(const std::vector<double>& xs) {
  Stat s;
  const std::size_t n = xs.size();
  if (n == 0) return {kNaN, kNaN};
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(n);
  if (n < 2) {
    s.se = kNaN;
    return s;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  return s;
}

SweepResult run_sweep(const SimConfig& cfg, bool keep_trials) {
  cfg.validate();
  const LinkModel link(cfg.routing.link);
  const std::size_t n_sl = cfg.side_lengths.size();
  const std::size_t n_sch = cfg.schemes.size();

  std::vector<Job> jobs;
  jobs.reserve(n_sl * cfg.n_trials);
  for (std::size_t k = 0; k < n_sl; ++k) {
    for (std::size_t t = 0; t < cfg.n_trials; ++t) jobs.push_back({k, t});
  }
  std::vector<TrialRecord> records(jobs.size() * n_sch);
  std::vector<char> connected(jobs.size(), 0);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size() && !failed; j = next++) {
      try {
        connected[j] = run_trial(cfg, link, jobs[j], records.data() + j * n_sch);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::min<std::size_t>(cfg.threads, std::max<std::size_t>(jobs.size(), 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Reduction in job order keeps results bit-identical for any thread count.
  SweepResult out;
  for (std::size_t k = 0; k < n_sl; ++k) {
    std::size_t n_conn = 0;
    for (std::size_t t = 0; t < cfg.n_trials; ++t) {
      n_conn += connected[k * cfg.n_trials + t] ? 1 : 0;
    }
    out.connectivity_rate.push_back(static_cast<double>(n_conn) / static_cast<double>(cfg.n_trials));

    for (std::size_t s = 0; s < n_sch; ++s) {
      std::vector<double> pdr, exnt, dist, energy, delay;
      for (std::size_t t = 0; t < cfg.n_trials; ++t) {
        const TrialRecord& r = records[(k * cfg.n_trials + t) * n_sch + s];
        if (!r.reached) continue;
        pdr.push_back(r.e2e.pdr);
        exnt.push_back(r.e2e.exnt);
        dist.push_back(r.e2e.distance);
        energy.push_back(r.e2e.energy);
        delay.push_back(r.e2e.delay);
      }
      SweepCell c;
      c.side_len = cfg.side_lengths[k];
      c.scheme = cfg.schemes[s];
      c.n_trials = cfg.n_trials;
      c.n_discovered = pdr.size();
      c.discovery_rate = static_cast<double>(c.n_discovered) / static_cast<double>(c.n_trials);
      c.pdr = mean_se(pdr);
      c.exnt = mean_se(exnt);
      c.distance = mean_se(dist);
      c.energy = mean_se(energy);
      c.delay = mean_se(delay);
      out.cells.push_back(std::move(c));
    }
  }
  if (keep_trials) out.trials = std::move(records);
  return out;
}

const SweepCell& find_cell(const SweepResult& r, std::size_t sl_index, std::string_view scheme) {
  const std::size_t n_sl = r.connectivity_rate.size();
  if (n_sl == 0 || sl_index >= n_sl) throw std::out_of_range("side length index out of range");
  const std::size_t n_sch = r.cells.size() / n_sl;
  for (std::size_t s = 0; s < n_sch; ++s) {
    const SweepCell& c = r.cells[sl_index * n_sch + s];
    if (c.scheme.name == scheme) return c;
  }
  throw std::out_of_range("scheme not in sweep: " + std::string(scheme));
}

void write_csv(std::ostream& os, const SweepResult& r) {
  os << "side_len,scheme,metric_kind,discovery_rate,mean_pdr,se_pdr,mean_exnt,se_exnt,"
        "mean_distance_m,se_distance_m,mean_energy_j,se_energy_j,mean_delay_s,se_delay_s,"
        "n_discovered,n_trials\n";
  for (const SweepCell& c : r.cells) {
    os << fmt(c.side_len) << ',' << c.scheme.name << ','
       << (c.scheme.unicast ? std::string_view("unicast") : metric_name(c.scheme.kind)) << ','
       << fmt(c.discovery_rate) << ',' << fmt(c.pdr.mean) << ',' << fmt(c.pdr.se) << ','
       << fmt(c.exnt.mean) << ',' << fmt(c.exnt.se) << ',' << fmt(c.distance.mean) << ','
       << fmt(c.distance.se) << ',' << fmt(c.energy.mean) << ',' << fmt(c.energy.se) << ','
       << fmt(c.delay.mean) << ',' << fmt(c.delay.se) << ',' << c.n_discovered << ','
       << c.n_trials << '\n';
  }
}

void write_trials_csv(std::ostream& os, const SimConfig& cfg, const SweepResult& r) {
  os << "side_len,trial,seed,scheme,connected,reached,failure,pdr,exnt,distance_m,energy_j,delay_s,hops\n";
  for (const TrialRecord& t : r.trials) {
    os << fmt(cfg.side_lengths[t.sl_index]) << ',' << t.trial << ',' << t.seed << ','
       << cfg.schemes[t.scheme_index].name << ',' << (t.connected ? 1 : 0) << ','
       << (t.reached ? 1 : 0) << ',' << failure_name(t.failure) << ',';
    if (t.reached) {
      os << fmt(t.e2e.pdr) << ',' << fmt(t.e2e.exnt) << ',' << fmt(t.e2e.distance) << ','
         << fmt(t.e2e.energy) << ',' << fmt(t.e2e.delay) << ',' << t.e2e.hop_count << '\n';
    } else {
      os << "nan,nan,nan,nan,nan,0\n";
    }
  }
}

}  // namespace sector
