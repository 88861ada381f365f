#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sector/config.hpp"
#include "sector/protocol.hpp"

namespace sector {

/// Seed of trial `trial` at side-length index `sl_index`. Independent of
/// thread count and of the order in which trials run.
std::uint64_t trial_seed(std::uint64_t master, std::size_t sl_index, std::size_t trial);

struct TrialRecord {
  std::size_t sl_index = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t scheme_index = 0;
  bool connected = false;  // destination reachable in the unicast graph
  bool reached = false;
  FailureReason failure = FailureReason::None;
  E2EMetrics e2e;
};

struct Stat {
  double mean = 0.0;
  double se = 0.0;  // NaN when fewer than two samples
};

/// Mean and standard error in input order; NaN mean for an empty sample.
Stat mean_se(const std::vector<double>& xs);

struct SweepCell {
  double side_len = 0.0;
  Scheme scheme;
  std::size_t n_trials = 0;
  std::size_t n_discovered = 0;
  double discovery_rate = 0.0;
  // Conditional on discovery.
  Stat pdr, exnt, distance, energy, delay;
};

struct SweepResult {
  std::vector<SweepCell> cells;           // side length major, scheme minor
  std::vector<double> connectivity_rate;  // per side length
  std::vector<TrialRecord> trials;        // filled when requested
};

SweepResult run_sweep(const SimConfig& cfg, bool keep_trials = false);

const SweepCell& find_cell(const SweepResult& r, std::size_t sl_index, std::string_view scheme);

void write_csv(std::ostream& os, const SweepResult& r);
void write_trials_csv(std::ostream& os, const SimConfig& cfg, const SweepResult& r);

}  // namespace sector
