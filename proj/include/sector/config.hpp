#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sector/metrics.hpp"
#include "sector/protocol.hpp"

namespace sector {

/// A routing scheme compared in experiments: the unicast baseline or SectOR
/// driven by one metric.
struct Scheme {
  std::string name;  // e.g. "TUR", "LOR-EDP", "GOR-ExNT"
  bool unicast = false;
  MetricKind kind = MetricKind::DP;
};

std::optional<Scheme> parse_scheme(std::string_view name);
std::vector<Scheme> default_schemes();

struct SimConfig {
  std::vector<double> side_lengths{6.0, 8.0, 10.0, 12.0};
  std::size_t n_nodes = 50;
  std::size_t n_trials = 1000;
  std::vector<Scheme> schemes = default_schemes();
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
  double acoustic_range = 0.0;  // <= 0: equal to the optical d_max
  RoutingConfig routing;

  void validate() const;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Applies one `key=value` setting. Keys follow the parameter-table symbols
/// (p_tx, eta_tx, theta_min, ...); see README for the full list.
void apply_setting(SimConfig& cfg, std::string_view key, std::string_view value);

/// Reads a flat key=value file; '#' starts a comment.
void load_config(SimConfig& cfg, std::istream& is);
void load_config_file(SimConfig& cfg, const std::string& path);

/// Every recognised key with its current value, in file order.
void write_config(std::ostream& os, const SimConfig& cfg);

}  // namespace sector
