#include "sector/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace sector {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is{std::string(s)};
  while (std::getline(is, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  const std::string s = trim(v);
  try {
    std::size_t pos = 0;
    const double d = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + std::string(key) + "': expected a number, got '" + s + "'");
  }
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
  const std::string s = trim(v);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("config key '" + std::string(key) + "': expected an unsigned integer, got '" + s + "'");
  }
  return out;
}

using Setter = std::function<void(SimConfig&, std::string_view, std::string_view)>;


template <typename F>
Setter number(F field) {
  return [field](SimConfig& c, std::string_view k, std::string_view v) { field(c) = to_double(k, v); };
}

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"p_tx", number([](SimConfig& c) -> double& { return c.routing.link.trx.p_tx; })},
      {"eta_tx", number([](SimConfig& c) -> double& { return c.routing.link.trx.eta_tx; })},
      {"eta_rx", number([](SimConfig& c) -> double& { return c.routing.link.trx.eta_rx; })},
      {"eta_c", number([](SimConfig& c) -> double& { return c.routing.link.trx.eta_c; })},
      {"aperture", number([](SimConfig& c) -> double& { return c.routing.link.trx.aperture; })},
      {"pulse_T", number([](SimConfig& c) -> double& { return c.routing.link.trx.pulse_T; })},
      {"theta_min", number([](SimConfig& c) -> double& { return c.routing.link.trx.theta_min; })},
      {"theta_max", number([](SimConfig& c) -> double& { return c.routing.link.trx.theta_max; })},
      {"planck_h", number([](SimConfig& c) -> double& { return c.routing.link.trx.planck_h; })},
      {"light_speed_water", number([](SimConfig& c) -> double& { return c.routing.link.trx.light_speed_water; })},
      {"f_dc", number([](SimConfig& c) -> double& { return c.routing.link.trx.f_dc; })},
      {"f_bg", number([](SimConfig& c) -> double& { return c.routing.link.trx.f_bg; })},
      {"wavelength", number([](SimConfig& c) -> double& { return c.routing.link.water.wavelength; })},
      {"extinction_c", number([](SimConfig& c) -> double& { return c.routing.link.water.extinction_c; })},
      {"alpha", number([](SimConfig& c) -> double& { return c.routing.link.water.alpha; })},
      {"rate_R", number([](SimConfig& c) -> double& { return c.routing.link.rate_R; })},
      {"target_per", number([](SimConfig& c) -> double& { return c.routing.link.target_per; })},
      {"packet_L", number([](SimConfig& c) -> double& { return c.routing.link.packet_L; })},
      {"max_retx_K",
       [](SimConfig& c, std::string_view k, std::string_view v) {
         c.routing.link.max_retx_K = static_cast<int>(to_uint(k, v));
       }},
      {"p_listen", number([](SimConfig& c) -> double& { return c.routing.ed.p_listen; })},
      {"p_coord", number([](SimConfig& c) -> double& { return c.routing.ed.p_coord; })},
      {"tau_sifs", number([](SimConfig& c) -> double& { return c.routing.ed.tau_sifs; })},
      {"tau_ack", number([](SimConfig& c) -> double& { return c.routing.ed.tau_ack; })},
      {"tau_sens", number([](SimConfig& c) -> double& { return c.routing.ed.tau_sens; })},
      {"coord_scheme",
       [](SimConfig& c, std::string_view k, std::string_view v) {
         const auto s = parse_coord(trim(v));
         if (!s) throw ConfigError("config key '" + std::string(k) + "': expected SA, CSA or FSA");
         c.routing.ed.coord_scheme = *s;
       }},
      {"side_lengths",
       [](SimConfig& c, std::string_view k, std::string_view v) {
         c.side_lengths.clear();
         for (const auto& item : split_list(v)) c.side_lengths.push_back(to_double(k, item));
       }},
      {"n_nodes", [](SimConfig& c, std::string_view k, std::string_view v) { c.n_nodes = to_uint(k, v); }},
      {"n_trials", [](SimConfig& c, std::string_view k, std::string_view v) { c.n_trials = to_uint(k, v); }},
      {"schemes",
       [](SimConfig& c, std::string_view k, std::string_view v) {
         c.schemes.clear();
         for (const auto& item : split_list(v)) {
           const auto s = parse_scheme(item);
           if (!s) throw ConfigError("config key '" + std::string(k) + "': unknown scheme '" + item + "'");
           c.schemes.push_back(*s);
         }
       }},
      {"master_seed", [](SimConfig& c, std::string_view k, std::string_view v) { c.master_seed = to_uint(k, v); }},
      {"threads",
       [](SimConfig& c, std::string_view k, std::string_view v) { c.threads = static_cast<unsigned>(to_uint(k, v)); }},
      {"acoustic_range", number([](SimConfig& c) -> double& { return c.acoustic_range; })},
  };
  return table;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "TUR") return Scheme{"TUR", true, MetricKind::DP};
  static const std::map<std::string, MetricKind, std::less<>> named = {
      {"LOR-DP", MetricKind::DP},          {"LOR-EDP", MetricKind::EDP},
      {"LOR-EEM", MetricKind::EEM_local},  {"LOR-LLM", MetricKind::LLM_local},
      {"LOR-ExNT", MetricKind::ExNT_local}, {"GOR-EEM", MetricKind::EEM_global},
      {"GOR-LLM", MetricKind::LLM_global}, {"GOR-ExNT", MetricKind::ExNT_global},
  };
  const auto it = named.find(name);
  if (it == named.end()) return std::nullopt;
  return Scheme{it->first, false, it->second};
}

std::vector<Scheme> default_schemes() {
  std::vector<Scheme> out;
  for (const char* n : {"TUR", "LOR-DP", "LOR-EDP", "LOR-ExNT", "GOR-ExNT"}) out.push_back(*parse_scheme(n));
  return out;
}

void SimConfig::validate() const {
  if (side_lengths.empty()) throw ConfigError("side_lengths must not be empty");
  for (double sl : side_lengths) {
    if (!(sl > 0.0)) throw ConfigError("side lengths must be positive");
  }
  if (n_trials < 1) throw ConfigError("n_trials must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  try {
    routing.link.validate();
    routing.ed.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void apply_setting(SimConfig& cfg, std::string_view key, std::string_view value) {
  for (const auto& [name, set] : setters()) {
    if (name == key) {
      set(cfg, key, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void load_config(SimConfig& cfg, std::istream& is) {
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_setting(cfg, trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
  }
}

void load_config_file(SimConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  load_config(cfg, in);
}

void write_config(std::ostream& os, const SimConfig& cfg) {
  const auto& t = cfg.routing.link.trx;
  const auto& l = cfg.routing.link;
  const auto& e = cfg.routing.ed;
  const std::vector<std::pair<const char*, double>> nums = {
      {"p_tx", t.p_tx}, {"eta_tx", t.eta_tx}, {"eta_rx", t.eta_rx}, {"eta_c", t.eta_c},
      {"aperture", t.aperture}, {"pulse_T", t.pulse_T}, {"theta_min", t.theta_min},
      {"theta_max", t.theta_max}, {"planck_h", t.planck_h}, {"light_speed_water", t.light_speed_water},
      {"f_dc", t.f_dc}, {"f_bg", t.f_bg}, {"wavelength", l.water.wavelength},
      {"extinction_c", l.water.extinction_c}, {"alpha", l.water.alpha}, {"rate_R", l.rate_R},
      {"target_per", l.target_per}, {"packet_L", l.packet_L},
  };
  for (const auto& [k, v] : nums) os << k << '=' << fmt_double(v) << '\n';
  os << "max_retx_K=" << l.max_retx_K << '\n';
  os << "p_listen=" << fmt_double(e.p_listen) << '\n';
  os << "p_coord=" << fmt_double(e.p_coord) << '\n';
  os << "tau_sifs=" << fmt_double(e.tau_sifs) << '\n';
  os << "tau_ack=" << fmt_double(e.tau_ack) << '\n';
  os << "tau_sens=" << fmt_double(e.tau_sens) << '\n';
  os << "coord_scheme=" << coord_name(e.coord_scheme) << '\n';
  os << "side_lengths=";
  for (std::size_t k = 0; k < cfg.side_lengths.size(); ++k) os << (k ? "," : "") << fmt_double(cfg.side_lengths[k]);
  os << "\nn_nodes=" << cfg.n_nodes << "\nn_trials=" << cfg.n_trials << "\nschemes=";
  for (std::size_t k = 0; k < cfg.schemes.size(); ++k) os << (k ? "," : "") << cfg.schemes[k].name;
  os << "\nmaster_seed=" << cfg.master_seed << "\nthreads=" << cfg.threads
     << "\nacoustic_range=" << fmt_double(cfg.acoustic_range) << '\n';
}

}  // namespace sector
