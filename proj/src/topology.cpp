#include "sector/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sector/rng.hpp"

namespace sector {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Interval {
  NodeId id;
  double phi;
  double distance;
  double lo;
  double hi;
};
}  // namespace

double distance(const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void NetworkTopology::validate() const {
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].id != k) throw std::invalid_argument("node ids must be dense and ordered");
  }
  if (source >= nodes.size() || dest >= nodes.size()) throw std::invalid_argument("source/dest id out of range");
  if (source == dest) throw std::invalid_argument("source and destination must differ");
}

double bearing(const Vec2& from, const Vec2& to) {
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  if (dx == 0.0 && dy == 0.0) throw std::invalid_argument("bearing: coincident positions");
  double a = std::atan2(dy, dx);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

double wrap_angle(double a) {
  a = std::remainder(a, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  return a;
}

Coverage covers(const LinkModel& link, const Sector& sector, const Vec2& target) {
  Coverage c;
  c.distance = distance(sector.apex, target);
  if (c.distance == 0.0) return c;
  c.phi = std::abs(wrap_angle(bearing(sector.apex, target) - sector.psi));
  if (c.phi > sector.theta / 2.0) return c;
  double range = 0.0;
  try {
    range = link.max_range(sector.theta, c.phi);
  } catch (const InfeasibleLink&) {
    return c;
  }
  c.covered = c.distance <= range;
  return c;
}

std::vector<NodeId> search_space(const NetworkTopology& topo, NodeId i, SearchMode mode,
                                 double radius) {
  std::vector<NodeId> out;
  const Vec2& pi = topo.pos(i);
  const double own_to_dest = distance(pi, topo.pos(topo.dest));
  for (const Node& n : topo.nodes) {
    if (n.id == i) continue;
    const double r = distance(pi, n.pos);
    // Coincident nodes have no bearing and cannot be aimed at.
    if (r == 0.0 || r > radius) continue;
    if (mode == SearchMode::Local && !(distance(n.pos, topo.pos(topo.dest)) < own_to_dest)) continue;
    out.push_back(n.id);
  }
  return out;
}

double search_radius(const NetworkTopology& topo, const LinkModel& link) {
  return topo.acoustic_range > 0.0 ? std::min(link.d_max(), topo.acoustic_range) : link.d_max();
}

std::vector<double> pointing_angles(const NetworkTopology& topo, NodeId i,
                                    const std::vector<NodeId>& ss) {
  std::vector<double> angles;
  angles.reserve(ss.size());
  for (NodeId x : ss) angles.push_back(bearing(topo.pos(i), topo.pos(x)));
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
               angles.end());
  return angles;
}

std::vector<CandidateSetEntry> candidate_set_family(const LinkModel& link,
                                                    const NetworkTopology& topo, NodeId i,
                                                    double psi,
                                                    const std::vector<NodeId>& ss) {
  const double th_min = link.trx().theta_min;
  const double th_max = link.trx().theta_max;
  const Vec2& apex = topo.pos(i);

  std::vector<Interval> spans;
  std::vector<double> breaks{th_min, th_max};
  for (NodeId x : ss) {
    const double r = distance(apex, topo.pos(x));
    const double phi = std::abs(wrap_angle(bearing(apex, topo.pos(x)) - psi));
    const double enter = 2.0 * phi;
    if (enter > th_max) continue;
    breaks.push_back(std::max(enter, th_min));
    const double lo = std::max(enter, th_min);
    const double hi = std::min(link.max_divergence(phi, r), th_max);
    if (hi < lo) continue;
    spans.push_back({x, phi, r, lo, hi});
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::sort(spans.begin(), spans.end(), [](const Interval& a, const Interval& b) { return a.id < b.id; });

  std::vector<CandidateSetEntry> family;
  std::vector<NodeId> previous;
  std::vector<NodeId> current;
  for (double theta : breaks) {
    current.clear();
    for (const Interval& s : spans) {
      if (s.lo <= theta && theta <= s.hi) current.push_back(s.id);
    }
    if (current.empty() || current == previous) continue;
    CandidateSetEntry entry;
    entry.theta = theta;
    for (const Interval& s : spans) {
      if (s.lo <= theta && theta <= s.hi) {
        entry.members.push_back({s.id, s.phi, s.distance, link.pdr_at(theta, {s.distance, s.phi})});
      }
    }
    family.push_back(std::move(entry));
    previous = current;
  }
  return family;
}

NetworkTopology generate_random(double side_len, std::size_t n_nodes, std::uint64_t seed,
                                double acoustic_range) {
  if (!(side_len > 0.0)) throw std::invalid_argument("side length must be positive");
  NetworkTopology topo;
  topo.side_length = side_len;
  topo.acoustic_range = acoustic_range;
  topo.source = 0;
  topo.dest = 1;
  topo.nodes.reserve(n_nodes + 2);
  topo.nodes.push_back({0, {0.0, 0.0}});
  topo.nodes.push_back({1, {side_len, side_len}});
  SplitMix64 rng(seed);
  for (std::size_t k = 0; k < n_nodes; ++k) {
    const double x = side_len * rng.uniform01();
    const double y = side_len * rng.uniform01();
    topo.nodes.push_back({k + 2, {x, y}});
  }
  return topo;
}

void write_topology(std::ostream& os, const NetworkTopology& topo) {
  char buf[128];
  os << "# sector topology\n";
  std::snprintf(buf, sizeof buf, "SL %.17g\n", topo.side_length);
  os << buf;
  os << "source " << topo.source << "\n";
  os << "dest " << topo.dest << "\n";
  if (topo.acoustic_range > 0.0) {
    std::snprintf(buf, sizeof buf, "acoustic_range %.17g\n", topo.acoustic_range);
    os << buf;
  }
  for (const Node& n : topo.nodes) {
    std::snprintf(buf, sizeof buf, "%zu %.17g %.17g\n", n.id, n.pos.x, n.pos.y);
    os << buf;
  }
}

NetworkTopology read_topology(std::istream& is) {
  NetworkTopology topo;
  bool have_source = false;
  bool have_dest = false;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    const auto fail = [&] {
      return std::invalid_argument("topology line " + std::to_string(line_no) + ": cannot parse '" + line + "'");
    };
    if (key == "SL") {
      if (!(ls >> topo.side_length)) throw fail();
    } else if (key == "source") {
      if (!(ls >> topo.source)) throw fail();
      have_source = true;
    } else if (key == "dest") {
      if (!(ls >> topo.dest)) throw fail();
      have_dest = true;
    } else if (key == "acoustic_range") {
      if (!(ls >> topo.acoustic_range)) throw fail();
    } else {
      Node n;
      std::istringstream ids(key);
      if (!(ids >> n.id) || !(ls >> n.pos.x >> n.pos.y)) throw fail();
      topo.nodes.push_back(n);
    }
  }
  if (!have_source || !have_dest) throw std::invalid_argument("topology: missing source or dest header");
  std::sort(topo.nodes.begin(), topo.nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  topo.validate();
  return topo;
}

}  // namespace sector

namespace sector {

NodeFamilies node_families(const LinkModel& link, const NetworkTopology& topo, NodeId i,
                           SearchMode mode) {
  NodeFamilies out;
  out.search_space = search_space(topo, i, mode, search_radius(topo, link));
  out.psis = pointing_angles(topo, i, out.search_space);
  out.by_psi.reserve(out.psis.size());
  for (double psi : out.psis) {
    out.by_psi.push_back(candidate_set_family(link, topo, i, psi, out.search_space));
  }
  return out;
}

}  // namespace sector
