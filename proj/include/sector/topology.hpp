#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sector/link.hpp"

namespace sector {

using NodeId = std::size_t;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double distance(const Vec2& a, const Vec2& b);

struct Node {
  NodeId id = 0;
  Vec2 pos;
};

/// Planar node layout. Ids are dense indices into `nodes`.
struct NetworkTopology {
  std::vector<Node> nodes;
  NodeId source = 0;
  NodeId dest = 0;
  double acoustic_range = 0.0;  // m; <= 0 means "same as the optical d_max"
  double side_length = 0.0;     // m; informational, carried by the file format

  const Vec2& pos(NodeId id) const { return nodes[id].pos; }
  std::size_t size() const { return nodes.size(); }
  void validate() const;
};

/// Sector-shaped optical coverage: apex at the transmitter, axis at `psi`,
/// full opening angle `theta`. The radius follows from the link budget.
struct Sector {
  Vec2 apex;
  double psi = 0.0;
  double theta = 0.0;
};

/// Angle of the vector from -> to in [0, 2 pi).
double bearing(const Vec2& from, const Vec2& to);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

struct Coverage {
  bool covered = false;
  double phi = 0.0;       // angular offset from the sector axis
  double distance = 0.0;
};

/// Whether `target` lies inside the sector: within theta/2 of the axis and no
/// farther than the link's maximum range at that divergence and offset.
Coverage covers(const LinkModel& link, const Sector& sector, const Vec2& target);

enum class SearchMode { Local, Global };

/// Nodes within `radius` of node i, excluding i. Local mode keeps only nodes
/// strictly closer to the destination than i.
std::vector<NodeId> search_space(const NetworkTopology& topo, NodeId i, SearchMode mode,
                                 double radius);

/// Radius used for search spaces: the optical d_max capped by the acoustic
/// neighbourhood.
double search_radius(const NetworkTopology& topo, const LinkModel& link);

/// Bearings from i to every search-space node, deduplicated, ascending.
std::vector<double> pointing_angles(const NetworkTopology& topo, NodeId i,
                                    const std::vector<NodeId>& ss);

struct CoveredMember {
  NodeId id = 0;
  double phi = 0.0;
  double distance = 0.0;
  double pdr = 0.0;  // at the entry's divergence
};

struct CandidateSetEntry {
  double theta = 0.0;
  std::vector<CoveredMember> members;  // ascending id
};

/// Candidate sets obtained by widening the divergence from theta_min to
/// theta_max with the axis fixed at `psi`. A breakpoint is placed wherever a
/// search-space node enters the beam; empty sets and consecutive repeats are
/// dropped (the narrowest divergence of a repeat is kept).
std::vector<CandidateSetEntry> candidate_set_family(const LinkModel& link,
                                                    const NetworkTopology& topo, NodeId i,
                                                    double psi,
                                                    const std::vector<NodeId>& ss);

/// Source at (0,0), destination at (SL,SL) and `n_nodes` uniform nodes in the
/// square. Node 0 is the source, node 1 the destination.
NetworkTopology generate_random(double side_len, std::size_t n_nodes, std::uint64_t seed,
                                double acoustic_range = 0.0);

/// Text format:
///   # comment lines are ignored
///   SL <side length>
///   source <id>
///   dest <id>
///   acoustic_range <m>        (optional)
///   <id> <x> <y>              one line per node, ids dense from 0
void write_topology(std::ostream& os, const NetworkTopology& topo);
NetworkTopology read_topology(std::istream& is);

}  // namespace sector

namespace sector {

/// Every pointing angle of node i with the candidate-set family it yields.
struct NodeFamilies {
  std::vector<NodeId> search_space;
  std::vector<double> psis;
  std::vector<std::vector<CandidateSetEntry>> by_psi;  // parallel to psis
};

NodeFamilies node_families(const LinkModel& link, const NetworkTopology& topo, NodeId i,
                           SearchMode mode);

}  // namespace sector
