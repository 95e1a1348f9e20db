#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rbfplast/types.hpp"

namespace rbfplast {

enum class WestSupport {
  clamped,  // u = (0, 0)
  roller,   // u_x = 0, zero shear traction
};

// Axis-aligned rectangle [0, L] x [0, Hd]. With symmetry_reduced only the
// strip [0, L] x [0, Hd/2] is modeled and y = 0 is a symmetry line.
struct RectangleDomain {
  double length = 10.0;  // mm
  double height = 5.0;   // mm
  bool symmetry_reduced = false;
  WestSupport west = WestSupport::clamped;

  double modeled_height() const { return symmetry_reduced ? 0.5 * height : height; }
  void validate() const;
  bool operator==(const RectangleDomain&) const = default;
};

enum class NodeKind : std::uint8_t { interior, dirichlet, traction, symmetry };

const char* to_string(NodeKind kind);

// Edge membership flags stored per node.
enum EdgeBit : std::uint8_t { kWest = 1, kEast = 2, kSouth = 4, kNorth = 8 };

struct NodeSet {
  RectangleDomain domain;
  double h = 0.0;  // target spacing, mm
  std::vector<Vec2> positions;
  std::vector<NodeKind> kinds;
  std::vector<Vec2> normals;          // zero for interior nodes
  std::vector<std::uint8_t> edges;    // EdgeBit mask, 0 for interior nodes

  std::size_t size() const { return positions.size(); }
  bool is_boundary(std::size_t i) const { return edges[i] != 0; }
  bool is_corner(std::size_t i) const;
  void push_back(const Vec2& p, std::uint8_t edge_mask);
  NodeSet subset(const std::vector<std::size_t>& keep) const;
};

struct SpacingStats {
  double min = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
};

// Nearest-neighbor distance statistics over all nodes.
SpacingStats nearest_neighbor_stats(const std::vector<Vec2>& positions);

// Boundary edges are discretized first at spacing close to h, then the
// interior is filled by an advancing front of Poisson-disk candidates.
// Deterministic for a fixed seed.
NodeSet fill_rectangle(const RectangleDomain& domain, double h, std::uint64_t seed);

// Repulsion smoothing of interior nodes; boundary nodes never move. An
// iteration that would worsen spacing uniformity is rejected and retried
// with a smaller step.
NodeSet relax(NodeSet nodes, int iterations = 20);

// Labels boundary nodes and sets outward normals from their position.
NodeSet classify_boundary(NodeSet nodes, const RectangleDomain& domain);

// Drops corner nodes that are not owned by a Dirichlet edge.
NodeSet remove_traction_corners(const NodeSet& nodes);

// fill -> relax -> classify -> corner removal.
NodeSet build_node_set(const RectangleDomain& domain, double h, std::uint64_t seed, int relax_iterations = 20);

}  // namespace rbfplast
