#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rbfplast/geometry.hpp"
#include "rbfplast/kdtree.hpp"
#include "rbfplast/solver.hpp"
#include "rbfplast/types.hpp"

namespace rbfplast {

// Polyline along which fields are sampled. For a symmetry-reduced domain the
// full-domain diagonal folds onto the modeled strip; points with
// x < mirror_x then come from the reflected half and antisymmetric variables
// change sign.
struct SampleLine {
  std::vector<Vec2> vertices;
  bool reflected = false;
  double mirror_x = 0.0;

  // South-west to north-east diagonal of the full rectangle.
  static SampleLine diagonal(const RectangleDomain& domain);
  // Vertical line x = const spanning the modeled height.
  static SampleLine vertical(const RectangleDomain& domain, double x);

  double length() const;
  Vec2 at(double arc) const;
  double sign(const Vec2& p, bool antisymmetric) const {
    return (reflected && antisymmetric && p.x < mirror_x) ? -1.0 : 1.0;
  }
};

struct ShepardOptions {
  std::size_t samples = 201;
  double power = 2.0;
  double radius = 0.0;       // absolute, mm
  double coincidence = 0.0;  // distances below this return the nodal value
  bool antisymmetric = false;
};

struct LineSample {
  double arc = 0.0;
  Vec2 position;
  double value = 0.0;
};

// Inverse-distance weighted average of `field` over nodes within
// opts.radius of each sample point. Throws Error naming the sample when no
// node is in range.
std::vector<LineSample> shepard_sample(std::span<const Vec2> positions, const NeighborIndex& index,
                                       std::span<const double> field, const SampleLine& line,
                                       const ShepardOptions& opts);

// Sampled u_x, u_y, sigma_xx, sigma_yy, sigma_xy along a line, with u_y and
// sigma_xy flagged antisymmetric.
struct LineTable {
  std::vector<double> arc, x, y, ux, uy, sxx, syy, sxy;
};

LineTable sample_state(const NodeSet& nodes, const NeighborIndex& index, const GlobalState& state,
                       const SampleLine& line, std::size_t samples, double power, double radius_factor);

}  // namespace rbfplast
