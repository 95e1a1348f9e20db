#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rbfplast/phs.hpp"
#include "rbfplast/types.hpp"

namespace rbfplast {

struct RbfSettings {
  PhsBasis basis{3};
  MonomialAugmentation augmentation{2};
  std::size_t stencil_size = 50;
};

// Weights of one center node for a list of operators. The center is the
// first support node.
struct StencilWeights {
  std::size_t center = 0;
  std::vector<std::size_t> support;
  double scale = 1.0;                       // stencil radius used for normalization
  std::vector<std::vector<double>> weights;  // one vector per requested operator
};

// Solves the PHS + monomial saddle-point system for each operator in `ops`.
// Coordinates are shifted to the center and scaled by the stencil radius
// before the solve. Returns one weight vector (length support.size()) per op.
// Throws SingularMatrixError for degenerate stencil geometry.
std::vector<std::vector<double>> compute_weights(const Vec2& center, std::span<const Vec2> support,
                                                 std::span<const DiffOp> ops, const RbfSettings& settings,
                                                 double* scale_out = nullptr);

std::vector<double> compute_weights(const Vec2& center, std::span<const Vec2> support, DiffOp op,
                                    const RbfSettings& settings);

}  // namespace rbfplast
