#pragma once

// Per-item loop bodies shared by the serial and OpenMP kernel drivers.

#include <exception>
#include <sstream>
#include <string>

#include "rbfplast/kernels.hpp"

namespace rbfplast::detail {

inline double spmv_row(const SparseMatrix& a, std::span<const double> x, std::size_t r) {
  const auto cols = a.row_cols(r);
  const auto vals = a.row_values(r);
  double s = 0.0;
  for (std::size_t k = 0; k < cols.size(); ++k) s += vals[k] * x[cols[k]];
  return s;
}

inline void prepare_weights(std::size_t nodes, std::size_t n, std::size_t nops, WeightTable& out) {
  out.stencil_size = n;
  out.weights.assign(nops, std::vector<double>(nodes * n, 0.0));
  out.scales.assign(nodes, 0.0);
  out.errors.assign(nodes, std::string());
}

inline void node_weights(std::span<const Vec2> positions, std::span<const std::size_t> stencils,
                         std::span<const DiffOp> ops, const RbfSettings& settings, std::size_t i, WeightTable& out) {
  const std::size_t n = out.stencil_size;
  std::vector<Vec2> support(n);
  for (std::size_t j = 0; j < n; ++j) support[j] = positions[stencils[i * n + j]];
  try {
    double scale = 0.0;
    const auto w = compute_weights(positions[i], support, ops, settings, &scale);
    for (std::size_t o = 0; o < ops.size(); ++o)
      for (std::size_t j = 0; j < n; ++j) out.weights[o][i * n + j] = w[o][j];
    out.scales[i] = scale;
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "node " << i << " at (" << positions[i].x << ", " << positions[i].y << "): " << e.what();
    out.errors[i] = msg.str();
  }
}

inline int node_constitutive(std::span<const Voigt> strains, std::span<const PointState> committed,
                             const ElasticParams& params, const YieldCurve& curve, const ReturnMapOptions& opts,
                             std::size_t i, std::span<PointState> out, std::string& error) {
  try {
    return constitutive_update(strains[i], committed[i], params, curve, opts, out[i]);
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "node " << i << ": " << e.what();
    error = msg.str();
    out[i] = trial_state(strains[i], committed[i], params);
    return 0;
  }
}

}  // namespace rbfplast::detail
