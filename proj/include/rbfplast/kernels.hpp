#pragma once

// Data-parallel kernels. Each has a serial reference in `serial` and an
// OpenMP version in `omp`; both produce bitwise identical results.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rbfplast/execution.hpp"
#include "rbfplast/material.hpp"
#include "rbfplast/phs.hpp"
#include "rbfplast/sparse.hpp"
#include "rbfplast/stencil.hpp"
#include "rbfplast/types.hpp"

namespace rbfplast {

// Per-node stencil weights for a fixed operator list, stored flat:
// weights[op][node * stencil_size + j].
struct WeightTable {
  std::size_t stencil_size = 0;
  std::vector<std::vector<double>> weights;
  std::vector<double> scales;
  std::vector<std::string> errors;  // per node, empty string where the weights were computed
};

struct ConstitutiveStats {
  std::size_t plastic_points = 0;
  int max_local_iterations = 0;
  std::vector<std::string> errors;
};

namespace serial {

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

void stencil_weights(std::span<const Vec2> positions, std::span<const std::size_t> stencils, std::span<const DiffOp> ops,
                     const RbfSettings& settings, WeightTable& out);

ConstitutiveStats constitutive_update(std::span<const Voigt> strains, std::span<const PointState> committed,
                                      const ElasticParams& params, const YieldCurve& curve,
                                      const ReturnMapOptions& opts, std::span<PointState> out);

}  // namespace serial

namespace omp {

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

void stencil_weights(std::span<const Vec2> positions, std::span<const std::size_t> stencils, std::span<const DiffOp> ops,
                     const RbfSettings& settings, WeightTable& out);

ConstitutiveStats constitutive_update(std::span<const Voigt> strains, std::span<const PointState> committed,
                                      const ElasticParams& params, const YieldCurve& curve,
                                      const ReturnMapOptions& opts, std::span<PointState> out);

}  // namespace omp

}  // namespace rbfplast
