#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

#include "kernel_bodies.hpp"
#include "rbfplast/errors.hpp"
#include "rbfplast/kernels.hpp"

namespace rbfplast {

int configure_threads_from_env() {
  if (const char* env = std::getenv("RBFPLAST_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
  return omp_get_max_threads();
}

namespace omp {

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.cols() || y.size() != a.rows()) throw InvalidArgument("spmv: size mismatch");
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) y[static_cast<std::size_t>(r)] = detail::spmv_row(a, x, static_cast<std::size_t>(r));
}

void stencil_weights(std::span<const Vec2> positions, std::span<const std::size_t> stencils, std::span<const DiffOp> ops,
                     const RbfSettings& settings, WeightTable& out) {
  const std::size_t nodes = positions.size();
  const std::size_t n = nodes ? stencils.size() / nodes : 0;
  detail::prepare_weights(nodes, n, ops.size(), out);
  const auto count = static_cast<std::ptrdiff_t>(nodes);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < count; ++i)
    detail::node_weights(positions, stencils, ops, settings, static_cast<std::size_t>(i), out);
}

ConstitutiveStats constitutive_update(std::span<const Voigt> strains, std::span<const PointState> committed,
                                      const ElasticParams& params, const YieldCurve& curve,
                                      const ReturnMapOptions& opts, std::span<PointState> out) {
  const std::size_t nodes = strains.size();
  std::vector<int> iterations(nodes, 0);
  std::vector<std::string> errors(nodes);
  const auto count = static_cast<std::ptrdiff_t>(nodes);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    iterations[k] = detail::node_constitutive(strains, committed, params, curve, opts, k, out, errors[k]);
  }
  ConstitutiveStats st;
  for (std::size_t i = 0; i < nodes; ++i) {
    if (iterations[i] > 0) ++st.plastic_points;
    st.max_local_iterations = std::max(st.max_local_iterations, iterations[i]);
    if (!errors[i].empty()) st.errors.push_back(std::move(errors[i]));
  }
  return st;
}

}  // namespace omp
}  // namespace rbfplast
