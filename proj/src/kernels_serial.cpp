#include <algorithm>

#include "kernel_bodies.hpp"
#include "rbfplast/errors.hpp"
#include "rbfplast/kernels.hpp"

namespace rbfplast::serial {

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.cols() || y.size() != a.rows()) throw InvalidArgument("spmv: size mismatch");
  for (std::size_t r = 0; r < a.rows(); ++r) y[r] = detail::spmv_row(a, x, r);
}

void stencil_weights(std::span<const Vec2> positions, std::span<const std::size_t> stencils, std::span<const DiffOp> ops,
                     const RbfSettings& settings, WeightTable& out) {
  const std::size_t nodes = positions.size();
  const std::size_t n = nodes ? stencils.size() / nodes : 0;
  detail::prepare_weights(nodes, n, ops.size(), out);
  for (std::size_t i = 0; i < nodes; ++i) detail::node_weights(positions, stencils, ops, settings, i, out);
}

ConstitutiveStats constitutive_update(std::span<const Voigt> strains, std::span<const PointState> committed,
                                      const ElasticParams& params, const YieldCurve& curve,
                                      const ReturnMapOptions& opts, std::span<PointState> out) {
  ConstitutiveStats st;
  for (std::size_t i = 0; i < strains.size(); ++i) {
    std::string err;
    const int its = detail::node_constitutive(strains, committed, params, curve, opts, i, out, err);
    if (its > 0) ++st.plastic_points;
    st.max_local_iterations = std::max(st.max_local_iterations, its);
    if (!err.empty()) st.errors.push_back(std::move(err));
  }
  return st;
}

}  // namespace rbfplast::serial
