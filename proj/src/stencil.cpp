#include "rbfplast/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rbfplast/dense.hpp"
#include "rbfplast/errors.hpp"

namespace rbfplast {

std::vector<std::vector<double>> compute_weights(const Vec2& center, std::span<const Vec2> support,
                                                 std::span<const DiffOp> ops, const RbfSettings& settings,
                                                 double* scale_out) {
  const std::size_t n = support.size();
  const auto monomials = settings.augmentation.exponents();
  const std::size_t s = monomials.size();
  if (n < s) {
    std::ostringstream msg;
    msg << "compute_weights: stencil of " << n << " nodes cannot carry " << s << " monomial constraints";
    throw InvalidArgument(msg.str());
  }

  double scale = 0.0;
  for (const auto& p : support) scale = std::max(scale, distance(p, center));
  if (!(scale > 0.0)) throw SingularMatrixError("compute_weights: stencil has zero extent");

  std::vector<Vec2> local(n);
  for (std::size_t i = 0; i < n; ++i) local[i] = (support[i] - center) * (1.0 / scale);

  const std::size_t dim = n + s;
  DenseMatrix a(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = settings.basis.eval(distance(local[i], local[j]));
      a(i, j) = v;
      a(j, i) = v;
    }
    for (std::size_t m = 0; m < s; ++m) {
      const double v = monomial_eval(monomials[m], local[i]);
      a(i, n + m) = v;
      a(n + m, i) = v;
    }
  }
  const LuFactorization lu(std::move(a));

  std::vector<std::vector<double>> out;
  out.reserve(ops.size());
  std::vector<double> rhs(dim);
  const Vec2 origin{0.0, 0.0};
  for (DiffOp op : ops) {
    for (std::size_t i = 0; i < n; ++i) rhs[i] = settings.basis.apply(op, origin - local[i]);
    for (std::size_t m = 0; m < s; ++m) rhs[n + m] = monomial_apply(op, monomials[m], origin);
    auto sol = lu.solve(rhs);
    sol.resize(n);  // drop the Lagrange multipliers
    const double factor = std::pow(scale, -order(op));
    for (auto& w : sol) w *= factor;
    out.push_back(std::move(sol));
  }
  if (scale_out) *scale_out = scale;
  return out;
}

std::vector<double> compute_weights(const Vec2& center, std::span<const Vec2> support, DiffOp op,
                                    const RbfSettings& settings) {
  const DiffOp ops[] = {op};
  return std::move(compute_weights(center, support, ops, settings).front());
}

}  // namespace rbfplast
