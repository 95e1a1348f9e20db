#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "rbfplast/types.hpp"

namespace rbfplast {

// Linear differential operators approximated on stencils.
enum class DiffOp { dx, dy, dxx, dyy, dxy, laplacian };

inline constexpr std::array<DiffOp, 6> kAllOps = {DiffOp::dx, DiffOp::dy, DiffOp::dxx, DiffOp::dyy, DiffOp::dxy,
                                                  DiffOp::laplacian};

const char* to_string(DiffOp op);
// Derivative order: 1 for first derivatives, 2 otherwise.
int order(DiffOp op);

// Polyharmonic spline phi(r) = r^k (odd k) or r^k log r (even k).
// Values and operator images at r = 0 are taken as 0.
struct PhsBasis {
  int k = 3;

  double eval(double r) const;
  // Operator image of x -> phi(|x - x_i|) at offset d = x - x_i.
  double apply(DiffOp op, const Vec2& d) const;
};

// Monomials x^a y^b with a + b <= degree, ordered by total degree.
struct MonomialAugmentation {
  int degree = 2;

  std::size_t count() const { return static_cast<std::size_t>((degree + 1) * (degree + 2) / 2); }
  std::vector<std::array<int, 2>> exponents() const;
};

double monomial_eval(const std::array<int, 2>& ab, const Vec2& p);
double monomial_apply(DiffOp op, const std::array<int, 2>& ab, const Vec2& p);

}  // namespace rbfplast
