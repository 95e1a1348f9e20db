#include "rbfplast/phs.hpp"

#include <cmath>

#include "rbfplast/errors.hpp"

namespace rbfplast {

const char* to_string(DiffOp op) {
  switch (op) {
    case DiffOp::dx:
      return "dx";
    case DiffOp::dy:
      return "dy";
    case DiffOp::dxx:
      return "dxx";
    case DiffOp::dyy:
      return "dyy";
    case DiffOp::dxy:
      return "dxy";
    case DiffOp::laplacian:
      return "laplacian";
  }
  return "unknown";
}

int order(DiffOp op) { return (op == DiffOp::dx || op == DiffOp::dy) ? 1 : 2; }

double PhsBasis::eval(double r) const {
  if (r <= 0.0) return 0.0;
  const double rk = std::pow(r, k);
  return (k % 2 == 1) ? rk : rk * std::log(r);
}

double PhsBasis::apply(DiffOp op, const Vec2& d) const {
  const double r2 = d.x * d.x + d.y * d.y;
  if (r2 == 0.0) return 0.0;
  const double r = std::sqrt(r2);
  // Radial derivatives expressed as g1 = phi'(r)/r and g2 = (phi'' - phi'/r)/r^2.
  double g1, g2;
  if (k % 2 == 1) {
    g1 = k * std::pow(r, k - 2);
    g2 = k * (k - 2) * std::pow(r, k - 4);
  } else {
    const double lr = std::log(r);
    g1 = std::pow(r, k - 2) * (k * lr + 1.0);
    g2 = std::pow(r, k - 4) * (k * (k - 2) * lr + 2.0 * k - 2.0);
  }
  switch (op) {
    case DiffOp::dx:
      return g1 * d.x;
    case DiffOp::dy:
      return g1 * d.y;
    case DiffOp::dxx:
      return g1 + g2 * d.x * d.x;
    case DiffOp::dyy:
      return g1 + g2 * d.y * d.y;
    case DiffOp::dxy:
      return g2 * d.x * d.y;
    case DiffOp::laplacian:
      return 2.0 * g1 + g2 * r2;
  }
  return 0.0;
}

std::vector<std::array<int, 2>> MonomialAugmentation::exponents() const {
  std::vector<std::array<int, 2>> out;
  for (int d = 0; d <= degree; ++d)
    for (int j = 0; j <= d; ++j) out.push_back({d - j, j});
  return out;
}

namespace {

// d^n/dx^n x^a evaluated at x, as coefficient * x^(a-n).
double dpow(int a, int n, double x) {
  if (n > a) return 0.0;
  double c = 1.0;
  for (int i = 0; i < n; ++i) c *= (a - i);
  return c * std::pow(x, a - n);
}

}  // namespace

double monomial_eval(const std::array<int, 2>& ab, const Vec2& p) { return std::pow(p.x, ab[0]) * std::pow(p.y, ab[1]); }

double monomial_apply(DiffOp op, const std::array<int, 2>& ab, const Vec2& p) {
  const int a = ab[0], b = ab[1];
  switch (op) {
    case DiffOp::dx:
      return dpow(a, 1, p.x) * dpow(b, 0, p.y);
    case DiffOp::dy:
      return dpow(a, 0, p.x) * dpow(b, 1, p.y);
    case DiffOp::dxx:
      return dpow(a, 2, p.x) * dpow(b, 0, p.y);
    case DiffOp::dyy:
      return dpow(a, 0, p.x) * dpow(b, 2, p.y);
    case DiffOp::dxy:
      return dpow(a, 1, p.x) * dpow(b, 1, p.y);
    case DiffOp::laplacian:
      return dpow(a, 2, p.x) * dpow(b, 0, p.y) + dpow(a, 0, p.x) * dpow(b, 2, p.y);
  }
  return 0.0;
}

}  // namespace rbfplast
