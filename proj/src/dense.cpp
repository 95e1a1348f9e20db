#include "rbfplast/dense.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "rbfplast/errors.hpp"

namespace rbfplast {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw InvalidArgument("DenseMatrix::multiply: size mismatch");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double* row = &data_[r * cols_];
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += row[c] * x[c];
    y[r] = s;
  }
  return y;
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

LuFactorization::LuFactorization(DenseMatrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
  const std::size_t n = lu_.rows();
  if (lu_.cols() != n) throw InvalidArgument("LuFactorization: matrix is not square");
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});

  const double scale = lu_.max_abs();
  const double pivot_floor = 1e-14 * scale;
  if (n > 0 && scale == 0.0) throw SingularMatrixError("LuFactorization: zero matrix");

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      const double v = std::abs(lu_(r, k));
      if (v > best) {
        best = v;
        p = r;
      }
    }
    if (!(best > pivot_floor)) {
      std::ostringstream msg;
      msg << "LuFactorization: singular matrix (pivot " << best << " at column " << k << ", scale " << scale << ")";
      throw SingularMatrixError(msg.str());
    }
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(p, c));
      std::swap(perm_[k], perm_[p]);
    }
    const double inv = 1.0 / lu_(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = lu_(r, k) * inv;
      if (f == 0.0) continue;
      lu_(r, k) = f;
      for (std::size_t c = k + 1; c < n; ++c) lu_(r, c) -= f * lu_(k, c);
    }
  }
}

std::vector<double> LuFactorization::solve(std::span<const double> b) const {
  const std::size_t n = lu_.rows();
  if (b.size() != n) throw InvalidArgument("LuFactorization::solve: size mismatch");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t c = 0; c < i; ++c) s -= lu_(i, c) * x[c];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= lu_(i, c) * x[c];
    x[i] = s / lu_(i, i);
  }
  return x;
}

std::vector<double> dense_solve(const DenseMatrix& a, std::span<const double> b) {
  if (a.rows() != a.cols()) throw InvalidArgument("dense_solve: matrix is not square");
  if (b.size() != a.rows()) throw InvalidArgument("dense_solve: right-hand side length mismatch");
  return LuFactorization(a).solve(b);
}

DenseMatrix inverse(const DenseMatrix& a) {
  const LuFactorization lu(a);
  const std::size_t n = a.rows();
  DenseMatrix inv(n, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    e[c] = 1.0;
    const auto col = lu.solve(e);
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
    e[c] = 0.0;
  }
  return inv;
}

}  // namespace rbfplast
