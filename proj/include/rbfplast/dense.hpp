#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rbfplast {

// Row-major dense matrix used for the small per-stencil systems.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> data() const { return data_; }

  std::vector<double> multiply(std::span<const double> x) const;
  // Max absolute entry.
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// LU factorization with partial pivoting. Throws SingularMatrixError when a
// pivot falls below 1e-14 times the largest matrix entry.
class LuFactorization {
 public:
  explicit LuFactorization(DenseMatrix a);

  std::vector<double> solve(std::span<const double> b) const;
  std::size_t size() const { return lu_.rows(); }

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
};

std::vector<double> dense_solve(const DenseMatrix& a, std::span<const double> b);
DenseMatrix inverse(const DenseMatrix& a);

}  // namespace rbfplast
