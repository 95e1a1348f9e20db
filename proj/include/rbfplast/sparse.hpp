#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rbfplast {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Compressed sparse row matrix. Immutable after construction; column indices
// within each row are sorted and unique.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Duplicate (row, col) entries are summed.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);
  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::size_t> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  std::span<const std::size_t> row_cols(std::size_t r) const {
    return {col_idx_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }

  // Entry lookup by binary search; zero when not stored.
  double at(std::size_t r, std::size_t c) const;
  std::vector<double> diagonal() const;

  // y = A x, serial reference.
  std::vector<double> multiply(std::span<const double> x) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

}  // namespace rbfplast
