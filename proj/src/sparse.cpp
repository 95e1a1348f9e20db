#include "rbfplast/sparse.hpp"

#include <algorithm>

#include "rbfplast/errors.hpp"
#include "rbfplast/kernels.hpp"

namespace rbfplast {

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets)
    if (t.row >= rows || t.col >= cols) throw InvalidArgument("SparseMatrix: triplet index out of range");

  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(rows + 1, 0);
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());

  std::size_t i = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    while (i < triplets.size() && triplets[i].row == r) {
      const std::size_t c = triplets[i].col;
      double v = 0.0;
      while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) v += triplets[i++].value;
      m.col_idx_.push_back(c);
      m.values_.push_back(v);
    }
    m.row_ptr_[r + 1] = m.col_idx_.size();
  }
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t));
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto cols = row_cols(r);
  const auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return 0.0;
  return values_[row_ptr_[r] + static_cast<std::size_t>(it - cols.begin())];
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (std::size_t r = 0; r < d.size(); ++r) d[r] = at(r, r);
  return d;
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw InvalidArgument("SparseMatrix::multiply: size mismatch");
  std::vector<double> y(rows_);
  serial::spmv(*this, x, y);
  return y;
}

}  // namespace rbfplast
