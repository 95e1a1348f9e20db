#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "rbfplast/dense.hpp"
#include "rbfplast/errors.hpp"
#include "rbfplast/kdtree.hpp"
#include "rbfplast/krylov.hpp"
#include "rbfplast/sparse.hpp"

using namespace rbfplast;

namespace {

std::vector<std::size_t> brute_knn(const std::vector<Vec2>& pts, const Vec2& p, std::size_t n) {
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return squared_distance(pts[a], p) < squared_distance(pts[b], p);
  });
  idx.resize(n);
  return idx;
}

SparseMatrix laplacian_1d(std::size_t n) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i > 0) t.push_back({i, i - 1, -1.0});
    if (i + 1 < n) t.push_back({i, i + 1, -1.0});
  }
  return SparseMatrix::from_triplets(n, n, std::move(t));
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(NeighborIndex, SelfIsNearest) {
  std::vector<Vec2> pts;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) pts.push_back({0.1 * i, 0.1 * j});
  const NeighborIndex idx(pts);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(idx.query(pts[i], 1).front(), i);
}

TEST(NeighborIndex, GridNeighborsAreAxisNeighbors) {
  std::vector<Vec2> pts;
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 11; ++j) pts.push_back({0.1 * i, 0.1 * j});
  const NeighborIndex idx(pts);
  const std::size_t c = 5 * 11 + 5;
  auto q = idx.query(pts[c], 5);
  EXPECT_EQ(q.front(), c);
  for (std::size_t k = 1; k < 5; ++k) EXPECT_NEAR(distance(pts[q[k]], pts[c]), 0.1, 1e-12);
}

TEST(NeighborIndex, MatchesBruteForceOnRandomCloud) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> pts(2000);
  for (auto& p : pts) p = {u(rng), u(rng)};
  const NeighborIndex idx(pts);
  for (int t = 0; t < 50; ++t) {
    const Vec2 p{u(rng), u(rng)};
    const auto got = idx.query(p, 50);
    const auto want = brute_knn(pts, p, 50);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t k = 0; k < got.size(); ++k)
      EXPECT_DOUBLE_EQ(squared_distance(pts[got[k]], p), squared_distance(pts[want[k]], p));
    EXPECT_EQ(std::set<std::size_t>(got.begin(), got.end()).size(), got.size());
  }
}

TEST(NeighborIndex, RadiusQuery) {
  std::vector<Vec2> pts{{0, 0}, {1, 0}, {2, 0}, {0.5, 0.5}};
  const NeighborIndex idx(pts);
  auto r = idx.query_radius({0, 0}, 1.0);
  std::sort(r.begin(), r.end());
  EXPECT_EQ(r, (std::vector<std::size_t>{0, 1, 3}));
}

TEST(NeighborIndex, TooManyNeighborsThrows) {
  std::vector<Vec2> pts{{0, 0}, {1, 0}};
  const NeighborIndex idx(pts);
  EXPECT_THROW(idx.query({0, 0}, 3), InvalidArgument);
}

TEST(SparseMatrix, TripletsSumAndSort) {
  auto a = SparseMatrix::from_triplets(2, 3, {{0, 2, 1.0}, {0, 0, 2.0}, {0, 2, 3.0}, {1, 1, -1.0}});
  EXPECT_EQ(a.nonzeros(), 3u);
  EXPECT_DOUBLE_EQ(a.at(0, 2), 4.0);
  EXPECT_DOUBLE_EQ(a.at(0, 1), 0.0);
  const auto cols = a.row_cols(0);
  EXPECT_TRUE(std::is_sorted(cols.begin(), cols.end()));
  const std::vector<double> x{1.0, 2.0, 3.0};
  EXPECT_EQ(a.multiply(x), (std::vector<double>{14.0, -2.0}));
}

TEST(DenseSolve, IdentityAndDiagonal) {
  const auto i3 = DenseMatrix::identity(3);
  const std::vector<double> b{1.0, -2.0, 3.0};
  EXPECT_EQ(dense_solve(i3, b), b);
  DenseMatrix d(3, 3);
  d(0, 0) = 2.0;
  d(1, 1) = 4.0;
  d(2, 2) = -0.5;
  const auto x = dense_solve(d, b);
  EXPECT_DOUBLE_EQ(x[0], 0.5);
  EXPECT_DOUBLE_EQ(x[1], -0.5);
  EXPECT_DOUBLE_EQ(x[2], -6.0);
}

TEST(DenseSolve, RandomSaddleSizedSystem) {
  // Same size as a 50-node stencil with quadratic augmentation.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const std::size_t n = 56;
  DenseMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = g(rng);
  std::vector<double> b(n);
  for (auto& v : b) v = g(rng);
  const auto x = dense_solve(a, b);
  const auto ax = a.multiply(x);
  double bnorm = 0.0;
  for (double v : b) bnorm = std::max(bnorm, std::abs(v));
  EXPECT_LT(max_abs_diff(ax, b), 1e-9 * bnorm * a.max_abs() * n);
}

TEST(DenseSolve, SingularThrows) {
  DenseMatrix a(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  a(1, 0) = 2.0;
  a(1, 1) = 4.0;
  const std::vector<double> b{1.0, 1.0};
  EXPECT_THROW(dense_solve(a, b), SingularMatrixError);
  EXPECT_THROW(dense_solve(DenseMatrix(2, 2), b), SingularMatrixError);
}

TEST(Bicgstab, IdentityConvergesImmediately) {
  const auto a = SparseMatrix::identity(20);
  std::vector<double> b(20, 3.0);
  const auto r = bicgstab_solve(a, b);
  EXPECT_LE(r.iterations, 1);
  EXPECT_LT(max_abs_diff(r.x, b), 1e-12);
}

TEST(Bicgstab, Laplacian1dMatchesDense) {
  const std::size_t n = 50;
  const auto a = laplacian_1d(n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = std::sin(0.3 * static_cast<double>(i)) + 1.0;
  DenseMatrix d(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) d(r, c) = a.at(r, c);
  const auto want = dense_solve(d, b);
  for (auto kind : {PreconditionerKind::none, PreconditionerKind::jacobi, PreconditionerKind::ilut}) {
    const auto m = make_preconditioner(kind, a);
    const auto got = bicgstab_solve(a, b, *m, {1e-12, 0, Execution::serial});
    EXPECT_LT(max_abs_diff(got.x, want), 1e-8);
    EXPECT_LT(got.relative_residual, 1e-12);
  }
}

TEST(Bicgstab, ZeroRightHandSide) {
  const auto a = laplacian_1d(10);
  const std::vector<double> b(10, 0.0);
  const auto r = bicgstab_solve(a, b);
  EXPECT_EQ(r.iterations, 0);
  for (double v : r.x) EXPECT_EQ(v, 0.0);
}

TEST(Bicgstab, BudgetExhaustionCarriesBestIterate) {
  const auto a = laplacian_1d(200);
  const std::vector<double> b(200, 1.0);
  try {
    bicgstab_solve(a, b, IdentityPreconditioner{}, {1e-14, 3, Execution::serial});
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.best_iterate().size(), 200u);
    EXPECT_GT(e.residual(), 1e-14);
  }
}

TEST(Bicgstab, NonsymmetricWithIlut) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = 300;
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, 8.0});
    for (int k = 0; k < 6; ++k) t.push_back({i, static_cast<std::size_t>(rng() % n), u(rng)});
  }
  const auto a = SparseMatrix::from_triplets(n, n, std::move(t));
  std::vector<double> xs(n);
  for (auto& v : xs) v = u(rng);
  const auto b = a.multiply(xs);
  const IlutPreconditioner m(a);
  const auto r = bicgstab_solve(a, b, m, {1e-12, 0, Execution::parallel});
  EXPECT_LT(max_abs_diff(r.x, xs), 1e-9);
}
