#include "rbfplast/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Sparse>

#include "rbfplast/errors.hpp"
#include "rbfplast/kernels.hpp"

namespace rbfplast {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y, Execution exec) {
  if (exec == Execution::parallel)
    omp::spmv(a, x, y);
  else
    serial::spmv(a, x, y);
}

}  // namespace

void IdentityPreconditioner::apply(std::span<const double> in, std::span<double> out) const {
  std::copy(in.begin(), in.end(), out.begin());
}

JacobiPreconditioner::JacobiPreconditioner(const SparseMatrix& a) : inv_diag_(a.diagonal()) {
  for (auto& d : inv_diag_) d = (d != 0.0) ? 1.0 / d : 1.0;
}

void JacobiPreconditioner::apply(std::span<const double> in, std::span<double> out) const {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = inv_diag_[i] * in[i];
}

struct IlutPreconditioner::Impl {
  Eigen::IncompleteLUT<double, int> ilu;
};

IlutPreconditioner::IlutPreconditioner(const SparseMatrix& a, double drop_tol, std::size_t fill)
    : impl_(std::make_unique<Impl>()) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw InvalidArgument("IlutPreconditioner: matrix is not square");
  if (!(drop_tol >= 0.0) || fill == 0) throw InvalidArgument("IlutPreconditioner: bad drop tolerance or fill");
  std::vector<Eigen::Triplet<double, int>> trips;
  trips.reserve(a.nonzeros());
  for (std::size_t i = 0; i < n; ++i) {
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k)
      trips.emplace_back(static_cast<int>(i), static_cast<int>(cols[k]), vals[k]);
  }
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> m(static_cast<int>(n), static_cast<int>(n));
  m.setFromTriplets(trips.begin(), trips.end());
  impl_->ilu.setDroptol(drop_tol);
  impl_->ilu.setFillfactor(static_cast<int>(fill));
  impl_->ilu.compute(m);
  if (impl_->ilu.info() != Eigen::Success) throw SingularMatrixError("IlutPreconditioner: factorization failed");
}

IlutPreconditioner::~IlutPreconditioner() = default;

void IlutPreconditioner::apply(std::span<const double> in, std::span<double> out) const {
  const auto n = static_cast<Eigen::Index>(in.size());
  Eigen::Map<const Eigen::VectorXd> x(in.data(), n);
  Eigen::Map<Eigen::VectorXd> y(out.data(), n);
  y = impl_->ilu.solve(x);
}

std::unique_ptr<Preconditioner> make_preconditioner(PreconditionerKind kind, const SparseMatrix& a) {
  switch (kind) {
    case PreconditionerKind::none:
      return std::make_unique<IdentityPreconditioner>();
    case PreconditionerKind::jacobi:
      return std::make_unique<JacobiPreconditioner>(a);
    case PreconditionerKind::ilut:
      return std::make_unique<IlutPreconditioner>(a);
  }
  throw InvalidArgument("make_preconditioner: unknown kind");
}

KrylovResult bicgstab_solve(const SparseMatrix& a, std::span<const double> b, const Preconditioner& m,
                            const KrylovOptions& opts, std::span<const double> guess) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw InvalidArgument("bicgstab_solve: matrix is not square");
  if (b.size() != n) throw InvalidArgument("bicgstab_solve: right-hand side length mismatch");
  if (!guess.empty() && guess.size() != n) throw InvalidArgument("bicgstab_solve: initial guess length mismatch");
  for (double v : b)
    if (!std::isfinite(v)) throw InvalidArgument("bicgstab_solve: non-finite right-hand side");

  const int max_iter = opts.max_iter > 0 ? opts.max_iter : static_cast<int>(10 * std::max<std::size_t>(n, 1));

  KrylovResult res;
  res.x.assign(n, 0.0);
  if (!guess.empty()) std::copy(guess.begin(), guess.end(), res.x.begin());

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(res.x.begin(), res.x.end(), 0.0);
    return res;
  }
  const double target = opts.tol * bnorm;

  std::vector<double> r(n), rhat(n), p(n, 0.0), v(n, 0.0), phat(n), s(n), shat(n), t(n);
  std::vector<double> best = res.x;
  double best_res = std::numeric_limits<double>::infinity();

  const auto true_residual = [&](std::span<const double> x) {
    spmv(a, x, r, opts.exec);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    return norm2(r);
  };

  int it = 0;
  double rnorm = true_residual(res.x);
  // Restart loop: re-seeds the shadow residual after breakdown or when the
  // recurrence residual drifts from the true one.
  while (it < max_iter) {
    if (rnorm <= target) break;
    if (rnorm < best_res) {
      best_res = rnorm;
      best = res.x;
    }
    rhat = r;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    bool converged = false;

    while (it < max_iter) {
      ++it;
      const double rho_new = dot(rhat, r);
      if (rho_new == 0.0 || !std::isfinite(rho_new)) break;
      const double beta = (rho_new / rho) * (alpha / omega);
      rho = rho_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
      m.apply(p, phat);
      spmv(a, phat, v, opts.exec);
      const double rv = dot(rhat, v);
      if (rv == 0.0 || !std::isfinite(rv)) break;
      alpha = rho / rv;
      for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
      if (norm2(s) <= target) {
        for (std::size_t i = 0; i < n; ++i) res.x[i] += alpha * phat[i];
        converged = true;
        break;
      }
      m.apply(s, shat);
      spmv(a, shat, t, opts.exec);
      const double tt = dot(t, t);
      omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
      for (std::size_t i = 0; i < n; ++i) res.x[i] += alpha * phat[i] + omega * shat[i];
      for (std::size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
      const double rec = norm2(r);
      if (rec <= target) {
        converged = true;
        break;
      }
      if (rec < best_res) {
        best_res = rec;
        best = res.x;
      }
      if (omega == 0.0 || !std::isfinite(omega)) break;
    }
    rnorm = true_residual(res.x);
    if (converged && rnorm <= target) break;
  }

  res.iterations = it;
  res.relative_residual = rnorm / bnorm;
  if (rnorm > target) {
    if (rnorm < best_res) best = res.x;
    const double best_rel = std::min(rnorm, best_res) / bnorm;
    std::ostringstream msg;
    msg << "bicgstab_solve: no convergence after " << it << " iterations (relative residual " << best_rel << ")";
    throw ConvergenceError(msg.str(), std::move(best), best_rel, it);
  }
  return res;
}

KrylovResult bicgstab_solve(const SparseMatrix& a, std::span<const double> b, double tol, int max_iter) {
  const JacobiPreconditioner m(a);
  KrylovOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return bicgstab_solve(a, b, m, opts);
}

}  // namespace rbfplast
