#pragma once

#include <memory>
#include <span>
#include <vector>

#include "rbfplast/execution.hpp"
#include "rbfplast/sparse.hpp"

namespace rbfplast {

class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  // out = M^{-1} in
  virtual void apply(std::span<const double> in, std::span<double> out) const = 0;
};

class IdentityPreconditioner final : public Preconditioner {
 public:
  void apply(std::span<const double> in, std::span<double> out) const override;
};

class JacobiPreconditioner final : public Preconditioner {
 public:
  explicit JacobiPreconditioner(const SparseMatrix& a);
  void apply(std::span<const double> in, std::span<double> out) const override;

 private:
  std::vector<double> inv_diag_;
};

// Incomplete LU with dual dropping (threshold relative to the row norm, fill
// factor bounding entries per row) on a fill-reducing ordering.
class IlutPreconditioner final : public Preconditioner {
 public:
  IlutPreconditioner(const SparseMatrix& a, double drop_tol = 1e-4, std::size_t fill = 20);
  ~IlutPreconditioner() override;
  void apply(std::span<const double> in, std::span<double> out) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

enum class PreconditionerKind { none, jacobi, ilut };

std::unique_ptr<Preconditioner> make_preconditioner(PreconditionerKind kind, const SparseMatrix& a);

struct KrylovOptions {
  double tol = 1e-10;   // relative residual ||Ax - b|| / ||b||
  int max_iter = 0;     // 0 selects 10 x dimension
  Execution exec = Execution::parallel;
};

struct KrylovResult {
  std::vector<double> x;
  int iterations = 0;
  double relative_residual = 0.0;
};

// Preconditioned stabilized bi-conjugate gradient. `guess` may be empty.
// Throws ConvergenceError carrying the best iterate when the budget runs out.
KrylovResult bicgstab_solve(const SparseMatrix& a, std::span<const double> b, const Preconditioner& m,
                            const KrylovOptions& opts = {}, std::span<const double> guess = {});

// Jacobi-preconditioned convenience overload.
KrylovResult bicgstab_solve(const SparseMatrix& a, std::span<const double> b, double tol = 1e-10, int max_iter = 0);

}  // namespace rbfplast
