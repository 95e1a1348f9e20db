#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "rbfplast/execution.hpp"
#include "rbfplast/geometry.hpp"
#include "rbfplast/kdtree.hpp"
#include "rbfplast/krylov.hpp"
#include "rbfplast/material.hpp"
#include "rbfplast/operators.hpp"
#include "rbfplast/sparse.hpp"

namespace rbfplast {

// West support lives in RectangleDomain; the remaining data is the load on
// the east edge. North (and south, unless it is a symmetry line) are free.
struct BoundarySpec {
  Vec2 east_traction{30e6, 0.0};  // Pa, at full load
};

struct LoadProgram {
  int steps = 10;

  double factor(int step) const { return static_cast<double>(step) / steps; }
};

// Interior rows of the system. `direct` uses dedicated second-derivative
// stencils; `composed` chains the first-derivative operators, div(D grad u),
// which is the same discrete operator that maps nodal stress to internal force.
enum class NavierForm { direct, composed };

struct SolverSettings {
  NavierForm navier = NavierForm::composed;
  double global_tol = 1e-6;          // relative to the traction scale
  int max_global_iterations = 500;
  // Under-relaxation of the plastic strain that drives each correction solve;
  // 1 is the plain fixed-point update.
  double relaxation = 0.5;
  // Anderson mixing depth on top of the relaxation; 0 disables it.
  int mixing_depth = 5;
  double linear_tol = 1e-10;
  PreconditionerKind preconditioner = PreconditionerKind::ilut;
  ReturnMapOptions local{};
  Execution exec = Execution::parallel;
  bool throw_on_nonconvergence = false;
};

struct StepTelemetry {
  int step = 0;
  double load_factor = 0.0;
  int global_iterations = 0;
  int linear_iterations = 0;
  double residual_interior = 0.0;  // max |r| over interior rows, Pa/mm
  double residual_traction = 0.0;  // max |t - n.sigma| over traction rows, Pa
  bool converged = false;
  std::size_t plastic_points = 0;
  int max_local_iterations = 0;
};

struct GlobalState {
  std::vector<double> u;             // [u_x of all nodes, u_y of all nodes], mm
  std::vector<PointState> points;    // current iterate
  std::vector<PointState> committed; // last accepted load step
  double load_factor = 0.0;
  std::vector<StepTelemetry> history;

  double ux(std::size_t i) const { return u[i]; }
  double uy(std::size_t i) const { return u[points.size() + i]; }
};

struct ResidualNorms {
  double interior = 0.0;
  double traction = 0.0;
};

// 2N x 2N system for the Navier-Cauchy operator with boundary rows.
// Unknowns are ordered [u_x..., u_y...].
SparseMatrix assemble_system(const NodeSet& nodes, const OperatorSet& ops, const ElasticParams& params,
                             NavierForm form = NavierForm::direct);

// Engineering strain (du_x/dx, du_y/dy, du_x/dy + du_y/dx) at each node.
std::vector<Voigt> total_strain(std::span<const double> u, const OperatorSet& ops);

// div(sigma) from first-derivative operators applied to nodal stresses.
std::vector<Vec2> stress_divergence(std::span<const Voigt> stresses, const OperatorSet& ops);

class ElastoPlasticSolver {
 public:
  ElastoPlasticSolver(NodeSet nodes, ElasticParams params, YieldCurve curve, BoundarySpec bcs, RbfSettings rbf,
                      SolverSettings settings = {});

  const NodeSet& nodes() const { return nodes_; }
  const OperatorSet& operators() const { return ops_; }
  const SparseMatrix& system() const { return system_; }
  const ElasticParams& params() const { return params_; }
  const YieldCurve& curve() const { return curve_; }
  const BoundarySpec& boundary() const { return bcs_; }
  const SolverSettings& settings() const { return settings_; }

  GlobalState initial_state() const;

  // Internal force density div(sigma) at interior nodes (zero elsewhere): the
  // system's interior rows applied to u minus div(D eps^P). With the composed
  // Navier form this is the first-derivative divergence of the nodal stress.
  std::vector<Vec2> internal_force(const GlobalState& state) const;

  // Residual r = K u - b(plastic strain, load) in system row layout.
  std::vector<double> residual(const GlobalState& state, double load_factor) const;
  std::vector<double> residual(std::span<const double> u, std::span<const Voigt> plastic, double load_factor) const;
  ResidualNorms residual_norms(std::span<const double> r) const;
  bool converged(const ResidualNorms& norms) const;

  // Equilibrium iteration at a fixed load factor; commits the state on exit.
  StepTelemetry global_step(GlobalState& state, double load_factor) const;

  using StepCallback = std::function<void(int step, const GlobalState&)>;
  void run(const LoadProgram& program, GlobalState& state, const StepCallback& on_step = {}) const;

  Vec2 traction_at(std::size_t node, double load_factor) const;

 private:
  std::vector<double> solve(std::span<const double> rhs, int& iterations) const;

  NodeSet nodes_;
  ElasticParams params_;
  YieldCurve curve_;
  BoundarySpec bcs_;
  SolverSettings settings_;
  NeighborIndex index_;
  OperatorSet ops_;
  SparseMatrix system_;
  SparseMatrix scaled_system_;
  std::vector<double> row_scale_;
  std::unique_ptr<Preconditioner> preconditioner_;
  double traction_scale_ = 1.0;  // Pa
};

}  // namespace rbfplast
