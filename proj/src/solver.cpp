#include "rbfplast/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "rbfplast/errors.hpp"
#include "rbfplast/kernels.hpp"

namespace rbfplast {

namespace {

enum class RowRole { interior, dirichlet, traction, symmetry_normal, symmetry_tangent };

// Component (0 = x, 1 = y) normal to an axis-aligned symmetry edge.
int normal_component(const Vec2& n) { return std::abs(n.x) > std::abs(n.y) ? 0 : 1; }

// Anderson mixing for the fixed point x = g(x), damped by beta. depth 0 is
// plain relaxation x + beta (g - x).
class Mixer {
 public:
  Mixer(std::size_t depth, double beta) : depth_(depth), beta_(beta) {}

  void update(Eigen::VectorXd& x, const Eigen::VectorXd& g) {
    const Eigen::VectorXd f = g - x;
    if (have_prev_ && depth_ > 0) {
      dx_.push_back(x - x_prev_);
      df_.push_back(f - f_prev_);
      if (dx_.size() > depth_) {
        dx_.pop_front();
        df_.pop_front();
      }
    }
    x_prev_ = x;
    f_prev_ = f;
    have_prev_ = true;
    if (dx_.empty()) {
      x += beta_ * f;
      return;
    }
    const auto m = static_cast<Eigen::Index>(dx_.size());
    Eigen::MatrixXd dX(x.size(), m), dF(x.size(), m);
    for (Eigen::Index j = 0; j < m; ++j) {
      dX.col(j) = dx_[static_cast<std::size_t>(j)];
      dF.col(j) = df_[static_cast<std::size_t>(j)];
    }
    const Eigen::VectorXd gamma = dF.completeOrthogonalDecomposition().solve(f);
    x += beta_ * f - (dX + beta_ * dF) * gamma;
  }

 private:
  std::size_t depth_;
  double beta_;
  bool have_prev_ = false;
  Eigen::VectorXd x_prev_, f_prev_;
  std::deque<Eigen::VectorXd> dx_, df_;
};

}  // namespace

namespace {

// Rows of div(D grad u) at node i built by chaining first-derivative stencils.
void composed_navier_rows(std::size_t i, const OperatorSet& ops, const Mat3& D, std::size_t N,
                          std::vector<double>& acc, std::vector<char>& mark, std::vector<std::size_t>& cols,
                          std::vector<Triplet>& out) {
  const auto si = ops.stencil(i);
  const auto wxi = ops.weights(DiffOp::dx, i);
  const auto wyi = ops.weights(DiffOp::dy, i);
  for (int comp = 0; comp < 2; ++comp) {
    cols.clear();
    for (std::size_t a = 0; a < si.size(); ++a) {
      const std::size_t j = si[a];
      // Row weights on (sxx, syy, sxy) at node j, then pulled back through D.
      const Voigt c = comp == 0 ? Voigt{wxi[a], 0.0, wyi[a]} : Voigt{0.0, wyi[a], wxi[a]};
      Voigt t{};
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) t[q] += c[p] * D[p][q];
      const auto sj = ops.stencil(j);
      const auto wxj = ops.weights(DiffOp::dx, j);
      const auto wyj = ops.weights(DiffOp::dy, j);
      for (std::size_t b = 0; b < sj.size(); ++b) {
        const std::size_t k = sj[b];
        const double cx = t[0] * wxj[b] + t[2] * wyj[b];
        const double cy = t[1] * wyj[b] + t[2] * wxj[b];
        for (const auto& [col, v] : {std::pair{k, cx}, std::pair{N + k, cy}}) {
          if (!mark[col]) {
            mark[col] = 1;
            acc[col] = 0.0;
            cols.push_back(col);
          }
          acc[col] += v;
        }
      }
    }
    const std::size_t row = comp == 0 ? i : N + i;
    for (std::size_t col : cols) {
      if (acc[col] != 0.0) out.push_back({row, col, acc[col]});
      mark[col] = 0;
    }
  }
}

}  // namespace

SparseMatrix assemble_system(const NodeSet& nodes, const OperatorSet& ops, const ElasticParams& params,
                             NavierForm form) {
  const std::size_t N = nodes.size();
  if (ops.node_count() != N) throw InvalidArgument("assemble_system: operators do not match node set");
  const double mu = params.mu;
  const double lb = params.lambda_bar();
  const auto& D = params.D;
  std::vector<Triplet> t;
  t.reserve(2 * N * 3 * ops.stencil_size());

  const auto add = [&](std::size_t row, std::size_t comp, DiffOp op, std::size_t node, double coeff) {
    if (coeff == 0.0) return;
    const auto st = ops.stencil(node);
    const auto w = ops.weights(op, node);
    for (std::size_t j = 0; j < st.size(); ++j) t.push_back({row, comp * N + st[j], coeff * w[j]});
  };

  std::vector<double> acc;
  std::vector<char> mark;
  std::vector<std::size_t> cols;
  if (form == NavierForm::composed) {
    acc.assign(2 * N, 0.0);
    mark.assign(2 * N, 0);
  }

  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t rx = i, ry = N + i;
    const Vec2 n = nodes.normals[i];
    switch (nodes.kinds[i]) {
      case NodeKind::interior:
        if (form == NavierForm::composed) {
          composed_navier_rows(i, ops, D, N, acc, mark, cols, t);
          break;
        }
        add(rx, 0, DiffOp::dxx, i, lb + 2.0 * mu);
        add(rx, 0, DiffOp::dyy, i, mu);
        add(rx, 1, DiffOp::dxy, i, lb + mu);
        add(ry, 0, DiffOp::dxy, i, lb + mu);
        add(ry, 1, DiffOp::dxx, i, mu);
        add(ry, 1, DiffOp::dyy, i, lb + 2.0 * mu);
        break;
      case NodeKind::dirichlet:
        t.push_back({rx, i, 1.0});
        t.push_back({ry, N + i, 1.0});
        break;
      case NodeKind::traction:
        // x: nx sxx + ny sxy; y: nx sxy + ny syy, with sigma = D eps(u).
        add(rx, 0, DiffOp::dx, i, n.x * D[0][0]);
        add(rx, 1, DiffOp::dy, i, n.x * D[0][1]);
        add(rx, 0, DiffOp::dy, i, n.y * D[2][2]);
        add(rx, 1, DiffOp::dx, i, n.y * D[2][2]);
        add(ry, 0, DiffOp::dy, i, n.x * D[2][2]);
        add(ry, 1, DiffOp::dx, i, n.x * D[2][2]);
        add(ry, 0, DiffOp::dx, i, n.y * D[1][0]);
        add(ry, 1, DiffOp::dy, i, n.y * D[1][1]);
        break;
      case NodeKind::symmetry: {
        const int c = normal_component(n);
        const std::size_t rn = c == 0 ? rx : ry;
        const std::size_t rt = c == 0 ? ry : rx;
        t.push_back({rn, static_cast<std::size_t>(c) * N + i, 1.0});
        // Tangential component has zero normal derivative.
        const std::size_t tc = c == 0 ? 1 : 0;
        add(rt, tc, DiffOp::dx, i, n.x);
        add(rt, tc, DiffOp::dy, i, n.y);
        break;
      }
    }
  }
  return SparseMatrix::from_triplets(2 * N, 2 * N, std::move(t));
}

std::vector<Voigt> total_strain(std::span<const double> u, const OperatorSet& ops) {
  const std::size_t N = ops.node_count();
  if (u.size() != 2 * N) throw InvalidArgument("total_strain: displacement length mismatch");
  const auto ux = u.subspan(0, N);
  const auto uy = u.subspan(N, N);
  const auto uxx = ops.apply(DiffOp::dx, ux);
  const auto uxy = ops.apply(DiffOp::dy, ux);
  const auto uyx = ops.apply(DiffOp::dx, uy);
  const auto uyy = ops.apply(DiffOp::dy, uy);
  std::vector<Voigt> eps(N);
  for (std::size_t i = 0; i < N; ++i) eps[i] = {uxx[i], uyy[i], uxy[i] + uyx[i]};
  return eps;
}

std::vector<Vec2> stress_divergence(std::span<const Voigt> stresses, const OperatorSet& ops) {
  const std::size_t N = ops.node_count();
  if (stresses.size() != N) throw InvalidArgument("stress_divergence: field length mismatch");
  std::vector<double> sxx(N), syy(N), sxy(N);
  for (std::size_t i = 0; i < N; ++i) {
    sxx[i] = stresses[i][0];
    syy[i] = stresses[i][1];
    sxy[i] = stresses[i][2];
  }
  const auto a = ops.apply(DiffOp::dx, sxx);
  const auto b = ops.apply(DiffOp::dy, sxy);
  const auto c = ops.apply(DiffOp::dx, sxy);
  const auto d = ops.apply(DiffOp::dy, syy);
  std::vector<Vec2> f(N);
  for (std::size_t i = 0; i < N; ++i) f[i] = {a[i] + b[i], c[i] + d[i]};
  return f;
}

ElastoPlasticSolver::ElastoPlasticSolver(NodeSet nodes, ElasticParams params, YieldCurve curve, BoundarySpec bcs,
                                         RbfSettings rbf, SolverSettings settings)
    : nodes_(std::move(nodes)),
      params_(std::move(params)),
      curve_(std::move(curve)),
      bcs_(bcs),
      settings_(settings),
      index_(nodes_.positions) {
  if (!(settings_.relaxation > 0.0 && settings_.relaxation <= 1.0))
    throw InvalidArgument("ElastoPlasticSolver: relaxation must lie in (0, 1]");
  if (settings_.mixing_depth < 0) throw InvalidArgument("ElastoPlasticSolver: mixing depth must be non-negative");
  if (!(settings_.global_tol > 0.0)) throw InvalidArgument("ElastoPlasticSolver: global tolerance must be positive");
  if (settings_.max_global_iterations < 1) throw InvalidArgument("ElastoPlasticSolver: max_global_iterations < 1");
  ops_ = assemble_operators(nodes_.positions, index_, rbf, settings_.exec);
  system_ = assemble_system(nodes_, ops_, params_, settings_.navier);

  // Row equilibration: every row scaled to unit max-norm before the Krylov solve.
  row_scale_.assign(system_.rows(), 1.0);
  std::vector<Triplet> t;
  t.reserve(system_.nonzeros());
  for (std::size_t r = 0; r < system_.rows(); ++r) {
    double m = 0.0;
    for (double v : system_.row_values(r)) m = std::max(m, std::abs(v));
    row_scale_[r] = m > 0.0 ? 1.0 / m : 1.0;
    const auto cols = system_.row_cols(r);
    const auto vals = system_.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) t.push_back({r, cols[k], vals[k] * row_scale_[r]});
  }
  scaled_system_ = SparseMatrix::from_triplets(system_.rows(), system_.cols(), std::move(t));
  preconditioner_ = make_preconditioner(settings_.preconditioner, scaled_system_);

  traction_scale_ = norm(bcs_.east_traction);
  if (!(traction_scale_ > 0.0)) traction_scale_ = curve_.initial_yield();
}

GlobalState ElastoPlasticSolver::initial_state() const {
  GlobalState s;
  s.u.assign(2 * nodes_.size(), 0.0);
  s.points.assign(nodes_.size(), PointState{});
  s.committed = s.points;
  return s;
}

Vec2 ElastoPlasticSolver::traction_at(std::size_t node, double load_factor) const {
  if (nodes_.kinds[node] == NodeKind::traction && (nodes_.edges[node] & kEast) && !nodes_.is_corner(node))
    return bcs_.east_traction * load_factor;
  return {0.0, 0.0};
}

std::vector<Vec2> ElastoPlasticSolver::internal_force(const GlobalState& state) const {
  const std::size_t N = nodes_.size();
  std::vector<double> ku(2 * N);
  if (settings_.exec == Execution::parallel)
    omp::spmv(system_, state.u, ku);
  else
    serial::spmv(system_, state.u, ku);
  std::vector<Voigt> plastic_stress(N);
  for (std::size_t i = 0; i < N; ++i) plastic_stress[i] = params_.D * state.points[i].plastic_strain;
  const auto dq = stress_divergence(plastic_stress, ops_);
  std::vector<Vec2> f(N);
  for (std::size_t i = 0; i < N; ++i) {
    if (nodes_.kinds[i] != NodeKind::interior) continue;
    f[i] = {ku[i] - dq[i].x, ku[N + i] - dq[i].y};
  }
  return f;
}

std::vector<double> ElastoPlasticSolver::residual(const GlobalState& state, double load_factor) const {
  std::vector<Voigt> plastic(state.points.size());
  for (std::size_t i = 0; i < plastic.size(); ++i) plastic[i] = state.points[i].plastic_strain;
  return residual(state.u, plastic, load_factor);
}

std::vector<double> ElastoPlasticSolver::residual(std::span<const double> u, std::span<const Voigt> plastic,
                                                  double load_factor) const {
  const std::size_t N = nodes_.size();
  if (u.size() != 2 * N || plastic.size() != N) throw InvalidArgument("residual: field length mismatch");
  std::vector<double> r(2 * N);
  if (settings_.exec == Execution::parallel)
    omp::spmv(system_, u, r);
  else
    serial::spmv(system_, u, r);

  std::vector<Voigt> plastic_stress(N);
  for (std::size_t i = 0; i < N; ++i) plastic_stress[i] = params_.D * plastic[i];
  const auto dq = stress_divergence(plastic_stress, ops_);
  for (std::size_t i = 0; i < N; ++i) {
    switch (nodes_.kinds[i]) {
      case NodeKind::interior:
        r[i] -= dq[i].x;
        r[N + i] -= dq[i].y;
        break;
      case NodeKind::traction: {
        const Vec2 n = nodes_.normals[i];
        const Voigt& q = plastic_stress[i];
        const Vec2 t = traction_at(i, load_factor);
        r[i] -= t.x + n.x * q[0] + n.y * q[2];
        r[N + i] -= t.y + n.x * q[2] + n.y * q[1];
        break;
      }
      case NodeKind::dirichlet:
      case NodeKind::symmetry:
        break;
    }
  }
  return r;
}

ResidualNorms ElastoPlasticSolver::residual_norms(std::span<const double> r) const {
  const std::size_t N = nodes_.size();
  ResidualNorms n;
  for (std::size_t i = 0; i < N; ++i) {
    const double m = std::max(std::abs(r[i]), std::abs(r[N + i]));
    if (nodes_.kinds[i] == NodeKind::interior) n.interior = std::max(n.interior, m);
    if (nodes_.kinds[i] == NodeKind::traction) n.traction = std::max(n.traction, m);
  }
  return n;
}

bool ElastoPlasticSolver::converged(const ResidualNorms& norms) const {
  const double tol = settings_.global_tol * traction_scale_;
  return norms.interior <= tol / nodes_.domain.length && norms.traction <= tol;
}

std::vector<double> ElastoPlasticSolver::solve(std::span<const double> rhs, int& iterations) const {
  std::vector<double> b(rhs.size());
  for (std::size_t r = 0; r < rhs.size(); ++r) b[r] = rhs[r] * row_scale_[r];
  KrylovOptions opts;
  opts.tol = settings_.linear_tol;
  opts.exec = settings_.exec;
  auto res = bicgstab_solve(scaled_system_, b, *preconditioner_, opts);
  iterations += res.iterations;
  return std::move(res.x);
}

StepTelemetry ElastoPlasticSolver::global_step(GlobalState& state, double load_factor) const {
  const std::size_t N = nodes_.size();
  const double omega = settings_.relaxation;
  StepTelemetry tel;
  tel.load_factor = load_factor;

  // Plastic strain seen by the right-hand side; trails the return-map output.
  std::vector<Voigt> driving(N);
  for (std::size_t i = 0; i < N; ++i) driving[i] = state.points[i].plastic_strain;
  Mixer mixer(static_cast<std::size_t>(settings_.mixing_depth), omega);
  Eigen::VectorXd x(static_cast<Eigen::Index>(3 * N)), g(static_cast<Eigen::Index>(3 * N));

  for (int k = 0;; ++k) {
    const auto r = residual(state, load_factor);
    const ResidualNorms norms = residual_norms(r);
    tel.residual_interior = norms.interior;
    tel.residual_traction = norms.traction;
    if (converged(norms)) {
      tel.converged = true;
      break;
    }
    if (k >= settings_.max_global_iterations) break;

    std::vector<double> rhs = k == 0 ? r : residual(state.u, driving, load_factor);
    for (double& v : rhs) v = -v;
    const auto du = solve(rhs, tel.linear_iterations);
    for (std::size_t i = 0; i < du.size(); ++i) state.u[i] += du[i];
    // Identity rows hold their prescribed zero exactly.
    for (std::size_t i = 0; i < N; ++i) {
      if (nodes_.kinds[i] == NodeKind::dirichlet) {
        state.u[i] = 0.0;
        state.u[N + i] = 0.0;
      } else if (nodes_.kinds[i] == NodeKind::symmetry) {
        state.u[normal_component(nodes_.normals[i]) == 0 ? i : N + i] = 0.0;
      }
    }
    ++tel.global_iterations;

    const auto strains = total_strain(state.u, ops_);
    const ConstitutiveStats cs =
        settings_.exec == Execution::parallel
            ? omp::constitutive_update(strains, state.committed, params_, curve_, settings_.local, state.points)
            : serial::constitutive_update(strains, state.committed, params_, curve_, settings_.local, state.points);
    if (!cs.errors.empty()) throw Error("constitutive update failed at " + cs.errors.front());
    tel.plastic_points = cs.plastic_points;
    tel.max_local_iterations = std::max(tel.max_local_iterations, cs.max_local_iterations);

    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t c = 0; c < 3; ++c) {
        x[static_cast<Eigen::Index>(3 * i + c)] = driving[i][c];
        g[static_cast<Eigen::Index>(3 * i + c)] = state.points[i].plastic_strain[c];
      }
    }
    mixer.update(x, g);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t c = 0; c < 3; ++c) driving[i][c] = x[static_cast<Eigen::Index>(3 * i + c)];
  }

  state.committed = state.points;
  state.load_factor = load_factor;
  tel.step = static_cast<int>(state.history.size()) + 1;
  state.history.push_back(tel);

  if (!tel.converged && settings_.throw_on_nonconvergence) {
    std::ostringstream msg;
    msg << "global_step: no equilibrium after " << tel.global_iterations << " iterations at load factor " << load_factor
        << " (interior residual " << tel.residual_interior << ", traction residual " << tel.residual_traction << ")";
    throw ConvergenceError(msg.str(), state.u, tel.residual_interior, tel.global_iterations);
  }
  return tel;
}

void ElastoPlasticSolver::run(const LoadProgram& program, GlobalState& state, const StepCallback& on_step) const {
  if (program.steps < 1) throw InvalidArgument("run: at least one load step required");
  for (int s = 1; s <= program.steps; ++s) {
    global_step(state, program.factor(s));
    if (on_step) on_step(s, state);
  }
}

}  // namespace rbfplast
