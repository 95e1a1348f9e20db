#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "rbfplast/errors.hpp"
#include "rbfplast/geometry.hpp"
#include "rbfplast/material.hpp"
#include "rbfplast/solver.hpp"

using namespace rbfplast;

namespace {

YieldCurve sample_curve() { return YieldCurve({{0.0, 20e6}, {0.001, 25e6}, {0.005, 30e6}, {0.02, 40e6}}); }

ElastoPlasticSolver make_solver(double traction, NavierForm form = NavierForm::composed,
                                WestSupport west = WestSupport::clamped, Execution exec = Execution::parallel) {
  const RectangleDomain dom{10.0, 5.0, true, west};
  RbfSettings rbf;
  rbf.augmentation.degree = 3;
  SolverSettings s;
  s.navier = form;
  s.exec = exec;
  return ElastoPlasticSolver(build_node_set(dom, 10.0 / 19.0, 1), make_params(10e9, 0.4), sample_curve(),
                             {{traction, 0.0}}, rbf, s);
}

std::vector<double> linear_field(const NodeSet& ns, double a, double b, double c, double d, double e, double f) {
  const std::size_t n = ns.size();
  std::vector<double> u(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = ns.positions[i];
    u[i] = a * p.x + b * p.y + c;
    u[n + i] = d * p.x + e * p.y + f;
  }
  return u;
}

}  // namespace

TEST(System, InteriorRowsAnnihilateLinearFields) {
  for (auto form : {NavierForm::composed, NavierForm::direct}) {
    const auto s = make_solver(1e6, form);
    const auto& ns = s.nodes();
    const auto u = linear_field(ns, 1e-3, -2e-3, 0.5, 3e-3, 4e-4, -0.2);
    const auto ku = s.system().multiply(u);
    const double scale = s.params().D[0][0] * 1e-3;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      if (ns.kinds[i] != NodeKind::interior) continue;
      EXPECT_NEAR(ku[i], 0.0, 1e-6 * scale);
      EXPECT_NEAR(ku[ns.size() + i], 0.0, 1e-6 * scale);
    }
  }
}

TEST(System, DirichletRowsAreUnitRows) {
  const auto s = make_solver(1e6);
  const auto& ns = s.nodes();
  const auto& k = s.system();
  EXPECT_EQ(k.rows(), 2 * ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns.kinds[i] != NodeKind::dirichlet) continue;
    for (std::size_t r : {i, ns.size() + i}) {
      ASSERT_EQ(k.row_cols(r).size(), 1u);
      EXPECT_EQ(k.row_cols(r)[0], r);
      EXPECT_DOUBLE_EQ(k.row_values(r)[0], 1.0);
    }
  }
}

TEST(Strain, LinearAndRigidFields) {
  const auto s = make_solver(1e6);
  const auto& ns = s.nodes();
  for (const Voigt& e : total_strain(linear_field(ns, 2e-3, 0, 0, 0, 0, 0), s.operators())) {
    EXPECT_NEAR(e[0], 2e-3, 1e-12);
    EXPECT_NEAR(e[1], 0.0, 1e-12);
    EXPECT_NEAR(e[2], 0.0, 1e-12);
  }
  // small rigid rotation plus translation
  for (const Voigt& e : total_strain(linear_field(ns, 0, -1e-3, 0.1, 1e-3, 0, -0.3), s.operators()))
    for (double v : e) EXPECT_NEAR(v, 0.0, 1e-12);
  EXPECT_THROW(total_strain(std::vector<double>(3), s.operators()), InvalidArgument);
}

TEST(StressDivergence, UniformAndLinearStress) {
  const auto s = make_solver(1e6);
  const auto& ns = s.nodes();
  std::vector<Voigt> sig(ns.size(), Voigt{5e6, -2e6, 1e6});
  for (const Vec2& d : stress_divergence(sig, s.operators())) {
    EXPECT_NEAR(d.x, 0.0, 1e-3);
    EXPECT_NEAR(d.y, 0.0, 1e-3);
  }
  for (std::size_t i = 0; i < ns.size(); ++i) sig[i] = {1e6 * ns.positions[i].x, 0.0, 2e6 * ns.positions[i].x};
  for (const Vec2& d : stress_divergence(sig, s.operators())) {
    EXPECT_NEAR(d.x, 1e6, 1e-3);
    EXPECT_NEAR(d.y, 2e6, 1e-3);
  }
}

TEST(GlobalStep, ElasticLoadConvergesInOneIteration) {
  const auto s = make_solver(5e6);
  GlobalState st = s.initial_state();
  const auto tel = s.global_step(st, 1.0);
  EXPECT_TRUE(tel.converged);
  EXPECT_EQ(tel.global_iterations, 1);
  EXPECT_EQ(tel.plastic_points, 0u);
  for (const auto& p : st.points) EXPECT_EQ(p.eq_plastic_strain, 0.0);
  EXPECT_TRUE(s.converged(s.residual_norms(s.residual(st, 1.0))));
  for (std::size_t i = 0; i < s.nodes().size(); ++i)
    if (s.nodes().kinds[i] == NodeKind::dirichlet) {
      EXPECT_EQ(st.ux(i), 0.0);
      EXPECT_EQ(st.uy(i), 0.0);
    }
}

TEST(GlobalStep, ElasticResponseIsLinearInLoad) {
  const auto s = make_solver(4e6);
  GlobalState a = s.initial_state(), b = s.initial_state();
  EXPECT_EQ(s.global_step(a, 0.5).plastic_points, 0u);
  EXPECT_EQ(s.global_step(b, 1.0).plastic_points, 0u);
  double umax = 0.0;
  for (double v : b.u) umax = std::max(umax, std::abs(v));
  ASSERT_GT(umax, 0.0);
  for (std::size_t i = 0; i < a.u.size(); ++i) EXPECT_NEAR(2.0 * a.u[i], b.u[i], 1e-8 * umax);
}

TEST(GlobalStep, StepCountDoesNotMatterWhenElastic) {
  const auto s = make_solver(4e6);
  GlobalState one = s.initial_state(), ten = s.initial_state();
  s.run({1}, one);
  s.run({10}, ten);
  double umax = 0.0;
  for (double v : one.u) umax = std::max(umax, std::abs(v));
  for (std::size_t i = 0; i < one.u.size(); ++i) EXPECT_NEAR(one.u[i], ten.u[i], 1e-8 * umax);
}

TEST(GlobalStep, TractionPointsRightForPositiveLoad) {
  const auto s = make_solver(5e6);
  GlobalState st = s.initial_state();
  s.global_step(st, 1.0);
  for (std::size_t i = 0; i < s.nodes().size(); ++i)
    if (s.nodes().positions[i].x == 10.0) {
      EXPECT_GT(st.ux(i), 0.0);
    }
}

TEST(Run, PlasticLoadingConvergesAndIsIrreversible) {
  const auto s = make_solver(30e6);
  GlobalState st = s.initial_state();
  std::vector<double> prev(s.nodes().size(), 0.0);
  bool monotone = true;
  s.run({10}, st, [&](int, const GlobalState& g) {
    for (std::size_t i = 0; i < prev.size(); ++i) {
      monotone = monotone && g.points[i].eq_plastic_strain >= prev[i];
      prev[i] = g.points[i].eq_plastic_strain;
    }
  });
  EXPECT_TRUE(monotone);
  ASSERT_EQ(st.history.size(), 10u);
  for (const auto& t : st.history) EXPECT_TRUE(t.converged) << "step " << t.step;
  EXPECT_GT(st.history.back().plastic_points, 0u);
  EXPECT_TRUE(s.converged(s.residual_norms(s.residual(st, 1.0))));
  const auto c = sample_curve();
  for (const auto& p : st.points)
    EXPECT_LE(von_mises(p.stress), c.eval(p.eq_plastic_strain).stress * (1.0 + 1e-6));
}

TEST(Run, SerialAndParallelAgree) {
  const auto a = make_solver(25e6, NavierForm::composed, WestSupport::clamped, Execution::serial);
  const auto b = make_solver(25e6, NavierForm::composed, WestSupport::clamped, Execution::parallel);
  GlobalState sa = a.initial_state(), sb = b.initial_state();
  a.run({4}, sa);
  b.run({4}, sb);
  double umax = 0.0;
  for (double v : sa.u) umax = std::max(umax, std::abs(v));
  for (std::size_t i = 0; i < sa.u.size(); ++i) EXPECT_NEAR(sa.u[i], sb.u[i], 1e-10 * umax);
}

TEST(Solver, RejectsBadSettings) {
  const RectangleDomain dom{10.0, 5.0, true, WestSupport::clamped};
  SolverSettings s;
  s.relaxation = 0.0;
  EXPECT_THROW(ElastoPlasticSolver(build_node_set(dom, 10.0 / 19.0, 1), make_params(10e9, 0.4), sample_curve(), {},
                                   {}, s),
               InvalidArgument);
}
