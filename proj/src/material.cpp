#include "rbfplast/material.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rbfplast/dense.hpp"
#include "rbfplast/errors.hpp"

namespace rbfplast {

ElasticParams make_params(double E, double nu) {
  if (!(E > 0.0)) throw InvalidArgument("make_params: Young's modulus must be positive");
  if (!(nu >= 0.0 && nu < 0.5)) throw InvalidArgument("make_params: Poisson's ratio must lie in [0, 0.5)");

  ElasticParams p;
  p.E = E;
  p.nu = nu;
  p.lambda = E * nu / ((1.0 - 2.0 * nu) * (1.0 + nu));
  p.mu = E / (2.0 * (1.0 + nu));
  const double lb = p.lambda_bar();
  p.D = {{{2.0 * p.mu + lb, lb, 0.0}, {lb, 2.0 * p.mu + lb, 0.0}, {0.0, 0.0, p.mu}}};

  DenseMatrix d(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) d(i, j) = p.D[i][j];
  const DenseMatrix inv = inverse(d);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) p.D_inv[i][j] = inv(i, j);
  return p;
}

YieldCurve::YieldCurve(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw InvalidArgument("YieldCurve: at least one knot required");
  if (knots_.front().first != 0.0) throw InvalidArgument("YieldCurve: first knot must be at zero plastic strain");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!(knots_[i].second > 0.0)) {
      std::ostringstream msg;
      msg << "YieldCurve: knot " << i << " has nonpositive yield stress";
      throw InvalidArgument(msg.str());
    }
    if (i == 0) continue;
    if (!(knots_[i].first > knots_[i - 1].first)) {
      std::ostringstream msg;
      msg << "YieldCurve: knot " << i << " abscissa is not strictly increasing";
      throw InvalidArgument(msg.str());
    }
    if (knots_[i].second < knots_[i - 1].second) {
      std::ostringstream msg;
      msg << "YieldCurve: knot " << i << " yield stress decreases";
      throw InvalidArgument(msg.str());
    }
  }
}

YieldPoint YieldCurve::eval(double eps) const {
  if (eps < 0.0) throw InvalidArgument("YieldCurve::eval: negative equivalent plastic strain");
  if (eps >= knots_.back().first) return {knots_.back().second, 0.0};
  // First knot strictly to the right of eps.
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), eps,
                                   [](double e, const std::pair<double, double>& k) { return e < k.first; });
  const auto& [x1, y1] = *it;
  const auto& [x0, y0] = *(it - 1);
  const double slope = (y1 - y0) / (x1 - x0);
  return {y0 + slope * (eps - x0), slope};
}

const Mat3& projection_matrix() {
  static const Mat3 p = {{{2.0 / 3.0, -1.0 / 3.0, 0.0}, {-1.0 / 3.0, 2.0 / 3.0, 0.0}, {0.0, 0.0, 2.0}}};
  return p;
}

double xi(const Voigt& s) {
  const Voigt ps = projection_matrix() * s;
  return s[0] * ps[0] + s[1] * ps[1] + s[2] * ps[2];
}

double von_mises(const Voigt& s) { return std::sqrt(1.5 * std::max(0.0, xi(s))); }

double phi(const Voigt& s, double eps, const YieldCurve& curve) {
  const double sy = curve.eval(eps).stress;
  return 0.5 * xi(s) - sy * sy / 3.0;
}

namespace {

struct TrialInvariants {
  double sum2;    // (sxx + syy)^2
  double shear2;  // (syy - sxx)^2 + 4 sxy^2
};

TrialInvariants invariants(const Voigt& t) {
  const double s = t[0] + t[1];
  const double d = t[1] - t[0];
  return {s * s, d * d + 4.0 * t[2] * t[2]};
}

double volumetric_rate(const ElasticParams& p) { return p.E / (3.0 * (1.0 - p.nu)); }

}  // namespace

double xi_at(const Voigt& trial, double dgamma, const ElasticParams& params) {
  const auto [sum2, shear2] = invariants(trial);
  const double fv = 1.0 + volumetric_rate(params) * dgamma;
  const double fs = 1.0 + 2.0 * params.mu * dgamma;
  return sum2 / (6.0 * fv * fv) + shear2 / (2.0 * fs * fs);
}

double xi_prime(const Voigt& trial, double dgamma, const ElasticParams& params) {
  const auto [sum2, shear2] = invariants(trial);
  const double fv = 1.0 + volumetric_rate(params) * dgamma;
  const double fs = 1.0 + 2.0 * params.mu * dgamma;
  return -sum2 / (9.0 * fv * fv * fv) * params.E / (1.0 - params.nu) - 2.0 * params.mu * shear2 / (fs * fs * fs);
}

double hardened_strain(const Voigt& trial, double dgamma, double eps, const ElasticParams& params) {
  return eps + dgamma * std::sqrt(2.0 * xi_at(trial, dgamma, params) / 3.0);
}

double h_prime(const Voigt& trial, double dgamma, double eps, const ElasticParams& params, const YieldCurve& curve) {
  const double x = xi_at(trial, dgamma, params);
  if (!(x > 0.0)) throw InvalidArgument("h_prime: xi vanishes (stress-free return map)");
  const double xp = xi_prime(trial, dgamma, params);
  const double sq = std::sqrt(x);
  const YieldPoint y = curve.eval(eps + dgamma * std::sqrt(2.0 * x / 3.0));
  return 2.0 * std::sqrt(2.0 / 3.0) * y.slope * (sq + dgamma * xp / (2.0 * sq)) * y.stress;
}

double phi_at(const Voigt& trial, double dgamma, double eps, const ElasticParams& params, const YieldCurve& curve) {
  const double x = xi_at(trial, dgamma, params);
  const double sy = curve.eval(eps + dgamma * std::sqrt(2.0 * x / 3.0)).stress;
  return 0.5 * x - sy * sy / 3.0;
}

double phi_prime(const Voigt& trial, double dgamma, double eps, const ElasticParams& params, const YieldCurve& curve) {
  return 0.5 * xi_prime(trial, dgamma, params) - h_prime(trial, dgamma, eps, params, curve) / 3.0;
}

Mat3 a_matrix(double dgamma, const ElasticParams& params) {
  const double a1 = (1.0 - params.nu) / (1.0 - params.nu + params.E * dgamma / 3.0);
  const double a2 = 1.0 / (1.0 + 2.0 * params.mu * dgamma);
  return {{{0.5 * (a1 + a2), 0.5 * (a1 - a2), 0.0}, {0.5 * (a1 - a2), 0.5 * (a1 + a2), 0.0}, {0.0, 0.0, a2}}};
}

PointState trial_state(const Voigt& strain, const PointState& committed, const ElasticParams& params) {
  PointState t = committed;
  t.strain = strain;
  t.elastic_strain = strain - committed.plastic_strain;
  t.stress = params.D * t.elastic_strain;
  return t;
}

ReturnMapResult return_map(const PointState& trial, const ElasticParams& params, const YieldCurve& curve,
                           const ReturnMapOptions& opts) {
  const Voigt& st = trial.stress;
  const double eps0 = trial.eq_plastic_strain;
  const double sy0 = curve.initial_yield();
  const double tol = opts.tol_factor * sy0 * sy0;

  const double phi0 = phi_at(st, 0.0, eps0, params, curve);
  if (!(phi0 > 0.0)) throw InvalidArgument("return_map: trial stress is not outside the yield surface");

  ReturnMapResult res;
  // Bracket [lo, hi] with phi(lo) > 0 > phi(hi); hi unknown until found.
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double dg = 0.0;
  double f = phi0;
  bool done = false;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    const double fp = phi_prime(st, dg, eps0, params, curve);
    if (fp == 0.0) {
      std::ostringstream msg;
      msg << "return_map: degenerate Newton step (dgamma " << dg << ", Phi " << f << ")";
      throw Error(msg.str());
    }
    double next = dg - f / fp;
    const bool outside = !std::isfinite(next) || next <= lo || next >= hi;
    if (outside) {
      if (!std::isfinite(hi)) {
        // Newton left the admissible half-line; grow an upper bracket instead.
        next = (dg > 0.0 ? 2.0 * dg : 1.0 / (2.0 * params.mu));
      } else {
        next = 0.5 * (lo + hi);
        res.bisection = true;
      }
    }
    const double step = next - dg;
    dg = next;
    f = phi_at(st, dg, eps0, params, curve);
    if (f > 0.0)
      lo = std::max(lo, dg);
    else
      hi = std::min(hi, dg);
    if (std::abs(f) < tol && std::abs(step) <= 1e-12 * dg) {
      done = true;
      ++it;
      break;
    }
    if (std::isfinite(hi) && hi - lo <= 1e-15 * hi && std::abs(f) < tol) {
      done = true;
      ++it;
      break;
    }
  }
  if (!done && !(std::abs(f) < tol)) {
    // Pure bisection on the bracket as a last resort.
    res.bisection = true;
    if (!std::isfinite(hi)) {
      hi = std::max(dg, 1.0 / (2.0 * params.mu));
      while (phi_at(st, hi, eps0, params, curve) > 0.0) hi *= 2.0;
    }
    for (int k = 0; k < 200 && !(std::abs(f) < tol && hi - lo <= 1e-14 * hi); ++k, ++it) {
      dg = 0.5 * (lo + hi);
      f = phi_at(st, dg, eps0, params, curve);
      (f > 0.0 ? lo : hi) = dg;
    }
    if (!(std::abs(f) < tol)) {
      std::ostringstream msg;
      msg << "return_map: no convergence (dgamma " << dg << ", Phi " << f << ")";
      throw Error(msg.str());
    }
  }

  const double x = xi_at(st, dg, params);
  PointState& out = res.state;
  out = trial;
  out.stress = a_matrix(dg, params) * st;
  out.elastic_strain = params.D_inv * out.stress;
  out.eq_plastic_strain = eps0 + dg * std::sqrt(2.0 * x / 3.0);
  out.plastic_strain = trial.plastic_strain + dg * (projection_matrix() * out.stress);
  res.dgamma = dg;
  res.iterations = it;
  return res;
}

int constitutive_update(const Voigt& strain, const PointState& committed, const ElasticParams& params,
                        const YieldCurve& curve, const ReturnMapOptions& opts, PointState& out) {
  PointState t = trial_state(strain, committed, params);
  if (!(phi_at(t.stress, 0.0, t.eq_plastic_strain, params, curve) > 0.0)) {
    out = t;
    return 0;
  }
  const ReturnMapResult r = return_map(t, params, curve, opts);
  out = r.state;
  return std::max(1, r.iterations);
}

}  // namespace rbfplast
