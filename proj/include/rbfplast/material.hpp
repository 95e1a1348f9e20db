#pragma once

#include <utility>
#include <vector>

#include "rbfplast/types.hpp"

namespace rbfplast {

// Isotropic plane-stress elasticity. Strains use engineering shear.
struct ElasticParams {
  double E = 0.0;       // Pa
  double nu = 0.0;
  double lambda = 0.0;  // Pa, E nu / ((1 - 2 nu)(1 + nu))
  double mu = 0.0;      // Pa, E / (2 (1 + nu))
  Mat3 D{};
  Mat3 D_inv{};

  // Plane-stress reduced Lame constant 2 lambda mu / (lambda + 2 mu).
  double lambda_bar() const { return 2.0 * lambda * mu / (lambda + 2.0 * mu); }
};

ElasticParams make_params(double E, double nu);

struct YieldPoint {
  double stress;  // sigma_Y, Pa
  double slope;   // H = d sigma_Y / d eps_eq, Pa
};

// Piecewise-linear yield stress as a function of equivalent plastic strain,
// constant beyond the last knot.
class YieldCurve {
 public:
  YieldCurve() = default;
  explicit YieldCurve(std::vector<std::pair<double, double>> knots);

  // Slope at a knot is that of the segment to its right.
  YieldPoint eval(double eq_plastic_strain) const;
  double initial_yield() const { return knots_.front().second; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

 private:
  std::vector<std::pair<double, double>> knots_;
};

struct PointState {
  Voigt stress{};          // (xx, yy, xy), Pa
  Voigt strain{};          // total, (xx, yy, 2xy)
  Voigt elastic_strain{};
  Voigt plastic_strain{};
  double eq_plastic_strain = 0.0;
};

// Deviatoric projection with the engineering-shear layout.
const Mat3& projection_matrix();

// xi = sigma^T P sigma
double xi(const Voigt& stress);
double von_mises(const Voigt& stress);
// Phi = xi / 2 - sigma_Y(eps_eq)^2 / 3
double phi(const Voigt& stress, double eq_plastic_strain, const YieldCurve& curve);

// xi of the returned stress A(dgamma) * trial, in closed form.
double xi_at(const Voigt& trial, double dgamma, const ElasticParams& params);
// d xi_at / d dgamma
double xi_prime(const Voigt& trial, double dgamma, const ElasticParams& params);
// Equivalent plastic strain reached after a return with multiplier dgamma.
double hardened_strain(const Voigt& trial, double dgamma, double eq_plastic_strain, const ElasticParams& params);
// d sigma_Y^2 / d dgamma along the return path. Throws when xi vanishes.
double h_prime(const Voigt& trial, double dgamma, double eq_plastic_strain, const ElasticParams& params,
               const YieldCurve& curve);
// Yield function along the return path and its derivative.
double phi_at(const Voigt& trial, double dgamma, double eq_plastic_strain, const ElasticParams& params,
              const YieldCurve& curve);
double phi_prime(const Voigt& trial, double dgamma, double eq_plastic_strain, const ElasticParams& params,
                 const YieldCurve& curve);

Mat3 a_matrix(double dgamma, const ElasticParams& params);

struct ReturnMapOptions {
  double tol_factor = 1e-8;  // |Phi| < tol_factor * sigma_Y(0)^2
  int max_iter = 50;
};

struct ReturnMapResult {
  double dgamma = 0.0;
  PointState state;
  int iterations = 0;
  bool bisection = false;  // Newton needed the bracketing fallback
};

// Local Newton return mapping from a trial state: stress is the trial
// stress, plastic fields are those of the last converged state. Throws
// InvalidArgument when the trial stress is not outside the yield surface.
ReturnMapResult return_map(const PointState& trial, const ElasticParams& params, const YieldCurve& curve,
                           const ReturnMapOptions& opts = {});

// Builds the trial state for a total strain given the previous converged state.
PointState trial_state(const Voigt& strain, const PointState& committed, const ElasticParams& params);

// Trial state followed by return_map where the yield function is positive.
// Returns the local iteration count (0 for elastic points).
int constitutive_update(const Voigt& strain, const PointState& committed, const ElasticParams& params,
                        const YieldCurve& curve, const ReturnMapOptions& opts, PointState& out);

}  // namespace rbfplast
