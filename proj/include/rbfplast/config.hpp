#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rbfplast/geometry.hpp"
#include "rbfplast/krylov.hpp"
#include "rbfplast/material.hpp"
#include "rbfplast/solver.hpp"
#include "rbfplast/stencil.hpp"

namespace rbfplast {

// Run configuration. Lengths in mm, stresses in Pa. See configs/README.md
// for the file schema.
struct RunConfig {
  RectangleDomain domain{10.0, 5.0, true, WestSupport::clamped};
  double density = 1.0 / 49.0;  // h / L
  std::uint64_t seed = 1;
  int relax_iterations = 20;

  double E = 10e9;
  double nu = 0.4;
  std::vector<std::pair<double, double>> yield_knots;

  double traction = 30e6;  // east edge sigma_xx at full load
  int load_steps = 10;

  std::size_t stencil_size = 50;
  int phs_order = 3;
  int augmentation_degree = 2;

  double global_tol = 1e-6;
  int max_global_iterations = 500;
  double relaxation = 0.5;
  int mixing_depth = 5;
  NavierForm navier = NavierForm::composed;
  double linear_tol = 1e-10;
  double local_tol = 1e-8;
  int local_max_iter = 50;
  PreconditionerKind preconditioner = PreconditionerKind::ilut;

  std::string output_dir = "out";
  std::size_t sample_points = 201;
  double shepard_power = 2.0;
  double shepard_radius = 3.0;  // in units of h

  double spacing() const { return density * domain.length; }
  RbfSettings rbf() const;
  SolverSettings solver() const;
  BoundarySpec boundary() const { return {{traction, 0.0}}; }
  bool operator==(const RunConfig&) const = default;
};

// Throws ConfigError naming the offending key path.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

// Accepts "1/49" or a decimal such as "0.0204".
double parse_density(const std::string& text);

}  // namespace rbfplast
