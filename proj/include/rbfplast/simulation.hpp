#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rbfplast/config.hpp"
#include "rbfplast/csv.hpp"
#include "rbfplast/geometry.hpp"
#include "rbfplast/kdtree.hpp"
#include "rbfplast/shepard.hpp"
#include "rbfplast/solver.hpp"

namespace rbfplast {

// One configured case: node set, solver and sampling line built from a
// RunConfig.
class Simulation {
 public:
  explicit Simulation(RunConfig cfg);

  const RunConfig& config() const { return cfg_; }
  const NodeSet& nodes() const { return solver_->nodes(); }
  const ElastoPlasticSolver& solver() const { return *solver_; }
  const NeighborIndex& index() const { return index_; }
  const SampleLine& line() const { return line_; }
  double setup_seconds() const { return setup_seconds_; }

  // All load steps of the configuration, or `load_steps` equal increments.
  GlobalState run(const ElastoPlasticSolver::StepCallback& on_step = {}) const;
  GlobalState run(int load_steps, const ElastoPlasticSolver::StepCallback& on_step = {}) const;
  LineTable sample(const GlobalState& state) const;

 private:
  RunConfig cfg_;
  std::unique_ptr<ElastoPlasticSolver> solver_;
  NeighborIndex index_;
  SampleLine line_;
  double setup_seconds_ = 0.0;
};

// Per-step telemetry table (one row per load step).
CsvTable telemetry_table(const std::vector<StepTelemetry>& history);

}  // namespace rbfplast
