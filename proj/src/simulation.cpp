#include "rbfplast/simulation.hpp"

#include <chrono>

#include "rbfplast/csv.hpp"

namespace rbfplast {

Simulation::Simulation(RunConfig cfg) : cfg_(std::move(cfg)) {
  const auto t0 = std::chrono::steady_clock::now();
  NodeSet nodes = build_node_set(cfg_.domain, cfg_.spacing(), cfg_.seed, cfg_.relax_iterations);
  index_ = NeighborIndex(nodes.positions);
  solver_ = std::make_unique<ElastoPlasticSolver>(std::move(nodes), make_params(cfg_.E, cfg_.nu),
                                                  YieldCurve(cfg_.yield_knots), cfg_.boundary(), cfg_.rbf(),
                                                  cfg_.solver());
  line_ = SampleLine::diagonal(cfg_.domain);
  setup_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GlobalState Simulation::run(const ElastoPlasticSolver::StepCallback& on_step) const {
  return run(cfg_.load_steps, on_step);
}

GlobalState Simulation::run(int load_steps, const ElastoPlasticSolver::StepCallback& on_step) const {
  GlobalState state = solver_->initial_state();
  solver_->run(LoadProgram{load_steps}, state, on_step);
  return state;
}

LineTable Simulation::sample(const GlobalState& state) const {
  return sample_state(nodes(), index_, state, line_, cfg_.sample_points, cfg_.shepard_power, cfg_.shepard_radius);
}

CsvTable telemetry_table(const std::vector<StepTelemetry>& history) {
  CsvTable t;
  t.header = {"step",         "load_factor",       "global_iterations", "linear_iterations", "residual_interior",
              "residual_traction", "converged",    "plastic_points",    "max_local_iterations"};
  for (const auto& s : history) {
    t.rows.push_back({static_cast<double>(s.step), s.load_factor, static_cast<double>(s.global_iterations),
                      static_cast<double>(s.linear_iterations), s.residual_interior, s.residual_traction,
                      s.converged ? 1.0 : 0.0, static_cast<double>(s.plastic_points),
                      static_cast<double>(s.max_local_iterations)});
  }
  return t;
}

}  // namespace rbfplast
