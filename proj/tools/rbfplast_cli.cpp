#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rbfplast/config.hpp"
#include "rbfplast/csv.hpp"
#include "rbfplast/errors.hpp"
#include "rbfplast/execution.hpp"
#include "rbfplast/material.hpp"
#include "rbfplast/simulation.hpp"
#include "rbfplast/vtk.hpp"

namespace fs = std::filesystem;
using namespace rbfplast;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw Error("cannot write '" + path.string() + "'");
  std::fputs(text.c_str(), f);
  std::fclose(f);
}

std::string step_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "step_%03d.vtk", step);
  return buf;
}

void print_step(const StepTelemetry& t) {
  std::printf("  step %3d  load %.3f  iterations %4d  residual %.3e / %.3e  plastic %zu%s\n", t.step, t.load_factor,
              t.global_iterations, t.residual_interior, t.residual_traction, t.plastic_points,
              t.converged ? "" : "  NOT CONVERGED");
  std::fflush(stdout);
}

int cmd_solve(const std::string& config_path, const std::string& out_override) {
  RunConfig cfg = load_config(config_path);
  if (!out_override.empty()) cfg.output_dir = out_override;
  const fs::path out(cfg.output_dir);
  fs::create_directories(out);

  Simulation sim(cfg);
  std::printf("nodes %zu, h = %.5g mm, setup %.2f s\n", sim.nodes().size(), sim.nodes().h, sim.setup_seconds());
  const auto t0 = std::chrono::steady_clock::now();
  const GlobalState state = sim.run([&](int step, const GlobalState& s) {
    export_vtk(sim.nodes(), s, (out / step_name(step)).string());
    print_step(s.history.back());
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_csv((out / "line.csv").string(), line_table_to_csv(sim.sample(state)));
  write_csv((out / "telemetry.csv").string(), telemetry_table(state.history));
  write_text(out / "config.json", serialize_config(cfg));
  const auto failed = std::count_if(state.history.begin(), state.history.end(),
                                    [](const StepTelemetry& t) { return !t.converged; });
  std::printf("solved in %.2f s, results in %s\n", secs, out.string().c_str());
  return failed == 0 ? 0 : 2;
}

int cmd_converge(const std::string& config_path, const std::string& densities, const std::string& steps,
                 const std::string& out_override) {
  RunConfig base = load_config(config_path);
  if (!out_override.empty()) base.output_dir = out_override;
  const fs::path out(base.output_dir);
  fs::create_directories(out);

  std::vector<double> dens;
  for (const auto& d : split_list(densities)) dens.push_back(parse_density(d));
  std::vector<int> nsteps;
  for (const auto& s : split_list(steps)) {
    try {
      nsteps.push_back(std::stoi(s));
    } catch (const std::exception&) {
      throw ConfigError("invalid step count '" + s + "'");
    }
    if (nsteps.back() < 1) throw ConfigError("step counts must be >= 1");
  }
  if (dens.empty() || nsteps.empty()) throw ConfigError("converge needs at least one density and one step count");

  CsvTable samples;
  samples.header = {"density", "steps", "nodes", "arc", "x", "y", "u_x", "u_y"};
  CsvTable runs;
  runs.header = {"density", "steps", "nodes", "global_iterations", "unconverged_steps", "seconds"};
  int status = 0;
  for (double d : dens) {
    RunConfig cfg = base;
    cfg.density = d;
    const Simulation sim(cfg);
    for (int ns : nsteps) {
      const auto t0 = std::chrono::steady_clock::now();
      const GlobalState state = sim.run(ns);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      int iters = 0, failed = 0;
      for (const auto& t : state.history) {
        iters += t.global_iterations;
        failed += t.converged ? 0 : 1;
      }
      if (failed) status = 2;
      const double n = static_cast<double>(sim.nodes().size());
      std::printf("density 1/%.4g  steps %3d  nodes %6zu  iterations %6d  %s  %.1f s\n", 1.0 / d, ns,
                  sim.nodes().size(), iters, failed ? "UNCONVERGED" : "ok", secs);
      std::fflush(stdout);
      runs.rows.push_back({d, static_cast<double>(ns), n, static_cast<double>(iters), static_cast<double>(failed), secs});
      const LineTable t = sim.sample(state);
      for (std::size_t i = 0; i < t.arc.size(); ++i)
        samples.rows.push_back({d, static_cast<double>(ns), n, t.arc[i], t.x[i], t.y[i], t.ux[i], t.uy[i]});
    }
  }
  write_csv((out / "converge.csv").string(), samples);
  write_csv((out / "converge_runs.csv").string(), runs);
  std::printf("%zu runs written to %s\n", runs.rows.size(), out.string().c_str());
  return status;
}

fs::path last_snapshot(const fs::path& dir) {
  const std::regex pattern(R"(step_(\d+)\.vtk)");
  fs::path best;
  int best_step = -1;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = e.path().filename().string();
    if (std::regex_match(name, m, pattern) && std::stoi(m[1]) > best_step) {
      best_step = std::stoi(m[1]);
      best = e.path();
    }
  }
  if (best_step < 0) throw Error("no step_*.vtk snapshots in '" + dir.string() + "'");
  return best;
}

int cmd_report(const std::string& run_dir) {
  const fs::path dir(run_dir);
  const RunConfig cfg = load_config((dir / "config.json").string());
  const YieldCurve curve(cfg.yield_knots);
  const fs::path snap = last_snapshot(dir);
  const VtkPointCloud cloud = read_vtk(snap.string());
  const auto& ep = cloud.arrays.at("eq_plastic_strain");
  const auto& vm = cloud.arrays.at("von_mises");
  const auto& kind = cloud.arrays.at("node_kind");

  CsvTable pairs;
  pairs.header = {"x", "y", "node_kind", "eq_plastic_strain", "von_mises", "yield_stress"};
  std::size_t above = 0, plastic = 0;
  double ep_max = 0.0;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const double sy = curve.eval(ep[i]).stress;
    pairs.rows.push_back({cloud.points[i].x, cloud.points[i].y, kind[i], ep[i], vm[i], sy});
    if (vm[i] > sy * (1.0 + 1e-3)) ++above;
    if (ep[i] > 0.0) ++plastic;
    ep_max = std::max(ep_max, ep[i]);
  }
  write_csv((dir / "yield_pairs.csv").string(), pairs);

  CsvTable yc;
  yc.header = {"eq_plastic_strain", "yield_stress"};
  for (const auto& [e, s] : curve.knots()) yc.rows.push_back({e, s});
  const double tail = std::max(ep_max, 1.5 * curve.knots().back().first);
  if (tail > curve.knots().back().first) yc.rows.push_back({tail, curve.eval(tail).stress});
  write_csv((dir / "yield_curve.csv").string(), yc);

  const CsvTable tel = read_csv((dir / "telemetry.csv").string());
  const auto its = tel.column("global_iterations");
  const auto conv = tel.column("converged");
  const auto ri = tel.column("residual_interior");
  const auto rt = tel.column("residual_traction");
  double total = 0.0, worst = 0.0;
  int failed = 0;
  for (std::size_t i = 0; i < its.size(); ++i) {
    total += its[i];
    worst = std::max(worst, its[i]);
    failed += conv[i] > 0.5 ? 0 : 1;
  }
  std::printf("run            %s\n", dir.string().c_str());
  std::printf("snapshot       %s (%zu nodes)\n", snap.filename().string().c_str(), cloud.points.size());
  std::printf("load steps     %zu (%d not converged)\n", its.size(), failed);
  std::printf("global iters   total %.0f, max per step %.0f, mean %.1f\n", total, worst,
              its.empty() ? 0.0 : total / static_cast<double>(its.size()));
  if (!its.empty())
    std::printf("final residual interior %.3e Pa/mm, traction %.3e Pa\n", ri.back(), rt.back());
  std::printf("plastic nodes  %zu, max eq. plastic strain %.5g\n", plastic, ep_max);
  std::printf("above yield    %zu nodes (sigma_vm > 1.001 sigma_y)\n", above);
  std::printf("wrote yield_pairs.csv, yield_curve.csv\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meshless RBF-FD elasto-plastic plane-stress solver"};
  app.require_subcommand(1);

  std::string config, out, densities, steps, run_dir;
  auto* solve = app.add_subcommand("solve", "Run one configuration; VTK per load step and a sampled-line CSV");
  solve->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "Output directory (overrides output.directory)");

  auto* converge = app.add_subcommand("converge", "Sweep densities x load-step counts; sampled u per run");
  converge->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  converge->add_option("--densities", densities, "Comma separated, e.g. 1/19,1/49")->required();
  converge->add_option("--steps", steps, "Comma separated load-step counts, e.g. 5,10")->required();
  converge->add_option("--out", out, "Output directory (overrides output.directory)");

  auto* report = app.add_subcommand("report", "Yield-curve pairs and telemetry summary of a solve run");
  report->add_option("--run", run_dir, "Directory written by solve")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    const int threads = configure_threads_from_env();
    if (!report->parsed()) std::printf("threads %d\n", threads);
    if (solve->parsed()) return cmd_solve(config, out);
    if (converge->parsed()) return cmd_converge(config, densities, steps, out);
    return cmd_report(run_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
