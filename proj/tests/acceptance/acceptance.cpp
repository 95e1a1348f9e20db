// Acceptance checks for the solver. Prints one PASS/FAIL line per criterion
// and exits nonzero when any criterion fails. Pass criterion numbers as
// arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rbfplast/config.hpp"
#include "rbfplast/geometry.hpp"
#include "rbfplast/kdtree.hpp"
#include "rbfplast/material.hpp"
#include "rbfplast/operators.hpp"
#include "rbfplast/shepard.hpp"
#include "rbfplast/simulation.hpp"

using namespace rbfplast;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

constexpr double kE = 10e9;
constexpr double kNu = 0.4;
constexpr double kLength = 10.0;

RunConfig base_config(double density, int steps, WestSupport west, double traction) {
  RunConfig c;
  c.domain = RectangleDomain{kLength, 5.0, true, west};
  c.density = density;
  c.E = kE;
  c.nu = kNu;
  c.yield_knots = {{0.0, 20e6}, {0.001, 25e6}, {0.005, 30e6}, {0.02, 40e6}};
  c.traction = traction;
  c.load_steps = steps;
  c.augmentation_degree = 3;
  return c;
}

std::vector<std::size_t> east_nodes(const NodeSet& nodes) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes.edges[i] & kEast) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------- 1
Outcome elastic_patch() {
  const auto t0 = Clock::now();
  const Simulation sim(base_config(1.0 / 99.0, 1, WestSupport::roller, 10e6));
  const GlobalState s = sim.run();
  const double secs = seconds_since(t0);
  const double u_ref = 10e6 * kLength / kE;  // 0.01 mm
  double eu = 0.0, es = 0.0;
  for (std::size_t i : east_nodes(sim.nodes())) eu = std::max(eu, std::abs(s.ux(i) - u_ref) / u_ref);
  for (const auto& p : s.points) es = std::max(es, std::abs(p.stress[0] - 10e6) / 10e6);
  const bool ok = eu <= 5e-3 && es <= 5e-3 && secs < 30.0;
  return {ok, fmt("tip u_x rel err %.2e, sigma_xx rel err %.2e (tol 5e-3), %.1f s (< 30 s)", eu, es, secs)};
}

// ---------------------------------------------------------------- 2
Outcome homogeneous_plasticity() {
  const auto t0 = Clock::now();
  const Simulation sim(base_config(1.0 / 99.0, 10, WestSupport::roller, 30e6));
  const GlobalState s = sim.run();
  const double secs = seconds_since(t0);
  const double ep_ref = 0.005;
  const double u_ref = (30e6 / kE + ep_ref) * kLength;  // 0.08 mm
  double ee = 0.0, eu = 0.0;
  for (const auto& p : s.points) ee = std::max(ee, std::abs(p.eq_plastic_strain - ep_ref) / ep_ref);
  for (std::size_t i : east_nodes(sim.nodes())) eu = std::max(eu, std::abs(s.ux(i) - u_ref) / u_ref);
  const bool conv = std::all_of(s.history.begin(), s.history.end(), [](const auto& t) { return t.converged; });
  const bool ok = conv && ee <= 1e-2 && eu <= 1e-2 && secs < 120.0;
  return {ok, fmt("eq. plastic strain rel err %.2e, tip u_x rel err %.2e (tol 1e-2), %s, %.1f s (< 120 s)", ee, eu,
                  conv ? "all steps converged" : "unconverged steps", secs)};
}

// Independent scalar model of the return path: A(dgamma) applied to the trial
// stress, quadratic form with the deviatoric projector, hardened yield stress.
struct ScalarReturn {
  Voigt trial;
  double eps0;
  const std::vector<std::pair<double, double>>* knots;

  static double yield(const std::vector<std::pair<double, double>>& k, double e) {
    if (e >= k.back().first) return k.back().second;
    for (std::size_t i = 1; i < k.size(); ++i)
      if (e < k[i].first)
        return k[i - 1].second + (k[i].second - k[i - 1].second) * (e - k[i - 1].first) / (k[i].first - k[i - 1].first);
    return k.back().second;
  }

  Voigt stress(double g) const {
    const double mu = kE / (2.0 * (1.0 + kNu));
    const double a1 = (1.0 - kNu) / (1.0 - kNu + kE * g / 3.0);
    const double a2 = 1.0 / (1.0 + 2.0 * mu * g);
    const double p = 0.5 * (a1 + a2), q = 0.5 * (a1 - a2);
    return {p * trial[0] + q * trial[1], q * trial[0] + p * trial[1], a2 * trial[2]};
  }
  static double quad(const Voigt& s) {
    return (2.0 * s[0] * s[0] - 2.0 * s[0] * s[1] + 2.0 * s[1] * s[1]) / 3.0 + 2.0 * s[2] * s[2];
  }
  double phi(double g) const {
    const double x = quad(stress(g));
    const double sy = yield(*knots, eps0 + g * std::sqrt(2.0 * x / 3.0));
    return 0.5 * x - sy * sy / 3.0;
  }
  double bisect() const {
    double lo = 0.0, hi = 1e-12;
    while (phi(hi) > 0.0) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (phi(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
};

// ---------------------------------------------------------------- 3
Outcome return_map_oracle() {
  const auto t0 = Clock::now();
  const ElasticParams params = make_params(kE, kNu);
  const std::vector<std::pair<double, double>> knots = {{0.0, 20e6}, {0.001, 25e6}, {0.005, 30e6}, {0.02, 40e6}};
  const YieldCurve curve(knots);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> eps_dist(0.0, 0.03);
  std::uniform_real_distribution<double> over(1.001, 3.0);

  double worst_gamma = 0.0, worst_consistency = 0.0;
  int cases = 0;
  while (cases < 1000) {
    PointState trial;
    trial.eq_plastic_strain = eps_dist(rng);
    Voigt dir{unit(rng), unit(rng), unit(rng)};
    const double vm = von_mises(dir);
    if (vm < 1e-3) continue;
    const double target = over(rng) * curve.eval(trial.eq_plastic_strain).stress;
    for (double& v : dir) v *= target / vm;
    trial.stress = dir;
    trial.elastic_strain = params.D_inv * dir;
    trial.strain = trial.elastic_strain;
    if (!(phi(trial.stress, trial.eq_plastic_strain, curve) > 0.0)) continue;

    const ReturnMapResult r = return_map(trial, params, curve);
    const ScalarReturn oracle{trial.stress, trial.eq_plastic_strain, &knots};
    const double g_ref = oracle.bisect();
    worst_gamma = std::max(worst_gamma, std::abs(r.dgamma - g_ref) / g_ref);
    const double sy = curve.eval(r.state.eq_plastic_strain).stress;
    worst_consistency = std::max(worst_consistency, std::abs(von_mises(r.state.stress) - sy) / sy);
    ++cases;
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_gamma <= 1e-8 && worst_consistency <= 1e-6 && secs < 5.0;
  return {ok, fmt("%d trials: max dgamma rel diff %.2e (tol 1e-8), max |vm - sy|/sy %.2e (tol 1e-6), %.2f s (< 5 s)",
                  cases, worst_gamma, worst_consistency, secs)};
}

// ---------------------------------------------------------------- 4
Outcome derivative_consistency() {
  const ElasticParams params = make_params(kE, kNu);
  const std::vector<std::pair<double, double>> knots = {{0.0, 20e6}, {0.001, 25e6}, {0.005, 30e6}, {0.02, 40e6}};
  const YieldCurve curve(knots);
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> eps_dist(0.0, 0.03);
  std::uniform_real_distribution<double> mag(5e6, 80e6);
  std::uniform_real_distribution<double> gdist(0.0, 2e-9);

  const auto segment = [&](double e) {
    std::size_t s = 0;
    while (s < knots.size() && e >= knots[s].first) ++s;
    return s;
  };
  double worst = 0.0;
  int cases = 0, skipped = 0;
  while (cases < 1000) {
    Voigt t{unit(rng), unit(rng), unit(rng)};
    const double vm = von_mises(t);
    if (vm < 1e-3) continue;
    const double m = mag(rng);
    for (double& v : t) v *= m / vm;
    const double eps = eps_dist(rng);
    const double g = gdist(rng);
    const double h = std::cbrt(2.2e-16) * std::max(g, 1e-10);
    // The yield curve is only piecewise smooth; keep the stencil on one segment.
    const double e_lo = hardened_strain(t, std::max(0.0, g - h), eps, params);
    const double e_hi = hardened_strain(t, g + h, eps, params);
    if (g - h < 0.0 || segment(e_lo) != segment(e_hi)) {
      ++skipped;
      continue;
    }
    const double fd = (phi_at(t, g + h, eps, params, curve) - phi_at(t, g - h, eps, params, curve)) / (2.0 * h);
    const double an = phi_prime(t, g, eps, params, curve);
    worst = std::max(worst, std::abs(an - fd) / std::abs(an));
    ++cases;
  }
  return {worst < 1e-5, fmt("%d points (%d straddling a knot resampled): max rel err %.2e (tol 1e-5)", cases, skipped,
                            worst)};
}

// ---------------------------------------------------------------- 5
Outcome polynomial_reproduction() {
  const RectangleDomain domain{kLength, 5.0, true, WestSupport::clamped};
  const NodeSet nodes = build_node_set(domain, kLength / 49.0, 1);
  const NeighborIndex index(nodes.positions);
  const RbfSettings settings;  // k = 3, m = 2, n = 50
  const OperatorSet ops = assemble_operators(nodes.positions, index, settings);

  // Operator image at the origin of x^a y^b.
  const auto image = [](DiffOp op, int a, int b) -> double {
    switch (op) {
      case DiffOp::dx:
        return (a == 1 && b == 0) ? 1.0 : 0.0;
      case DiffOp::dy:
        return (a == 0 && b == 1) ? 1.0 : 0.0;
      case DiffOp::dxx:
        return (a == 2 && b == 0) ? 2.0 : 0.0;
      case DiffOp::dyy:
        return (a == 0 && b == 2) ? 2.0 : 0.0;
      case DiffOp::dxy:
        return (a == 1 && b == 1) ? 1.0 : 0.0;
      case DiffOp::laplacian:
        return ((a == 2 && b == 0) || (a == 0 && b == 2)) ? 2.0 : 0.0;
    }
    return 0.0;
  };
  double worst = 0.0, worst_sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto st = ops.stencil(i);
    const double s = ops.scale(i);
    const Vec2 c = nodes.positions[i];
    for (DiffOp op : kAllOps) {
      const auto w = ops.weights(op, i);
      const double norm = std::pow(s, order(op));
      for (int a = 0; a <= 2; ++a) {
        for (int b = 0; a + b <= 2; ++b) {
          double acc = 0.0;
          for (std::size_t j = 0; j < st.size(); ++j) {
            const Vec2 d = (nodes.positions[st[j]] - c) * (1.0 / s);
            acc += w[j] * std::pow(d.x, a) * std::pow(d.y, b);
          }
          worst = std::max(worst, std::abs(acc * norm - image(op, a, b)));
        }
      }
    }
    const auto wl = ops.weights(DiffOp::laplacian, i);
    double sum = 0.0, mx = 0.0;
    for (double v : wl) {
      sum += v;
      mx = std::max(mx, std::abs(v));
    }
    worst_sum = std::max(worst_sum, std::abs(sum) / mx);
  }
  const bool ok = worst <= 1e-9 && worst_sum <= 1e-9;
  return {ok, fmt("%zu nodes: max scaled monomial error %.2e, max |sum w_lap|/max|w| %.2e (tol 1e-9)", nodes.size(),
                  worst, worst_sum)};
}

// Clamped problem runs shared by criteria 6 to 9.
struct ClampedRun {
  double density;
  std::unique_ptr<Simulation> sim;
  GlobalState state;
  LineTable line;
  double seconds = 0.0;
};

class ClampedCache {
 public:
  ClampedRun& get(double density) {
    for (auto& r : runs_)
      if (r.density == density) return r;
    const auto t0 = Clock::now();
    ClampedRun r{density, std::make_unique<Simulation>(base_config(density, 10, WestSupport::clamped, 30e6)), {}, {}};
    r.state = r.sim->run();
    r.line = r.sim->sample(r.state);
    r.seconds = seconds_since(t0);
    std::printf("  clamped run 1/%.0f: %zu nodes, %d global iterations, %.1f s\n", 1.0 / density, r.sim->nodes().size(),
                total_iterations(r.state), r.seconds);
    std::fflush(stdout);
    runs_.push_back(std::move(r));
    return runs_.back();
  }
  static int total_iterations(const GlobalState& s) {
    int n = 0;
    for (const auto& t : s.history) n += t.global_iterations;
    return n;
  }
  static bool all_converged(const GlobalState& s) {
    return std::all_of(s.history.begin(), s.history.end(), [](const auto& t) { return t.converged; });
  }

 private:
  std::deque<ClampedRun> runs_;  // stable references
};

ClampedCache& cache() {
  static ClampedCache c;
  return c;
}

// ---------------------------------------------------------------- 6
Outcome refinement_convergence() {
  const auto t0 = Clock::now();
  const std::vector<double> dens = {1.0 / 19.0, 1.0 / 49.0, 1.0 / 99.0, 1.0 / 149.0};
  std::vector<const ClampedRun*> runs;
  bool conv = true;
  for (double d : dens) {
    runs.push_back(&cache().get(d));
    conv = conv && ClampedCache::all_converged(runs.back()->state);
  }
  const double secs = seconds_since(t0);
  std::vector<double> diffs;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    double m = 0.0;
    for (std::size_t i = 0; i < runs[k]->line.ux.size(); ++i)
      m = std::max(m, std::abs(runs[k]->line.ux[i] - runs[k - 1]->line.ux[i]));
    diffs.push_back(m);
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < diffs.size(); ++k) decreasing = decreasing && diffs[k] < diffs[k - 1];
  const bool ok = conv && decreasing && secs < 900.0;
  return {ok, fmt("max |du_x| 19->49 %.3e, 49->99 %.3e, 99->149 %.3e mm (%s), %s, %.0f s (< 900 s)", diffs[0],
                  diffs[1], diffs[2], decreasing ? "strictly decreasing" : "NOT decreasing",
                  conv ? "all steps converged" : "unconverged steps", secs)};
}

// ---------------------------------------------------------------- 7
Outcome load_step_insensitivity() {
  const auto t0 = Clock::now();
  const Simulation& sim = *cache().get(1.0 / 149.0).sim;
  const GlobalState s50 = sim.run(50);
  const GlobalState s100 = sim.run(100);
  const LineTable a = sim.sample(s50), b = sim.sample(s100);
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.ux.size(); ++i) {
    diff = std::max({diff, std::abs(a.ux[i] - b.ux[i]), std::abs(a.uy[i] - b.uy[i])});
    scale = std::max({scale, std::abs(b.ux[i]), std::abs(b.uy[i])});
  }
  const bool conv = ClampedCache::all_converged(s50) && ClampedCache::all_converged(s100);
  const double rel = diff / scale;
  return {conv && rel < 1e-2,
          fmt("max |u_50 - u_100| / max |u_100| = %.2e (tol 1e-2), %s, iterations %d / %d, %.0f s", rel,
              conv ? "all steps converged" : "unconverged steps", ClampedCache::total_iterations(s50),
              ClampedCache::total_iterations(s100), seconds_since(t0))};
}

// ---------------------------------------------------------------- 8
Outcome yield_adherence() {
  const ClampedRun& run = cache().get(1.0 / 149.0);
  const NodeSet& nodes = run.sim->nodes();
  const OperatorSet& ops = run.sim->solver().operators();
  const YieldCurve& curve = run.sim->solver().curve();
  std::set<std::size_t> fixed_zone;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes.kinds[i] != NodeKind::dirichlet) continue;
    for (std::size_t j : ops.stencil(i)) fixed_zone.insert(j);
  }
  std::size_t violations = 0, outside = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const PointState& p = run.state.points[i];
    if (von_mises(p.stress) > curve.eval(p.eq_plastic_strain).stress * (1.0 + 1e-3)) {
      ++violations;
      if (!fixed_zone.count(i)) ++outside;
    }
  }
  const double frac = 1.0 - static_cast<double>(violations) / static_cast<double>(nodes.size());
  const bool ok = frac >= 0.99 && outside == 0;
  return {ok, fmt("%.4f of %zu nodes on or below the curve (>= 0.99); %zu violations, %zu outside the fixed-edge "
                  "stencil zone",
                  frac, nodes.size(), violations, outside)};
}

// ---------------------------------------------------------------- 9
Outcome traction_satisfaction() {
  const ClampedRun& run = cache().get(1.0 / 149.0);
  const NodeSet& nodes = run.sim->nodes();
  const RunConfig& cfg = run.sim->config();
  std::vector<double> sxx(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) sxx[i] = run.state.points[i].stress[0];
  ShepardOptions opts;
  opts.samples = cfg.sample_points;
  opts.power = cfg.shepard_power;
  opts.radius = cfg.shepard_radius * nodes.h;
  opts.coincidence = 1e-12 * nodes.h;
  const auto samples =
      shepard_sample(nodes.positions, run.sim->index(), sxx, SampleLine::vertical(cfg.domain, kLength), opts);
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, std::abs(s.value - 30e6) / 30e6);
  return {worst <= 1e-2, fmt("%zu samples on x = L: max |sigma_xx - 30 MPa| / 30 MPa = %.2e (tol 1e-2)",
                             samples.size(), worst)};
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"elastic patch test", elastic_patch},
      {"homogeneous plasticity", homogeneous_plasticity},
      {"return-mapping oracle", return_map_oracle},
      {"yield-function derivative", derivative_consistency},
      {"polynomial reproduction", polynomial_reproduction},
      {"refinement convergence", refinement_convergence},
      {"load-step insensitivity", load_step_insensitivity},
      {"yield adherence", yield_adherence},
      {"traction satisfaction", traction_satisfaction},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
