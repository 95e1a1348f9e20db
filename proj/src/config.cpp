#include "rbfplast/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rbfplast/errors.hpp"

namespace rbfplast {

using nlohmann::json;

RbfSettings RunConfig::rbf() const {
  RbfSettings s;
  s.basis.k = phs_order;
  s.augmentation.degree = augmentation_degree;
  s.stencil_size = stencil_size;
  return s;
}

SolverSettings RunConfig::solver() const {
  SolverSettings s;
  s.global_tol = global_tol;
  s.max_global_iterations = max_global_iterations;
  s.relaxation = relaxation;
  s.mixing_depth = mixing_depth;
  s.navier = navier;
  s.linear_tol = linear_tol;
  s.local.tol_factor = local_tol;
  s.local.max_iter = local_max_iter;
  s.preconditioner = preconditioner;
  return s;
}

double parse_density(const std::string& text) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    double v;
    if (slash == std::string::npos) {
      v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } else {
      const std::string num = text.substr(0, slash), den = text.substr(slash + 1);
      std::size_t un = 0, ud = 0;
      const double a = std::stod(num, &un), b = std::stod(den, &ud);
      if (un != num.size() || ud != den.size()) throw std::invalid_argument(text);
      v = a / b;
    }
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::invalid_argument&) {
    throw ConfigError("invalid density '" + text + "' (expected e.g. 1/49 or 0.02)");
  } catch (const std::out_of_range&) {
    throw ConfigError("invalid density '" + text + "'");
  }
}

namespace {

const char* to_string(PreconditionerKind k) {
  switch (k) {
    case PreconditionerKind::none:
      return "none";
    case PreconditionerKind::jacobi:
      return "jacobi";
    case PreconditionerKind::ilut:
      return "ilut";
  }
  return "ilut";
}

class Reader {
 public:
  explicit Reader(const json& root) : root_(root) {}

  const json* find(const std::string& section, const std::string& key) const {
    if (!root_.contains(section)) return nullptr;
    const json& s = root_.at(section);
    if (!s.is_object()) throw ConfigError("section '" + section + "' must be an object");
    if (!s.contains(key)) return nullptr;
    return &s.at(key);
  }

  template <typename T>
  T get(const std::string& section, const std::string& key, const T& fallback, bool required = false) const {
    const json* v = find(section, key);
    const std::string path = section + "." + key;
    if (!v) {
      if (required) throw ConfigError("missing required key '" + path + "'");
      return fallback;
    }
    try {
      return v->get<T>();
    } catch (const json::exception&) {
      throw ConfigError("key '" + path + "' has the wrong type");
    }
  }

 private:
  const json& root_;
};

void require_positive(double v, const std::string& path) {
  if (!(v > 0.0)) throw ConfigError("key '" + path + "' must be positive");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("configuration root must be an object");
  const Reader r(root);
  RunConfig c;

  c.domain.length = r.get<double>("domain", "length", 0.0, true);
  c.domain.height = r.get<double>("domain", "height", 0.0, true);
  require_positive(c.domain.length, "domain.length");
  require_positive(c.domain.height, "domain.height");
  c.domain.symmetry_reduced = r.get<bool>("domain", "symmetry_reduced", true);
  const auto west = r.get<std::string>("domain", "west", "clamped");
  if (west == "clamped")
    c.domain.west = WestSupport::clamped;
  else if (west == "roller")
    c.domain.west = WestSupport::roller;
  else
    throw ConfigError("key 'domain.west' must be 'clamped' or 'roller'");

  if (const json* d = r.find("discretization", "density")) {
    if (d->is_string())
      c.density = parse_density(d->get<std::string>());
    else if (d->is_number())
      c.density = d->get<double>();
    else
      throw ConfigError("key 'discretization.density' has the wrong type");
  } else {
    throw ConfigError("missing required key 'discretization.density'");
  }
  require_positive(c.density, "discretization.density");
  c.seed = r.get<std::uint64_t>("discretization", "seed", c.seed);
  c.relax_iterations = r.get<int>("discretization", "relax_iterations", c.relax_iterations);
  c.stencil_size = r.get<std::size_t>("discretization", "stencil_size", c.stencil_size);
  c.phs_order = r.get<int>("discretization", "phs_order", c.phs_order);
  c.augmentation_degree = r.get<int>("discretization", "augmentation_degree", c.augmentation_degree);
  if (c.stencil_size == 0) throw ConfigError("key 'discretization.stencil_size' must be positive");
  if (c.phs_order < 1) throw ConfigError("key 'discretization.phs_order' must be >= 1");
  if (c.augmentation_degree < 0) throw ConfigError("key 'discretization.augmentation_degree' must be >= 0");

  c.E = r.get<double>("material", "E", 0.0, true);
  c.nu = r.get<double>("material", "nu", 0.0, true);
  require_positive(c.E, "material.E");
  if (!(c.nu >= 0.0 && c.nu < 0.5)) throw ConfigError("key 'material.nu' must lie in [0, 0.5)");
  const json* knots = r.find("material", "yield_curve");
  if (!knots) throw ConfigError("missing required key 'material.yield_curve'");
  if (!knots->is_array() || knots->empty()) throw ConfigError("key 'material.yield_curve' must be a non-empty array");
  c.yield_knots.clear();
  for (std::size_t i = 0; i < knots->size(); ++i) {
    const json& k = (*knots)[i];
    const std::string path = "material.yield_curve[" + std::to_string(i) + "]";
    if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number())
      throw ConfigError("key '" + path + "' must be a pair [eq_plastic_strain, yield_stress]");
    c.yield_knots.emplace_back(k[0].get<double>(), k[1].get<double>());
  }
  if (c.yield_knots.front().first != 0.0) throw ConfigError("key 'material.yield_curve[0]' must start at zero plastic strain");
  for (std::size_t i = 0; i < c.yield_knots.size(); ++i) {
    const std::string path = "material.yield_curve[" + std::to_string(i) + "]";
    if (!(c.yield_knots[i].second > 0.0)) throw ConfigError("key '" + path + "' has nonpositive yield stress");
    if (i == 0) continue;
    if (!(c.yield_knots[i].first > c.yield_knots[i - 1].first))
      throw ConfigError("key '" + path + "' is out of order (plastic strain must increase strictly)");
    if (c.yield_knots[i].second < c.yield_knots[i - 1].second)
      throw ConfigError("key '" + path + "' is out of order (yield stress must not decrease)");
  }

  c.traction = r.get<double>("load", "traction", 0.0, true);
  c.load_steps = r.get<int>("load", "steps", 0, true);
  require_positive(c.traction, "load.traction");
  if (c.load_steps < 1) throw ConfigError("key 'load.steps' must be >= 1");

  c.global_tol = r.get<double>("solver", "global_tol", c.global_tol);
  c.max_global_iterations = r.get<int>("solver", "max_global_iterations", c.max_global_iterations);
  c.relaxation = r.get<double>("solver", "relaxation", c.relaxation);
  c.mixing_depth = r.get<int>("solver", "mixing_depth", c.mixing_depth);
  c.linear_tol = r.get<double>("solver", "linear_tol", c.linear_tol);
  c.local_tol = r.get<double>("solver", "local_tol", c.local_tol);
  c.local_max_iter = r.get<int>("solver", "local_max_iter", c.local_max_iter);
  require_positive(c.global_tol, "solver.global_tol");
  require_positive(c.linear_tol, "solver.linear_tol");
  if (c.max_global_iterations < 1) throw ConfigError("key 'solver.max_global_iterations' must be >= 1");
  if (!(c.relaxation > 0.0 && c.relaxation <= 1.0)) throw ConfigError("key 'solver.relaxation' must lie in (0, 1]");
  if (c.mixing_depth < 0) throw ConfigError("key 'solver.mixing_depth' must be >= 0");
  if (c.local_max_iter < 1) throw ConfigError("key 'solver.local_max_iter' must be >= 1");
  const auto navier = r.get<std::string>("solver", "navier", "composed");
  if (navier == "composed")
    c.navier = NavierForm::composed;
  else if (navier == "direct")
    c.navier = NavierForm::direct;
  else
    throw ConfigError("key 'solver.navier' must be 'composed' or 'direct'");
  require_positive(c.local_tol, "solver.local_tol");
  const auto pc = r.get<std::string>("solver", "preconditioner", "ilut");
  if (pc == "ilut")
    c.preconditioner = PreconditionerKind::ilut;
  else if (pc == "jacobi")
    c.preconditioner = PreconditionerKind::jacobi;
  else if (pc == "none")
    c.preconditioner = PreconditionerKind::none;
  else
    throw ConfigError("key 'solver.preconditioner' must be one of ilut, jacobi, none");

  c.output_dir = r.get<std::string>("output", "directory", c.output_dir);
  c.sample_points = r.get<std::size_t>("output", "sample_points", c.sample_points);
  c.shepard_power = r.get<double>("output", "shepard_power", c.shepard_power);
  c.shepard_radius = r.get<double>("output", "shepard_radius", c.shepard_radius);
  if (c.sample_points < 2) throw ConfigError("key 'output.sample_points' must be >= 2");
  require_positive(c.shepard_radius, "output.shepard_radius");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  json knots = json::array();
  for (const auto& [e, s] : c.yield_knots) knots.push_back({e, s});
  json root = {
      {"domain",
       {{"length", c.domain.length},
        {"height", c.domain.height},
        {"symmetry_reduced", c.domain.symmetry_reduced},
        {"west", c.domain.west == WestSupport::clamped ? "clamped" : "roller"}}},
      {"discretization",
       {{"density", c.density},
        {"seed", c.seed},
        {"relax_iterations", c.relax_iterations},
        {"stencil_size", c.stencil_size},
        {"phs_order", c.phs_order},
        {"augmentation_degree", c.augmentation_degree}}},
      {"material", {{"E", c.E}, {"nu", c.nu}, {"yield_curve", knots}}},
      {"load", {{"traction", c.traction}, {"steps", c.load_steps}}},
      {"solver",
       {{"global_tol", c.global_tol},
        {"max_global_iterations", c.max_global_iterations},
        {"relaxation", c.relaxation},
        {"mixing_depth", c.mixing_depth},
        {"navier", c.navier == NavierForm::composed ? "composed" : "direct"},
        {"linear_tol", c.linear_tol},
        {"local_tol", c.local_tol},
        {"local_max_iter", c.local_max_iter},
        {"preconditioner", to_string(c.preconditioner)}}},
      {"output",
       {{"directory", c.output_dir},
        {"sample_points", c.sample_points},
        {"shepard_power", c.shepard_power},
        {"shepard_radius", c.shepard_radius}}},
  };
  return root.dump(2) + "\n";
}

}  // namespace rbfplast
