#include "rbfplast/shepard.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rbfplast/errors.hpp"

namespace rbfplast {

SampleLine SampleLine::diagonal(const RectangleDomain& domain) {
  SampleLine line;
  const double w = domain.length;
  const double ht = domain.modeled_height();
  if (domain.symmetry_reduced) {
    line.vertices = {{0.0, ht}, {0.5 * w, 0.0}, {w, ht}};
    line.reflected = true;
    line.mirror_x = 0.5 * w;
  } else {
    line.vertices = {{0.0, 0.0}, {w, ht}};
  }
  return line;
}

SampleLine SampleLine::vertical(const RectangleDomain& domain, double x) {
  SampleLine line;
  line.vertices = {{x, 0.0}, {x, domain.modeled_height()}};
  return line;
}

double SampleLine::length() const {
  double s = 0.0;
  for (std::size_t i = 1; i < vertices.size(); ++i) s += distance(vertices[i - 1], vertices[i]);
  return s;
}

Vec2 SampleLine::at(double arc) const {
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    const double seg = distance(vertices[i - 1], vertices[i]);
    if (arc <= seg || i + 1 == vertices.size()) {
      const double t = seg > 0.0 ? std::clamp(arc / seg, 0.0, 1.0) : 0.0;
      return vertices[i - 1] + (vertices[i] - vertices[i - 1]) * t;
    }
    arc -= seg;
  }
  return vertices.empty() ? Vec2{} : vertices.front();
}

std::vector<LineSample> shepard_sample(std::span<const Vec2> positions, const NeighborIndex& index,
                                       std::span<const double> field, const SampleLine& line,
                                       const ShepardOptions& opts) {
  if (field.size() != positions.size()) throw InvalidArgument("shepard_sample: field length mismatch");
  if (opts.samples < 2) throw InvalidArgument("shepard_sample: at least two samples required");
  if (!(opts.radius > 0.0)) throw InvalidArgument("shepard_sample: radius must be positive");

  const double total = line.length();
  std::vector<LineSample> out(opts.samples);
  for (std::size_t s = 0; s < opts.samples; ++s) {
    const double arc = total * static_cast<double>(s) / static_cast<double>(opts.samples - 1);
    const Vec2 p = line.at(arc);
    const auto near = index.query_radius(p, opts.radius);
    if (near.empty()) {
      std::ostringstream msg;
      msg << "shepard_sample: no node within " << opts.radius << " of sample (" << p.x << ", " << p.y << ")";
      throw Error(msg.str());
    }
    double value;
    const double d0 = distance(p, positions[near.front()]);
    if (d0 <= opts.coincidence) {
      value = field[near.front()];
    } else {
      double num = 0.0, den = 0.0;
      for (std::size_t j : near) {
        const double w = 1.0 / std::pow(distance(p, positions[j]), opts.power);
        num += w * field[j];
        den += w;
      }
      value = num / den;
    }
    out[s] = {arc, p, line.sign(p, opts.antisymmetric) * value};
  }
  return out;
}

LineTable sample_state(const NodeSet& nodes, const NeighborIndex& index, const GlobalState& state,
                       const SampleLine& line, std::size_t samples, double power, double radius_factor) {
  const std::size_t n = nodes.size();
  std::vector<double> ux(state.u.begin(), state.u.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<double> uy(state.u.begin() + static_cast<std::ptrdiff_t>(n), state.u.end());
  std::vector<double> sxx(n), syy(n), sxy(n);
  for (std::size_t i = 0; i < n; ++i) {
    sxx[i] = state.points[i].stress[0];
    syy[i] = state.points[i].stress[1];
    sxy[i] = state.points[i].stress[2];
  }
  ShepardOptions opts;
  opts.samples = samples;
  opts.power = power;
  opts.radius = radius_factor * nodes.h;
  opts.coincidence = 1e-12 * nodes.h;

  LineTable t;
  const auto fill = [&](std::vector<double>& dst, const std::vector<double>& f, bool anti) {
    opts.antisymmetric = anti;
    const auto s = shepard_sample(nodes.positions, index, f, line, opts);
    dst.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) dst[i] = s[i].value;
    if (t.arc.empty()) {
      for (const auto& v : s) {
        t.arc.push_back(v.arc);
        t.x.push_back(v.position.x);
        t.y.push_back(v.position.y);
      }
    }
  };
  fill(t.ux, ux, false);
  fill(t.uy, uy, true);
  fill(t.sxx, sxx, false);
  fill(t.syy, syy, false);
  fill(t.sxy, sxy, true);
  return t;
}

}  // namespace rbfplast
