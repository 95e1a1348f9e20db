#include "rbfplast/vtk.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "rbfplast/errors.hpp"
#include "rbfplast/material.hpp"

namespace rbfplast {

void export_vtk(const NodeSet& nodes, const GlobalState& state, const std::string& path, const std::string& title) {
  const std::size_t n = nodes.size();
  if (state.points.size() != n || state.u.size() != 2 * n) throw InvalidArgument("export_vtk: state does not match nodes");

  std::ofstream out(path);
  if (!out) throw Error("export_vtk: cannot open '" + path + "' for writing");
  out.imbue(std::locale::classic());
  out << std::setprecision(17);

  out << "# vtk DataFile Version 2.0\n" << title << "\nASCII\nDATASET POLYDATA\n";
  out << "POINTS " << n << " double\n";
  for (const auto& p : nodes.positions) out << p.x << ' ' << p.y << " 0\n";
  out << "VERTICES " << n << ' ' << 2 * n << '\n';
  for (std::size_t i = 0; i < n; ++i) out << "1 " << i << '\n';

  out << "POINT_DATA " << n << '\n';
  out << "VECTORS displacement double\n";
  for (std::size_t i = 0; i < n; ++i) out << state.ux(i) << ' ' << state.uy(i) << " 0\n";

  const auto scalar = [&](const char* name, auto&& value) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < n; ++i) out << value(i) << '\n';
  };
  scalar("sigma_xx", [&](std::size_t i) { return state.points[i].stress[0]; });
  scalar("sigma_yy", [&](std::size_t i) { return state.points[i].stress[1]; });
  scalar("sigma_xy", [&](std::size_t i) { return state.points[i].stress[2]; });
  scalar("von_mises", [&](std::size_t i) { return von_mises(state.points[i].stress); });
  scalar("eq_plastic_strain", [&](std::size_t i) { return state.points[i].eq_plastic_strain; });
  scalar("node_kind", [&](std::size_t i) { return static_cast<double>(nodes.kinds[i]); });
  if (!out) throw Error("export_vtk: write failed for '" + path + "'");
}

VtkPointCloud read_vtk(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_vtk: cannot open '" + path + "'");
  in.imbue(std::locale::classic());
  VtkPointCloud pc;
  std::string line;
  for (int i = 0; i < 4 && std::getline(in, line); ++i) {
    if (i == 2 && line.rfind("ASCII", 0) != 0) throw Error("read_vtk: only ASCII files are supported");
  }
  std::string word;
  std::size_t count = 0;
  while (in >> word) {
    if (word == "POINTS") {
      std::string type;
      in >> count >> type;
      pc.points.resize(count);
      double z;
      for (auto& p : pc.points) in >> p.x >> p.y >> z;
    } else if (word == "VERTICES") {
      std::size_t cells, size;
      in >> cells >> size;
      std::size_t v;
      for (std::size_t k = 0; k < size; ++k) in >> v;
    } else if (word == "POINT_DATA") {
      in >> count;
    } else if (word == "VECTORS") {
      std::string name, type;
      in >> name >> type;
      auto& x = pc.arrays[name + "_x"];
      auto& y = pc.arrays[name + "_y"];
      auto& z = pc.arrays[name + "_z"];
      x.resize(count);
      y.resize(count);
      z.resize(count);
      for (std::size_t i = 0; i < count; ++i) in >> x[i] >> y[i] >> z[i];
    } else if (word == "SCALARS") {
      std::string name, type, lookup, table;
      int comps;
      in >> name >> type >> comps >> lookup >> table;
      auto& a = pc.arrays[name];
      a.resize(count);
      for (std::size_t i = 0; i < count; ++i) in >> a[i];
    } else {
      throw Error("read_vtk: unexpected token '" + word + "' in '" + path + "'");
    }
    if (in.fail()) throw Error("read_vtk: malformed file '" + path + "'");
  }
  return pc;
}

}  // namespace rbfplast
