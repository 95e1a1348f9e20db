#pragma once

#include <map>
#include <string>
#include <vector>

#include "rbfplast/geometry.hpp"
#include "rbfplast/solver.hpp"
#include "rbfplast/types.hpp"

namespace rbfplast {

// Legacy ASCII VTK (version 2.0) POLYDATA point cloud. Values are written
// with 17 significant digits.
void export_vtk(const NodeSet& nodes, const GlobalState& state, const std::string& path,
                const std::string& title = "rbfplast snapshot");

struct VtkPointCloud {
  std::vector<Vec2> points;
  // Scalar arrays by name; VECTORS arrays are split into name_x, name_y, name_z.
  std::map<std::string, std::vector<double>> arrays;
};

// Reads files produced by export_vtk.
VtkPointCloud read_vtk(const std::string& path);

}  // namespace rbfplast
