#pragma once

#include <string>
#include <vector>

#include "rbfplast/shepard.hpp"

namespace rbfplast {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Column by header name; throws when absent.
  std::vector<double> column(const std::string& name) const;
};

// Comma separated, classic locale, 17 significant digits.
void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

// Columns: arc, x, y, u_x, u_y, sigma_xx, sigma_yy, sigma_xy.
CsvTable line_table_to_csv(const LineTable& t);

}  // namespace rbfplast
