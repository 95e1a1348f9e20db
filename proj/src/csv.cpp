#include "rbfplast/csv.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rbfplast/errors.hpp"

namespace rbfplast {

std::vector<double> CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error("CsvTable: no column '" + name + "'");
  const auto c = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(c));
  return out;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw Error("write_csv: cannot open '" + path + "'");
  out.imbue(std::locale::classic());
  out << std::setprecision(17);
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  if (!out) throw Error("write_csv: write failed for '" + path + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_csv: cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) return t;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    ss.imbue(std::locale::classic());
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      std::istringstream cs(cell);
      cs.imbue(std::locale::classic());
      double v;
      if (!(cs >> v)) throw Error("read_csv: non-numeric cell '" + cell + "' in '" + path + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable line_table_to_csv(const LineTable& l) {
  CsvTable t;
  t.header = {"arc", "x", "y", "u_x", "u_y", "sigma_xx", "sigma_yy", "sigma_xy"};
  for (std::size_t i = 0; i < l.arc.size(); ++i)
    t.rows.push_back({l.arc[i], l.x[i], l.y[i], l.ux[i], l.uy[i], l.sxx[i], l.syy[i], l.sxy[i]});
  return t;
}

}  // namespace rbfplast
