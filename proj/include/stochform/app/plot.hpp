#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stochform::app {

/// Numeric table, the single source for every CSV dump and plot.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

/// Header line, then one row per line with 17 significant digits.
void write_csv(std::ostream& os, const Table& table);

struct PlotSpec {
  std::string title;
  std::string x;
  std::vector<std::string> ys;
  bool scatter = false;
  bool log_x = false;
  bool log_y = false;
};

/// Minimal SVG line or scatter chart of table columns.
std::string render_svg(const Table& table, const PlotSpec& spec);

}  // namespace stochform::app
