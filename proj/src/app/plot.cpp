#include "stochform/app/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace stochform::app {

std::size_t Table::column(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::invalid_argument("no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  char buf[32];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      os << (i ? "," : "") << buf;
    }
    os << '\n';
  }
}

namespace {

constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 20, kTop = 36, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Axis {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool log = false;

  double map(double v) const { return log ? std::log10(v) : v; }
  void add(double v) {
    if (!std::isfinite(v) || (log && v <= 0.0)) return;
    lo = std::min(lo, map(v));
    hi = std::max(hi, map(v));
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    const double pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  double unit(double v) const { return (map(v) - lo) / (hi - lo); }
  double tick_value(double u) const {
    const double m = lo + u * (hi - lo);
    return log ? std::pow(10.0, m) : m;
  }
};

}  // namespace

std::string render_svg(const Table& table, const PlotSpec& spec) {
  const std::size_t xc = table.column(spec.x);
  std::vector<std::size_t> yc;
  for (const auto& y : spec.ys) yc.push_back(table.column(y));
  Axis ax, ay;
  ax.log = spec.log_x;
  ay.log = spec.log_y;
  for (const auto& row : table.rows) {
    ax.add(row[xc]);
    for (auto c : yc) ay.add(row[c]);
  }
  ax.finish();
  ay.finish();
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + ax.unit(v) * pw; };
  auto py = [&](double v) { return kTop + (1.0 - ay.unit(v)) * ph; };
  auto ok = [&](double xv, double yv) {
    return std::isfinite(xv) && std::isfinite(yv) && (!ax.log || xv > 0) && (!ay.log || yv > 0);
  };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
    << escape(spec.title) << "</text>\n";
  s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double u = i / 4.0;
    const double gx = kLeft + u * pw, gy = kTop + (1.0 - u) * ph;
    s << "<line x1=\"" << gx << "\" y1=\"" << kTop << "\" x2=\"" << gx << "\" y2=\"" << kTop + ph
      << "\" stroke=\"#ddd\"/>\n";
    s << "<line x1=\"" << kLeft << "\" y1=\"" << gy << "\" x2=\"" << kLeft + pw << "\" y2=\"" << gy
      << "\" stroke=\"#ddd\"/>\n";
    s << "<text x=\"" << gx << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
      << fmt(ax.tick_value(u)) << "</text>\n";
    s << "<text x=\"" << kLeft - 6 << "\" y=\"" << gy + 4 << "\" text-anchor=\"end\">"
      << fmt(ay.tick_value(u)) << "</text>\n";
  }
  s << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
    << escape(spec.x) << (spec.log_x ? " (log)" : "") << "</text>\n";

  for (std::size_t k = 0; k < yc.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    if (spec.scatter) {
      for (const auto& row : table.rows)
        if (ok(row[xc], row[yc[k]]))
          s << "<circle cx=\"" << fmt(px(row[xc])) << "\" cy=\"" << fmt(py(row[yc[k]]))
            << "\" r=\"2\" fill=\"" << color << "\" fill-opacity=\"0.6\"/>\n";
    } else {
      s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& row : table.rows)
        if (ok(row[xc], row[yc[k]])) s << fmt(px(row[xc])) << ',' << fmt(py(row[yc[k]])) << ' ';
      s << "\"/>\n";
    }
    s << "<text x=\"" << kLeft + 8 << "\" y=\"" << kTop + 14 + 14 * k << "\" fill=\"" << color << "\">"
      << escape(spec.ys[k]) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace stochform::app
