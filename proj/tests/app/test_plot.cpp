#include <cmath>
#include <sstream>

#include "doctest.h"
#include "stochform/app/plot.hpp"

using namespace stochform::app;

TEST_CASE("csv has a header and full-precision rows") {
  Table t{{"t", "value"}, {{0.0, 0.1}, {1.0, -1.0 / 3.0}}};
  std::ostringstream os;
  write_csv(os, t);
  CHECK(os.str() == "t,value\n0,0.10000000000000001\n1,-0.33333333333333331\n");
}

TEST_CASE("line plot draws one polyline per series") {
  Table t{{"x", "a", "b"}, {{0, 1, 2}, {1, 2, 3}, {2, 4, 1}}};
  const auto svg = render_svg(t, PlotSpec{"demo <1>", "x", {"a", "b"}, false});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t lines = 0;
  for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++lines;
  CHECK(lines == 2);
  CHECK(svg.find("demo &lt;1&gt;") != std::string::npos);
}

TEST_CASE("scatter skips non-finite and non-positive log values") {
  Table t{{"k", "p"}, {{1, 0.5}, {2, 0.0}, {4, std::nan("")}, {8, 0.1}}};
  const auto svg = render_svg(t, PlotSpec{"tail", "k", {"p"}, true, true, true});
  std::size_t dots = 0;
  for (auto p = svg.find("<circle"); p != std::string::npos; p = svg.find("<circle", p + 1)) ++dots;
  CHECK(dots == 2);
}

TEST_CASE("unknown column is an error") {
  Table t{{"x"}, {{1.0}}};
  CHECK_THROWS(render_svg(t, PlotSpec{"", "x", {"y"}, false}));
}
