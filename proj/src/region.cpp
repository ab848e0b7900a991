#include "stochform/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace stochform {

RegionSpec::RegionSpec(Kind k, std::string id, std::function<double(const Vec&)> d, double r)
    : kind_(k), id_(std::move(id)), distance_(std::move(d)), radius_(r) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw Error(ErrorKind::InvalidArgument, "region radius must be positive");
}

RegionSpec RegionSpec::sphere_poles(double cap_radius) {
  auto d = [](const Vec& x) {
    // chord distance to +-e1: |x -+ e1|^2 = 2 -+ 2 x1 on the unit sphere
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * x[i];
    double to_n = std::sqrt((x[0] - 1.0) * (x[0] - 1.0) + s);
    double to_s = std::sqrt((x[0] + 1.0) * (x[0] + 1.0) + s);
    return std::min(to_n, to_s);
  };
  std::ostringstream id;
  id << "sphere_poles(" << cap_radius << ")";
  return RegionSpec(Kind::SpherePoles, id.str(), d, cap_radius);
}

RegionSpec RegionSpec::torus_circles(std::vector<double> x_values, double tube_radius) {
  if (x_values.empty()) throw Error(ErrorKind::InvalidArgument, "torus_circles needs x values");
  for (double& c : x_values) c = wrap_unit(c);
  auto d = [xs = x_values](const Vec& p) {
    double best = std::numeric_limits<double>::infinity();
    for (double c : xs) best = std::min(best, std::abs(minimal_image(p[0] - c)));
    return best;
  };
  std::ostringstream id;
  id << "torus_circles(";
  for (std::size_t i = 0; i < x_values.size(); ++i) id << (i ? "," : "") << x_values[i];
  id << ";" << tube_radius << ")";
  RegionSpec r(Kind::TorusCircles, id.str(), d, tube_radius);
  r.circles_ = std::move(x_values);
  return r;
}

RegionSpec RegionSpec::user(std::string id, std::function<double(const Vec&)> distance,
                            double radius) {
  return RegionSpec(Kind::UserPredicate, std::move(id), std::move(distance), radius);
}

}  // namespace stochform
