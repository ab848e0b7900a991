#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stochform/geometry.hpp"

namespace stochform {

/// A closed subset W of M described by a distance function, together with a
/// positive radius defining the open neighborhood used for membership.
///
/// Distances are chart distances: chord length in R^{n+1} on the sphere,
/// periodic distance in the x-chart on the torus.
class RegionSpec {
 public:
  enum class Kind { SpherePoles, TorusCircles, UserPredicate };

  /// The two poles (+-e_1) of S^n with cap radius `cap_radius`.
  static RegionSpec sphere_poles(double cap_radius);
  /// The circles {x = c} for c in `x_values`, thickened by `tube_radius`.
  static RegionSpec torus_circles(std::vector<double> x_values, double tube_radius);
  static RegionSpec user(std::string id, std::function<double(const Vec&)> distance,
                         double radius);

  Kind kind() const noexcept { return kind_; }
  const std::string& id() const noexcept { return id_; }
  double radius() const noexcept { return radius_; }
  const std::vector<double>& circle_positions() const noexcept { return circles_; }

  /// Distance from chart/ambient coordinates to W.
  double distance(const Vec& x) const { return distance_(x); }
  /// Membership in the open radius-neighborhood of W.
  bool contains(const Vec& x) const { return distance(x) < radius_; }

 private:
  RegionSpec(Kind k, std::string id, std::function<double(const Vec&)> d, double r);

  Kind kind_;
  std::string id_;
  std::function<double(const Vec&)> distance_;
  double radius_;
  std::vector<double> circles_;
};

}  // namespace stochform
