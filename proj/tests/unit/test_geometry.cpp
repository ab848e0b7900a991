#include <cmath>
#include <limits>

#include "doctest.h"
#include "stochform/fields.hpp"
#include "stochform/geometry.hpp"
#include "stochform/region.hpp"

using namespace stochform;

TEST_CASE("sphere points are validated to 1e-12") {
  CHECK_NOTHROW(ManifoldPoint(Manifold::sphere(2), Vec{1.0, 0.0, 0.0}));
  CHECK_THROWS_AS(ManifoldPoint(Manifold::sphere(2), Vec{1.0 + 1e-10, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(ManifoldPoint(Manifold::sphere(2), Vec{1.0, 0.0}), Error);
  CHECK_THROWS_AS(ManifoldPoint(Manifold::sphere(2), Vec{NAN, 0.0, 0.0}), Error);
}

TEST_CASE("torus points live in [0,1)^2") {
  CHECK_NOTHROW(ManifoldPoint(Manifold::torus(), Vec{0.0, 0.999}));
  CHECK_THROWS_AS(ManifoldPoint(Manifold::torus(), Vec{1.0, 0.0}), Error);
  CHECK_THROWS_AS(ManifoldPoint(Manifold::torus(), Vec{-0.1, 0.0}), Error);
}

TEST_CASE("project_sphere normalizes and rejects the zero vector") {
  auto p = project_sphere(Vec{3.0, 4.0, 0.0});
  CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.8).epsilon(1e-15));
  try {
    project_sphere(Vec{0.0, 0.0, 0.0});
    FAIL("expected ZeroVector");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroVector);
  }
}

TEST_CASE("wrap_torus reduces mod 1") {
  auto p = wrap_torus(1.25, -0.25);
  CHECK(p[0] == doctest::Approx(0.25));
  CHECK(p[1] == doctest::Approx(0.75));
  // rounding to 1.0 must land on 0
  CHECK(wrap_unit(-1e-18) == 0.0);
  CHECK(wrap_unit(std::nextafter(1.0, 0.0)) < 1.0);
  for (double x : {-3.7, -1.0, -1e-300, 0.0, 0.5, 0.9999999999999999, 12.25})
    CHECK((wrap_unit(x) >= 0.0 && wrap_unit(x) < 1.0));
}

TEST_CASE("minimal_image lands in (-1/2, 1/2]") {
  CHECK(minimal_image(0.75) == doctest::Approx(-0.25));
  CHECK(minimal_image(-0.75) == doctest::Approx(0.25));
  CHECK(minimal_image(0.5) == doctest::Approx(0.5));
  CHECK(minimal_image(-0.5) == doctest::Approx(0.5));
}

TEST_CASE("tangent vectors must be tangent") {
  ManifoldPoint n(Manifold::sphere(2), Vec{1.0, 0.0, 0.0});
  CHECK_NOTHROW(TangentVector(n, Vec{0.0, 1.0, 2.0}));
  CHECK_THROWS_AS(TangentVector(n, Vec{0.1, 1.0, 0.0}), Error);
}

TEST_CASE("sinpi and cospi are exact at half-integers") {
  CHECK(sinpi(1.0) == 0.0);
  CHECK(sinpi(2.0) == 0.0);
  CHECK(cospi(0.5) == 0.0);
  CHECK(sinpi(0.5) == 1.0);
  CHECK(sinpi(0.123) == doctest::Approx(std::sin(M_PI * 0.123)).epsilon(1e-15));
}

TEST_CASE("regions: poles and circles") {
  auto poles = RegionSpec::sphere_poles(0.1);
  CHECK(poles.contains(Vec{1.0, 0.0, 0.0}));
  CHECK(poles.contains(Vec{-1.0, 0.0, 0.0}));
  CHECK_FALSE(poles.contains(Vec{0.0, 1.0, 0.0}));
  auto circles = RegionSpec::torus_circles({0.0, 0.5}, 0.01);
  CHECK(circles.contains(Vec{0.995, 0.3}));
  CHECK(circles.contains(Vec{0.505, 0.3}));
  CHECK_FALSE(circles.contains(Vec{0.25, 0.3}));
  CHECK(circles.distance(Vec{0.25, 0.9}) == doctest::Approx(0.25));
  CHECK_THROWS_AS(RegionSpec::torus_circles({0.5}, 0.0), Error);
}

TEST_CASE("directional derivative follows retracted curves") {
  // d/dt x1 along the great circle through e2 towards e1 is 1
  auto f = scalars::sphere_x1(2);
  double d = directional_derivative(Manifold::sphere(2), [&](const Vec& p) { return f(p); },
                                    Vec{0.0, 1.0, 0.0}, Vec{1.0, 0.0, 0.0});
  CHECK(d == doctest::Approx(1.0).epsilon(1e-8));
}
