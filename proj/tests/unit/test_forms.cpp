#include <cmath>
#include <vector>

#include "doctest.h"
#include "stochform/forms.hpp"
#include "stochform/generator.hpp"

using namespace stochform;

namespace {

SamplePath manual_torus_path(std::vector<Vec> pts) {
  SamplePath p{Manifold::torus(), "manual", 0, 0.01, 1, {}, std::move(pts), {}};
  for (std::size_t k = 0; k < p.points.size(); ++k) p.times.push_back(0.01 * static_cast<double>(k));
  p.dW.assign(p.points.size() - 1, 0.0);
  return p;
}

}  // namespace

TEST_CASE("basis forms integrate to the lifted displacement") {
  auto spec = specs::torus_sin_cos();
  auto path = simulate_path(spec, ManifoldPoint(Manifold::torus(), Vec{0.2, 0.9}), 3.0, 1e-3, 5);
  auto ix = line_integral(forms::torus_dx(), path);
  auto iy = line_integral(forms::torus_dy(), path);
  auto lift = lift_path(path);
  CHECK(ix.value == doctest::Approx(lift.back()[0] - lift.front()[0]).epsilon(1e-12).scale(1.0));
  CHECK(iy.value == doctest::Approx(lift.back()[1] - lift.front()[1]).epsilon(1e-12).scale(1.0));
  CHECK(iy.lift_displacement[1] == doctest::Approx(iy.value).epsilon(1e-12).scale(1.0));
}

TEST_CASE("wrapping across the seam is unwrapped") {
  auto p = manual_torus_path({Vec{0.3, 0.98}, Vec{0.3, 0.01}, Vec{0.3, 0.03}});
  CHECK(line_integral(forms::torus_dy(), p).value == doctest::Approx(0.05));
}

TEST_CASE("exact forms integrate to the increment of the potential") {
  auto spec = specs::torus_sin_cos();
  auto f = scalars::torus_sin_2pi_y();
  auto path = simulate_path(spec, ManifoldPoint(Manifold::torus(), Vec{0.3, 0.1}), 1.0, 1e-4, 17);
  const double df = f(path.points.back()) - f(path.points.front());
  CHECK(line_integral(forms::exact(f), path).value == doctest::Approx(df).epsilon(5e-3).scale(1.0));
  CHECK(line_integral(forms::exact_fd(f), path).value == doctest::Approx(df).epsilon(5e-3).scale(1.0));

  auto sspec = specs::sphere_height(2);
  auto g = scalars::sphere_x1(2);
  auto sp = simulate_path(sspec, ManifoldPoint(Manifold::sphere(2), Vec{0.0, 0.6, 0.8}), 1.0, 1e-4, 4);
  CHECK(line_integral(forms::exact(g), sp).value ==
        doctest::Approx(sp.points.back()[0] - sp.points.front()[0]).epsilon(5e-3).scale(1.0));
}

TEST_CASE("line integrals are linear in the form") {
  auto spec = specs::torus_sin_cos();
  auto path = simulate_path(spec, ManifoldPoint(Manifold::torus(), Vec{0.1, 0.1}), 1.0, 1e-3, 2);
  auto a = forms::torus_dx();
  auto b = forms::exact(scalars::torus_bump());
  auto c = forms::combine(2.5, a, -1.5, b);
  CHECK(c.closed());
  const double lhs = line_integral(c, path).value;
  const double rhs = 2.5 * line_integral(a, path).value - 1.5 * line_integral(b, path).value;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
}

TEST_CASE("entering the singular cutoff raises SingularProximity with the step") {
  auto beta = forms::exact(scalars::torus_log_sin_sq(1e-3));
  auto p = manual_torus_path({Vec{0.45, 0.0}, Vec{0.47, 0.0}, Vec{0.4995, 0.0}, Vec{0.5, 0.0}});
  try {
    line_integral(beta, p);
    FAIL("expected SingularProximity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularProximity);
    REQUIRE(e.step_index().has_value());
    CHECK(*e.step_index() == 1);
  }
}

TEST_CASE("oversized torus steps are rejected") {
  auto p = manual_torus_path({Vec{0.1, 0.1}, Vec{0.4, 0.1}});
  try {
    line_integral(forms::torus_dx(), p);
    FAIL("expected StepTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StepTooLarge);
  }
}

TEST_CASE("decomposition splits the integral and checks provenance") {
  auto spec = specs::torus_sin_cos();
  auto path = simulate_path(spec, ManifoldPoint(Manifold::torus(), Vec{0.25, 0.0}), 0.5, 1e-3, 9);
  auto d = decompose_integral(forms::torus_dy(), path, spec);
  CHECK(d.total == doctest::Approx(d.drift_part + d.martingale_part).epsilon(1e-14).scale(1.0));
  CHECK(d.drift_part < 0.0);
  auto other = specs::torus_gradient_drift(scalars::torus_bump());
  auto q = simulate_path(other, ManifoldPoint(Manifold::torus(), Vec{0.25, 0.0}), 0.5, 1e-3, 9);
  try {
    decompose_integral(forms::torus_dy(), q, spec);
    FAIL("expected SpecMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SpecMismatch);
  }
}

TEST_CASE("catalog") {
  CHECK(forms::cohomology_basis(Manifold::sphere(2)).empty());
  auto basis = forms::cohomology_basis(Manifold::torus());
  REQUIRE(basis.size() == 2);
  CHECK(basis[0].id() == "torus_dx");
  CHECK(basis[1].id() == "torus_dy");
  CHECK(forms::by_name("exact:torus_bump", Manifold::torus()).closed());
  CHECK_THROWS_AS(forms::by_name("torus_dz", Manifold::torus()), Error);
  CHECK_THROWS_AS(forms::combine(1.0, forms::torus_dx(), 1.0, forms::exact(scalars::sphere_x1(2))), Error);
}
