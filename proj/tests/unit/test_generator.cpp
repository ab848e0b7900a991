#include <cmath>
#include <vector>

#include "doctest.h"
#include "stochform/generator.hpp"

using namespace stochform;

namespace {

double sin2(const Vec& p) {
  const double s = std::sin(2.0 * M_PI * p[0]);
  return s * s;
}

}  // namespace

TEST_CASE("stratonovich symbol of dy on the torus is -pi sin^2(2 pi x)") {
  auto spec = specs::torus_sin_cos();
  auto dy = forms::torus_dy();
  double worst_a = 0.0, worst_fd = 0.0;
  for (const Vec& p : random_points(Manifold::torus(), 256, 1)) {
    const double oracle = -M_PI * sin2(p);
    worst_a = std::max(worst_a, std::abs(stratonovich_symbol(spec, dy, p, DerivativeMethod::Analytic) - oracle));
    worst_fd = std::max(worst_fd, std::abs(stratonovich_symbol(spec, dy, p, DerivativeMethod::FiniteDifference) - oracle));
  }
  CHECK(worst_a <= 1e-6);
  CHECK(worst_fd <= 1e-5);
}

TEST_CASE("generator oracles, both conventions") {
  struct Case {
    DiffusionSpec half;
    ScalarField f;
    std::function<double(const Vec&)> oracle_half;
  };
  const auto sph = Manifold::sphere(2);
  std::vector<Case> cases{
      {specs::torus_sin_cos(), scalars::torus_y(), [](const Vec& p) { return -M_PI * sin2(p); }},
      {specs::torus_sin_cos(), scalars::torus_log_sin_sq(),
       [](const Vec& p) { return -4.0 * M_PI * M_PI * sin2(p); }},
      {specs::torus_sin_cos(), scalars::torus_x(), [](const Vec& p) {
         return M_PI * std::sin(2.0 * M_PI * p[0]) * std::cos(2.0 * M_PI * p[0]);
       }},
      {specs::sphere_height(2), scalars::sphere_x1(2),
       [](const Vec& p) { return -p[0] * (1.0 - p[0] * p[0]); }},
      {specs::sphere_height(2), scalars::sphere_half_x1_sq(2),
       [](const Vec& p) { return 0.5 * (1.0 - p[0] * p[0]) * (1.0 - 3.0 * p[0] * p[0]); }},
      {specs::sphere_height(2), scalars::sphere_log_one_minus_x1_sq(2),
       [](const Vec& p) { return -(1.0 - p[0] * p[0]); }},
  };
  for (const auto& c : cases) {
    CAPTURE(c.f.id());
    const auto unit = c.half.with_convention(Convention::Unit);
    for (const Vec& p : random_points(c.half.manifold(), 64, 9)) {
      if (c.f.near_singular(p)) continue;
      const double o = c.oracle_half(p);
      CHECK(apply_generator(c.half, c.f, p, DerivativeMethod::Analytic) == doctest::Approx(o).epsilon(1e-9).scale(1.0));
      // nested central differences lose accuracy next to a singular set
      const bool fd_reliable = !c.f.singular_set() || c.f.singular_set()->distance(p) > 1e-2;
      if (fd_reliable)
        CHECK(apply_generator(c.half, c.f, p, DerivativeMethod::FiniteDifference) == doctest::Approx(o).epsilon(1e-5).scale(1.0));
      CHECK(apply_generator(unit, c.f, p) == doctest::Approx(2.0 * o).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("constants are annihilated exactly") {
  for (auto spec : {specs::torus_sin_cos(), specs::sphere_height(2)}) {
    auto one = scalars::constant(spec.manifold(), 1.0);
    for (const Vec& p : random_points(spec.manifold(), 16, 3)) {
      CHECK(apply_generator(spec, one, p, DerivativeMethod::Analytic) == 0.0);
      CHECK(apply_generator(spec, one, p, DerivativeMethod::FiniteDifference) == 0.0);
    }
  }
}

TEST_CASE("fixed points of the sphere generator") {
  auto spec = specs::sphere_height(2);
  auto f = scalars::sphere_half_x1_sq(2);
  CHECK(apply_generator(spec, f, Vec{1.0, 0.0, 0.0}) == doctest::Approx(0.0));
  CHECK(apply_generator(spec, f, Vec{-1.0, 0.0, 0.0}) == doctest::Approx(0.0));
}

TEST_CASE("singular functions refuse to evaluate inside the cutoff") {
  auto spec = specs::torus_sin_cos();
  auto f = scalars::torus_log_sin_sq();
  try {
    apply_generator(spec, f, Vec{0.5, 0.3});
    FAIL("expected DomainViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainViolation);
  }
  CHECK_THROWS_AS(apply_generator(specs::sphere_height(2), f, Vec{1.0, 0.0, 0.0}), Error);
}

TEST_CASE("symbol of an exact form is the generator (gauge identity)") {
  auto spec = specs::torus_sin_cos();
  for (auto f : {scalars::torus_sin_2pi_y(), scalars::torus_bump(), scalars::torus_y()}) {
    auto df = forms::exact(f);
    auto df_fd = forms::exact_fd(f);
    for (const Vec& p : random_points(Manifold::torus(), 32, 4)) {
      const double lf = apply_generator(spec, f, p);
      CHECK(stratonovich_symbol(spec, df, p) == doctest::Approx(lf).epsilon(1e-10).scale(1.0));
      CHECK(stratonovich_symbol(spec, df_fd, p) == doctest::Approx(lf).epsilon(1e-4).scale(1.0));
    }
  }
}

TEST_CASE("generator report pairs methods and references") {
  auto spec = specs::sphere_height(2);
  auto rep = generator_report(spec, scalars::sphere_log_one_minus_x1_sq(2),
                              random_points(Manifold::sphere(2), 8, 5));
  REQUIRE(rep.max_deviation.has_value());
  CHECK(*rep.max_deviation < 1e-5);
  REQUIRE(rep.reference_label.has_value());
  // the stated reference carries the constant 2, i.e. matches Unit, not Half
  for (const auto& s : rep.samples) CHECK(*s.reference == doctest::Approx(2.0 * *s.analytic));

  ScalarField opaque("opaque", Manifold::torus(), [](const Vec& p) { return std::cos(2.0 * M_PI * p[1]); });
  auto rep2 = generator_report(specs::torus_sin_cos(), opaque, {Vec{0.1, 0.2}});
  CHECK_FALSE(rep2.max_deviation.has_value());
  CHECK_THROWS_AS(apply_generator(specs::torus_sin_cos(), opaque, Vec{0.1, 0.2}, DerivativeMethod::Analytic), Error);
}

TEST_CASE("martingale residual: Half passes, Unit is rejected") {
  auto spec = specs::sphere_height(2);
  ManifoldPoint x0(Manifold::sphere(2), Vec{0.3, std::sqrt(0.91), 0.0});
  EnsembleSpec ens{2000, 31, 1.0, 1e-3};
  auto f = scalars::sphere_half_x1_sq(2);
  auto half = martingale_residual_test(spec, f, x0, ens);
  MESSAGE("half z = " << half.z_score);
  CHECK(half.pass);
  auto unit = martingale_residual_test(spec.with_convention(Convention::Unit), f, x0, ens);
  MESSAGE("unit z = " << unit.z_score);
  CHECK_FALSE(unit.pass);
}

TEST_CASE("manifold mismatch is reported") {
  CHECK_THROWS_AS(apply_generator(specs::torus_sin_cos(), scalars::sphere_x1(2), Vec{0.1, 0.1}), Error);
}
