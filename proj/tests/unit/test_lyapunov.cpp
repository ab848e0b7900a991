#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "stochform/lyapunov.hpp"

using namespace stochform;

namespace {

ManifoldPoint torus_pt(double x, double y) { return ManifoldPoint(Manifold::torus(), Vec{x, y}); }

// E[(1/t) int_0^t sech^2(2 pi B_s) ds] by nested quadrature: midpoint rule
// in s, trapezoid in z against the standard normal density.
double mean_sech2_average(double t) {
  const int ns = 400, nz = 4001;
  const double zmax = 9.0, hz = 2.0 * zmax / (nz - 1);
  double acc = 0.0;
  for (int i = 0; i < ns; ++i) {
    const double s = t * (i + 0.5) / ns;
    double inner = 0.0;
    for (int j = 0; j < nz; ++j) {
      const double z = -zmax + j * hz;
      const double w = (j == 0 || j == nz - 1) ? 0.5 : 1.0;
      const double c = std::cosh(2.0 * M_PI * std::sqrt(s) * z);
      inner += w * std::exp(-0.5 * z * z) / (c * c);
    }
    acc += inner * hz / std::sqrt(2.0 * M_PI);
  }
  return acc / ns;
}

}  // namespace

TEST_CASE("torus verdicts") {
  auto spec = specs::torus_sin_cos();
  LyapunovCheckOptions opts;
  opts.grid_resolution = 64;
  auto both = check_lyapunov(spec, forms::torus_dy(), RegionSpec::torus_circles({0.0, 0.5}, 0.01), opts);
  CHECK(both.verdict == LyapunovVerdict::Strict);
  CHECK(both.max_symbol < 0.0);
  CHECK(both.max_symbol == doctest::Approx(-M_PI * std::pow(std::sin(2.0 * M_PI / 64.0), 2)));
  auto single = check_lyapunov(spec, forms::torus_dy(), RegionSpec::torus_circles({0.5}, 0.01), opts);
  CHECK(single.verdict == LyapunovVerdict::NonStrictZeroSet);
  CHECK(single.zero_set_points.size() == 64);
  for (const auto& p : single.zero_set_points) CHECK(p[0] == 0.0);
  auto flipped = forms::combine(-1.0, forms::torus_dy(), 0.0, forms::torus_dx());
  CHECK(check_lyapunov(spec, flipped, RegionSpec::torus_circles({0.0, 0.5}, 0.01), opts).verdict ==
        LyapunovVerdict::Violated);
}

TEST_CASE("sphere verdict and grid maximum per convention") {
  const std::size_t n = 64;
  auto beta = forms::exact(scalars::sphere_log_one_minus_x1_sq(2));
  auto poles = RegionSpec::sphere_poles(0.05);
  LyapunovCheckOptions opts;
  opts.grid_resolution = n;
  for (auto c : {Convention::Half, Convention::Unit}) {
    auto r = check_lyapunov(specs::sphere_height(2, c), beta, poles, opts);
    CHECK(r.verdict == LyapunovVerdict::Strict);
    // oracle: -c (1 - x1^2) at the first grid ring off the poles
    const double s = std::sin(M_PI / n);
    CHECK(r.max_symbol == doctest::Approx(-convention_factor(c) * 2.0 * s * s).epsilon(1e-6));
  }
}

TEST_CASE("grid csv") {
  LyapunovCheckOptions opts;
  opts.grid_resolution = 4;
  opts.keep_grid = true;
  auto r = check_lyapunov(specs::torus_sin_cos(), forms::torus_dy(),
                          RegionSpec::torus_circles({0.0, 0.5}, 0.01), opts);
  std::ostringstream os;
  write_lyapunov_grid_csv(os, r, Manifold::torus());
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "coord_0,coord_1,S_beta_L");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 8);
}

TEST_CASE("f at t = 0 is 0") {
  auto r = estimate_f(specs::torus_sin_cos(), forms::torus_dy(), torus_pt(0.25, 0.0), 0.0,
                      EnsembleSpec{10, 1, 1.0, 1e-3});
  CHECK(r.value == 0.0);
  CHECK(r.symbol_at_x0 == doctest::Approx(-M_PI));
}

TEST_CASE("f is negative and the two expressions agree") {
  auto r = estimate_f(specs::torus_sin_cos(), forms::torus_dy(), torus_pt(0.25, 0.0), 0.5,
                      EnsembleSpec{1000, 3, 1.0, 1e-3});
  CHECK(r.value < 0.0);
  CHECK(r.agree);
  CHECK(r.stopped_paths == 0);
}

TEST_CASE("small-t quotient matches the Brownian oracle") {
  // x = atan(e^{2 pi B}) / pi from x0 = 1/4, so sin^2(2 pi x) = sech^2(2 pi B)
  // and f(t)/t = -pi E[(1/t) int sech^2(2 pi B_s) ds].
  const double t = 1e-2;
  const double oracle = mean_sech2_average(t);
  CHECK(oracle == doctest::Approx(0.86304).epsilon(1e-4));
  auto r = estimate_f(specs::torus_sin_cos(), forms::torus_dy(), torus_pt(0.25, 0.0), t,
                      EnsembleSpec{4000, 5, t, 1e-5});
  MESSAGE("f(t)/t = " << r.value / t << " vs " << -M_PI * oracle);
  CHECK(std::abs(r.value / t + M_PI * oracle) <= 4.0 * r.stderr_value / t + 1e-3);
}

TEST_CASE("f decreases in t for a strict Lyapunov form") {
  auto spec = specs::sphere_height(2);
  auto beta = forms::exact(scalars::sphere_log_one_minus_x1_sq(2));
  ManifoldPoint x0(Manifold::sphere(2), Vec{0.0, 1.0, 0.0});
  double prev = 0.0;
  for (double t : {0.1, 0.3, 0.6}) {
    auto r = estimate_f(spec, beta, x0, t, EnsembleSpec{500, 4, 1.0, 1e-3});
    CHECK(r.value <= prev + 3.0 * r.stderr_value);
    prev = r.value;
  }
}

TEST_CASE("tail bound on the sphere") {
  auto spec = specs::sphere_height(2);
  auto f = scalars::sphere_log_one_minus_x1_sq(2);
  ManifoldPoint x0(Manifold::sphere(2), Vec{0.0, 1.0, 0.0});
  auto reps = tail_bound_experiment(spec, f, x0, 0.5, {2.0, 5.0, 10.0, 50.0},
                                    EnsembleSpec{2000, 6, 1.0, 1e-3}, 1, 64);
  REQUIRE(reps.size() == 4);
  CHECK(reps[0].bound == doctest::Approx(0.5));
  CHECK(reps[0].wilson_upper <= 0.5);
  for (std::size_t i = 1; i < reps.size(); ++i) CHECK(reps[i].p_hat <= reps[i - 1].p_hat);
  CHECK(reps[3].p_hat <= 1e-3);
  CHECK(reps[0].decay_half == doctest::Approx(1.0));
  CHECK(reps[0].decay_unit == doctest::Approx(2.0));
  CHECK(reps[0].consistency_half.pass);
  CHECK_FALSE(reps[0].consistency_unit.pass);
  CHECK_FALSE(reps[0].vacuous);
}

TEST_CASE("tail bound preconditions") {
  auto spec = specs::sphere_height(2);
  ManifoldPoint x0(Manifold::sphere(2), Vec{0.0, 1.0, 0.0});
  EnsembleSpec ens{10, 1, 1.0, 1e-2};
  CHECK_THROWS_AS(tail_bound_experiment(spec, scalars::sphere_log_one_minus_x1_sq(2), x0, 0.5, {1.0}, ens), Error);
  CHECK_THROWS_AS(tail_bound_experiment(spec, scalars::sphere_x1(2), x0, 0.5, {2.0}, ens), Error);
}

TEST_CASE("torus tail bound carries both derived constants") {
  auto spec = specs::torus_sin_cos();
  auto f = scalars::torus_log_sin_sq();
  auto reps = tail_bound_experiment(spec, f, torus_pt(0.25, 0.0), 0.1, {1.0},
                                    EnsembleSpec{200, 2, 1.0, 1e-3}, 1, 64);
  CHECK(reps[0].decay_half == doctest::Approx(4.0 * M_PI * M_PI));
  CHECK(reps[0].decay_unit == doctest::Approx(8.0 * M_PI * M_PI));
  CHECK(reps[0].f_x0 == doctest::Approx(0.0));
}
