#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "stochform/sde.hpp"
#include "stochform/stats.hpp"

using namespace stochform;

namespace {

ManifoldPoint torus_pt(double x, double y) { return ManifoldPoint(Manifold::torus(), Vec{x, y}); }
ManifoldPoint north() { return ManifoldPoint(Manifold::sphere(2), Vec{1.0, 0.0, 0.0}); }

}  // namespace

TEST_CASE("identity dynamics leave points fixed") {
  auto spec = specs::still(Manifold::torus());
  auto p = simulate_path(spec, torus_pt(0.3, 0.7), 1.0, 0.1, 1);
  for (const auto& x : p.points) CHECK(x == Vec{0.3, 0.7});
  CHECK_THROWS_AS(DiffusionSpec("bad", Manifold::torus(), std::nullopt, {}), Error);
}

TEST_CASE("poles are fixed under the height-gradient noise") {
  auto spec = specs::sphere_height(2);
  for (double dw : {-3.0, -0.1, 0.0, 0.5, 2.0}) {
    auto y = step_stratonovich(spec, north(), 1e-2, std::vector<double>{dw});
    CHECK(y.coords() == north().coords());
  }
  auto p = simulate_path(spec, north(), 1.0, 1e-3, 3);
  CHECK(p.points.back() == north().coords());
}

TEST_CASE("circle x = 1/2 is invariant on the torus") {
  auto spec = specs::torus_sin_cos();
  for (double dw : {-1.0, 0.01, 0.3}) {
    auto y = step_stratonovich(spec, torus_pt(0.5, 0.2), 1e-3, std::vector<double>{dw});
    CHECK(y[0] == 0.5);
  }
}

TEST_CASE("deterministic flow follows the closed-form ODE solution") {
  // dx/dt = sin 2 pi x, dy/dt = cos 2 pi x:
  // tan(pi x_t) = tan(pi x_0) e^{2 pi t}, y_t - y_0 = (ln sin 2 pi x_t - ln sin 2 pi x_0) / 2 pi
  auto spec = specs::torus_sin_cos_flow();
  const double x0 = 0.25, T = 0.3;
  auto p = simulate_path(spec, torus_pt(x0, 0.0), T, 1e-3, 0);
  const double xt = std::atan(std::tan(M_PI * x0) * std::exp(2.0 * M_PI * T)) / M_PI;
  const double yt = (std::log(std::sin(2.0 * M_PI * xt)) - std::log(std::sin(2.0 * M_PI * x0))) /
                    (2.0 * M_PI);
  CHECK(p.points.back()[0] == doctest::Approx(xt).epsilon(1e-5));
  CHECK(p.points.back()[1] == doctest::Approx(wrap_unit(yt)).epsilon(1e-5));
  for (std::size_t k = 1; k < p.points.size(); ++k) CHECK(p.points[k][0] >= p.points[k - 1][0]);
}

TEST_CASE("sphere paths stay on the sphere") {
  auto spec = specs::sphere_height(3);
  ManifoldPoint x0(Manifold::sphere(3), Vec{0.1, 0.7, -0.5, std::sqrt(1.0 - 0.01 - 0.49 - 0.25)});
  auto p = simulate_path(spec, x0, 5.0, 1e-2, 11);
  double worst = 0.0;
  for (const auto& x : p.points) worst = std::max(worst, std::abs(norm(x) - 1.0));
  CHECK(worst <= 1e-12);
}

TEST_CASE("replay reproduces a path bitwise") {
  auto spec = specs::torus_sin_cos();
  auto p = simulate_path(spec, torus_pt(0.1, 0.9), 2.0, 1e-3, 77);
  auto q = replay(spec, p);
  REQUIRE(q.points.size() == p.points.size());
  for (std::size_t k = 0; k < p.points.size(); ++k) CHECK(q.points[k] == p.points[k]);
  CHECK(q.dW == p.dW);
  CHECK_THROWS_AS(replay(specs::sphere_height(2), p), Error);
}

TEST_CASE("times are a fixed grid of round(horizon/dt) steps") {
  CHECK(step_count(1.0, 0.3) == 3);
  CHECK(step_count(1.0, 1e-3) == 1000);
  CHECK_THROWS_AS(step_count(1.0, 0.0), Error);
  CHECK_THROWS_AS(step_count(1.0, 2.0), Error);
  auto p = simulate_path(specs::torus_sin_cos(), torus_pt(0.2, 0.2), 1.0, 0.25, 1);
  CHECK(p.times == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(p.dW.size() == 4);
}

TEST_CASE("ensembles are independent of thread count and match single paths") {
  auto spec = specs::torus_sin_cos();
  EnsembleSpec ens{6, 123, 0.5, 1e-2};
  auto a = simulate_ensemble(spec, torus_pt(0.25, 0.0), ens, 1);
  auto b = simulate_ensemble(spec, torus_pt(0.25, 0.0), ens, 3);
  for (std::size_t k = 0; k < 6; ++k) CHECK(a[k].points == b[k].points);
  EnsembleSpec one{1, 123, 0.5, 1e-2};
  auto c = simulate_ensemble(spec, torus_pt(0.25, 0.0), one, 1);
  auto d = simulate_path(spec, torus_pt(0.25, 0.0), 0.5, 1e-2, derive_seed(123, 0));
  CHECK(c[0].points == d.points);
}

TEST_CASE("non-finite field values raise NonFinite with the step index") {
  VectorField bad(VectorField::Kind::UserClosure, "bad", Manifold::torus(), [](const Vec& x) {
    return x[0] > 0.35 ? Vec{NAN, 0.0} : Vec{1.0, 0.0};
  });
  DiffusionSpec spec("bad_drift", Manifold::torus(), bad, {}, Convention::Half, true);
  try {
    simulate_path(spec, torus_pt(0.0, 0.0), 1.0, 0.1, 0);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFinite);
    REQUIRE(e.step_index().has_value());
    CHECK(*e.step_index() == 3);
  }
}

TEST_CASE("path csv layout") {
  auto p = simulate_path(specs::sphere_height(2), north(), 0.02, 0.01, 1);
  std::ostringstream os;
  write_path_csv(os, p);
  std::istringstream is(os.str());
  std::string header, row0, row1;
  std::getline(is, header);
  std::getline(is, row0);
  std::getline(is, row1);
  CHECK(header == "t,coord_0,coord_1,coord_2,dW_0");
  CHECK(row0.back() == ',');
  CHECK(row1.rfind("0.01", 0) == 0);
}

TEST_CASE("weak error of the Heun scheme decays at rate >= 0.9") {
  // E[sin(2 pi x_T)] on the torus; all resolutions share the dt = 1e-4
  // Brownian path via summed increments.
  auto spec = specs::torus_sin_cos();
  const double T = 1.0, fine = 1e-4;
  const std::size_t n = 2000;
  const std::vector<std::size_t> refine{100, 50, 25};
  std::vector<double> diff_sum(refine.size(), 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto seed = derive_seed(8, k);
    auto ref = simulate_path_refined(spec, torus_pt(0.2, 0.0), T, fine, 1, seed);
    const double fr = std::sin(2.0 * M_PI * ref.points.back()[0]);
    for (std::size_t i = 0; i < refine.size(); ++i) {
      auto p = simulate_path_refined(spec, torus_pt(0.2, 0.0), T, fine, refine[i], seed);
      diff_sum[i] += std::sin(2.0 * M_PI * p.points.back()[0]) - fr;
    }
  }
  std::vector<double> h, err;
  for (std::size_t i = 0; i < refine.size(); ++i) {
    h.push_back(fine * static_cast<double>(refine[i]));
    err.push_back(std::abs(diff_sum[i]) / static_cast<double>(n));
  }
  MESSAGE("weak errors " << err[0] << " " << err[1] << " " << err[2]);
  CHECK(stats::loglog_slope(h, err) >= 0.9);
}
