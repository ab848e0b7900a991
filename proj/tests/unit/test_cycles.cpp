#include <cmath>
#include <vector>

#include "doctest.h"
#include "stochform/cycles.hpp"

using namespace stochform;

namespace {

ManifoldPoint torus_pt(double x, double y) { return ManifoldPoint(Manifold::torus(), Vec{x, y}); }

}  // namespace

TEST_CASE("exact forms pair to zero") {
  auto spec = specs::torus_sin_cos();
  auto f = scalars::torus_bump();
  EnsembleSpec ens{32, 7, 50.0, 1e-3};
  auto est = estimate_cycle(spec, torus_pt(0.25, 0.0), {forms::exact(f)}, ens);
  REQUIRE(est.pairings.size() == 1);
  CHECK(est.ci95[0] > 0.0);
  CHECK(std::abs(est.pairings[0]) <= std::max(3.0 * est.ci95[0], 5.0 * 0.1 / ens.horizon));
}

TEST_CASE("gauge invariance of the estimator") {
  auto spec = specs::torus_sin_cos();
  auto f = scalars::torus_bump();
  EnsembleSpec ens{16, 8, 20.0, 1e-3};
  auto dx = forms::torus_dx();
  auto shifted = forms::combine(1.0, dx, 1.0, forms::exact(f));
  auto a = estimate_cycle(spec, torus_pt(0.1, 0.3), {dx}, ens);
  auto b = estimate_cycle(spec, torus_pt(0.1, 0.3), {shifted}, ens);
  const double window = 0.9 * ens.horizon;
  CHECK(std::abs(a.pairings[0] - b.pairings[0]) <= 3.0 * a.ci95[0] + 2.0 * 0.1 / window);
  // pathwise the difference is (f(X_T) - f(X_burn)) / window up to quadrature
  for (std::size_t k = 0; k < ens.n_paths; ++k)
    CHECK(std::abs(a.per_path[0][k] - b.per_path[0][k]) <= 2.0 * 0.1 / window + 1e-3);
}

TEST_CASE("sphere basis is empty") {
  auto spec = specs::sphere_height(2);
  ManifoldPoint x0(Manifold::sphere(2), Vec{0.0, 1.0, 0.0});
  auto est = estimate_cycle(spec, x0, forms::cohomology_basis(Manifold::sphere(2)), EnsembleSpec{4, 1, 1.0, 1e-2});
  CHECK(est.basis.empty());
  CHECK(est.pairings.empty());
}

TEST_CASE("non-closed basis forms are rejected") {
  OneForm open(OneForm::Kind::UserClosure, "x_dy", Manifold::torus(),
               [](const Vec& x, const Vec& v) { return x[0] * v[1]; }, false);
  try {
    estimate_cycle(specs::torus_sin_cos(), torus_pt(0.1, 0.1), {open}, EnsembleSpec{2, 1, 1.0, 1e-2});
    FAIL("expected NonClosedForm");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonClosedForm);
  }
}

TEST_CASE("gradient drift has null asymptotic cycle") {
  auto spec = specs::torus_gradient_drift(scalars::torus_bump());
  EnsembleSpec ens{40, 12, 50.0, 2e-3};
  auto est = estimate_cycle(spec, torus_pt(0.3, 0.6), forms::cohomology_basis(Manifold::torus()), ens);
  for (std::size_t j = 0; j < 2; ++j) {
    CAPTURE(j);
    CHECK(std::abs(est.pairings[j]) <= 3.0 * est.ci95[j]);
  }
}

TEST_CASE("estimates do not depend on the thread count") {
  auto spec = specs::torus_sin_cos();
  EnsembleSpec ens{6, 99, 2.0, 1e-3};
  auto basis = forms::cohomology_basis(Manifold::torus());
  auto a = estimate_cycle(spec, torus_pt(0.25, 0.0), basis, ens, {0.1, 3, 1});
  auto b = estimate_cycle(spec, torus_pt(0.25, 0.0), basis, ens, {0.1, 3, 4});
  CHECK(a.pairings == b.pairings);
  CHECK(a.ci95 == b.ci95);
}

TEST_CASE("fluctuations: deterministic flow has zero variance") {
  auto spec = specs::torus_sin_cos_flow();
  auto r = fluctuation_experiment(spec, torus_pt(0.1, 0.0), forms::torus_dy(), {1.0, 4.0},
                                  {0.25, 0.5, 1.0}, EnsembleSpec{8, 1, 1.0, 1e-2});
  for (const auto& row : r.variances)
    for (double v : row) CHECK(v == 0.0);
}

TEST_CASE("fluctuations: variance grows linearly in t") {
  auto spec = specs::torus_sin_cos();
  auto r = fluctuation_experiment(spec, torus_pt(0.25, 0.0), forms::torus_dy(), {4.0, 16.0},
                                  {0.25, 0.5, 0.75, 1.0}, EnsembleSpec{400, 2, 1.0, 1e-3});
  for (const auto& row : r.variances)
    for (double v : row) CHECK(v >= 0.0);
  MESSAGE("R^2 at lambda 16: " << r.r_squared[1] << ", slope " << r.slopes[1]);
  CHECK(r.r_squared[1] >= 0.8);
  CHECK(r.slopes[1] > 0.0);
}
