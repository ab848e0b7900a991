#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "stochform/cycles.hpp"
#include "stochform/measures.hpp"

using namespace stochform;

namespace {

double mass_where(const MeasureEstimate& mu, const std::function<bool(const Vec&)>& pred) {
  double m = 0.0;
  for (std::size_t b = 0; b < mu.masses.size(); ++b)
    if (pred(mu.binning.center(b))) m += mu.masses[b];
  return m;
}

ManifoldPoint torus_pt(double x, double y) { return ManifoldPoint(Manifold::torus(), Vec{x, y}); }

}  // namespace

TEST_CASE("binning round trip") {
  auto t = Binning::torus_grid(64);
  CHECK(t.size() == 4096);
  CHECK(t.index_of(t.center(777)) == 777);
  CHECK(t.index_of(Vec{0.0, 0.0}) == 0);
  CHECK(t.index_of(Vec{0.999999, 0.999999}) == 4095);
  auto s = Binning::sphere_bands(2, 16, 8);
  for (std::size_t b = 0; b < s.size(); ++b) {
    CHECK(s.index_of(s.center(b)) == b);
    CHECK(std::abs(norm(s.center(b)) - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(Binning::sphere_bands(1, 4, 4), Error);
}

TEST_CASE("constant path gives a Dirac histogram") {
  auto p = simulate_path(specs::still(Manifold::torus()), torus_pt(0.5, 0.0), 1.0, 0.01, 0);
  auto mu = occupation_measure({p}, Binning::torus_grid(64), 0.1);
  CHECK(mu.masses[Binning::torus_grid(64).index_of(Vec{0.5, 0.0})] == 1.0);
  CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empty input after burn-in") {
  CHECK_THROWS_AS(occupation_measure(std::vector<SamplePath>{}, Binning::torus_grid(8), 0.1), Error);
  auto p = simulate_path(specs::still(Manifold::torus()), torus_pt(0.5, 0.0), 1.0, 0.5, 0);
  CHECK_THROWS_AS(occupation_measure({p}, Binning::torus_grid(8), 1.0), Error);
}

TEST_CASE("streamed and retained occupation measures agree, for any thread count") {
  auto spec = specs::torus_sin_cos();
  EnsembleSpec ens{4, 3, 5.0, 1e-2};
  auto bins = Binning::torus_grid(16);
  auto paths = simulate_ensemble(spec, torus_pt(0.25, 0.0), ens);
  auto a = occupation_measure(paths, bins, 0.1);
  auto b = occupation_measure(spec, torus_pt(0.25, 0.0), ens, bins, 0.1, 1);
  auto c = occupation_measure(spec, torus_pt(0.25, 0.0), ens, bins, 0.1, 3);
  CHECK(a.masses == b.masses);
  CHECK(b.masses == c.masses);
  CHECK(a.sample_count == b.sample_count);
  CHECK(b.batch_masses.size() == 4);
  double s = 0.0;
  for (double m : b.masses) {
    CHECK(m >= 0.0);
    s += m;
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("torus occupation concentrates on the two invariant circles") {
  // x never crosses 0 or 1/2, so mass splits between both circles; the
  // union of the 2/k tubes is tested. The Heun chain leaks O(dt) mass out of
  // the tubes, so the concentration must improve as dt shrinks.
  auto spec = specs::torus_sin_cos();
  const double tube = 2.0 / 64.0;
  auto in_tubes = [&](const Vec& c) {
    return std::min(c[0], 1.0 - c[0]) <= tube || std::abs(c[0] - 0.5) <= tube;
  };
  auto coarse = occupation_measure(spec, torus_pt(0.25, 0.0), EnsembleSpec{8, 21, 400.0, 1e-3},
                                   Binning::torus_grid(64), 0.1);
  auto fine = occupation_measure(spec, torus_pt(0.25, 0.0), EnsembleSpec{8, 21, 400.0, 2.5e-4},
                                 Binning::torus_grid(64), 0.1);
  const double m_coarse = mass_where(coarse, in_tubes), m_fine = mass_where(fine, in_tubes);
  MESSAGE("mass in circle tubes: dt=1e-3 " << m_coarse << ", dt=2.5e-4 " << m_fine);
  CHECK(m_coarse >= 0.9);
  CHECK(m_fine > m_coarse);
}

TEST_CASE("sphere occupation drifts into the polar caps") {
  // x1 = tanh(B + atanh x1(0)): both poles attract, slowly (null recurrence
  // of B), so the capped mass grows with the horizon.
  auto spec = specs::sphere_height(2);
  ManifoldPoint x0(Manifold::sphere(2), Vec{0.99, std::sqrt(1.0 - 0.99 * 0.99), 0.0});
  auto bins = Binning::sphere_bands(2, 2048, 4);
  auto caps = RegionSpec::sphere_poles(0.1);
  auto in_caps = [&](const Vec& c) { return caps.contains(c); };
  auto short_run = occupation_measure(spec, x0, EnsembleSpec{16, 5, 20.0, 1e-2}, bins, 0.1);
  auto long_run = occupation_measure(spec, x0, EnsembleSpec{16, 5, 400.0, 1e-2}, bins, 0.1);
  const double m_short = mass_where(short_run, in_caps), m_long = mass_where(long_run, in_caps);
  MESSAGE("cap mass T=20: " << m_short << "  T=400: " << m_long);
  CHECK(m_long > m_short);
  CHECK(m_long >= 0.5);
}

TEST_CASE("invariance residuals") {
  auto spec = specs::torus_sin_cos();
  auto bins = Binning::torus_grid(64);
  SUBCASE("constants give exactly zero") {
    auto r = validate_invariant(MeasureEstimate::uniform(bins), spec,
                                {scalars::constant(Manifold::torus(), 2.0)});
    CHECK(r[0].residual == 0.0);
    CHECK(r[0].pass);
  }
  SUBCASE("Dirac on the circle x = 1/2, f = y") {
    auto r = validate_invariant(MeasureEstimate::dirac(bins, Vec{0.5, 0.3}), spec, {scalars::torus_y()});
    CHECK(std::abs(r[0].residual) < 0.05);
    CHECK(r[0].pass);
  }
  SUBCASE("uniform histogram, f = y: -pi/2 and rejected") {
    auto r = validate_invariant(MeasureEstimate::uniform(bins), spec, {scalars::torus_y()});
    CHECK(r[0].residual == doctest::Approx(-M_PI / 2.0).epsilon(1e-12));
    CHECK_FALSE(r[0].pass);
    CHECK(r[0].mc_allowance == 0.0);
  }
  SUBCASE("singular test function on a massive bin") {
    CHECK_THROWS_AS(validate_invariant(MeasureEstimate::dirac(bins, Vec{0.5, 0.3}), spec,
                                       {scalars::torus_log_sin_sq(0.05)}),
                    Error);
  }
}

TEST_CASE("refining the binning moves residuals by at most twice the allowance") {
  auto spec = specs::torus_sin_cos();
  EnsembleSpec ens{8, 44, 50.0, 1e-3};
  auto coarse = Binning::torus_grid(32);
  auto fine = coarse.refined();
  std::vector<ScalarField> fs{scalars::torus_sin_2pi_x(), scalars::torus_sin_2pi_y(), scalars::torus_cos_2pi_y()};
  auto a = validate_invariant(occupation_measure(spec, torus_pt(0.25, 0.0), ens, coarse, 0.1), spec, fs);
  auto b = validate_invariant(occupation_measure(spec, torus_pt(0.25, 0.0), ens, fine, 0.1), spec, fs);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    CAPTURE(fs[i].id());
    CHECK(std::abs(a[i].residual - b[i].residual) <= 2.0 * a[i].discretization);
  }
}

TEST_CASE("coherence") {
  auto bins = Binning::torus_grid(64);
  auto circles = RegionSpec::torus_circles({0.0, 0.5}, 0.01);
  auto half = RegionSpec::torus_circles({0.5}, 0.01);
  CHECK_FALSE(coherence_check(MeasureEstimate::dirac(bins, Vec{0.5, 0.2}), circles, 0.01).coherent);
  auto far = coherence_check(MeasureEstimate::dirac(bins, Vec{0.25, 0.0}), half, 0.1);
  CHECK(far.coherent);
  CHECK(far.leaked_mass == 0.0);
  // monotone in the radius
  auto mu = MeasureEstimate::dirac(Binning::torus_grid(32), Vec{0.2, 0.4});
  bool prev = false;
  for (double r : {0.4, 0.3, 0.25, 0.2, 0.1, 0.05, 0.01, 0.001}) {
    const bool now = coherence_check(mu, half, r).coherent;
    CHECK((!prev || now));
    prev = now;
  }
  CHECK(prev);
  auto sph = Binning::sphere_bands(2, 64, 64);
  CHECK_FALSE(coherence_check(MeasureEstimate::dirac(sph, Vec{1.0, 0.0, 0.0}),
                              RegionSpec::sphere_poles(0.05), 0.05).coherent);
  CHECK(coherence_check(MeasureEstimate::dirac(sph, Vec{0.0, 1.0, 0.0}),
                        RegionSpec::sphere_poles(0.05), 0.05).coherent);
}

TEST_CASE("measure csv") {
  std::ostringstream os;
  write_measure_csv(os, MeasureEstimate::uniform(Binning::torus_grid(2)));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "bin_index,center_0,center_1,mass");
  std::getline(is, line);
  CHECK(line == "0,0.25,0.25,0.25");
}

TEST_CASE("estimate_J") {
  auto spec = specs::torus_sin_cos();
  auto bins = Binning::torus_grid(64);
  auto dy = forms::torus_dy();
  CHECK(estimate_J(spec, MeasureEstimate::uniform(bins), dy) == doctest::Approx(-M_PI / 2.0).epsilon(1e-12));
  // supported on x = 1/2: use an odd grid so a bin is centred on the circle
  auto odd = Binning::torus_grid(63);
  std::vector<double> m(odd.size(), 0.0);
  for (std::size_t j = 0; j < 63; ++j) m[31 * 63 + j] = 1.0 / 63.0;
  MeasureEstimate circle{odd, m, 0, {}};
  CHECK(std::abs(odd.center(31 * 63)[0] - 0.5) < 1e-15);
  CHECK(estimate_J(spec, circle, dy) == doctest::Approx(0.0).scale(1e-12));
  // linear in the form
  auto a = forms::torus_dx();
  auto b = forms::exact(scalars::torus_bump());
  auto mu = MeasureEstimate::uniform(Binning::torus_grid(16));
  const double lhs = estimate_J(spec, mu, forms::combine(0.7, a, -2.0, b));
  const double rhs = 0.7 * estimate_J(spec, mu, a) - 2.0 * estimate_J(spec, mu, b);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10).scale(1.0));
}
