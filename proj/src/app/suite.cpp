#include "stochform/app/suite.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "stochform/app/config.hpp"
#include "stochform/app/experiments.hpp"
#include "stochform/cycles.hpp"
#include "stochform/generator.hpp"
#include "stochform/lyapunov.hpp"
#include "stochform/measures.hpp"
#include "stochform/stats.hpp"

namespace stochform::app {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Scale {
  bool quick;
  std::size_t paths(std::size_t full) const { return quick ? std::min<std::size_t>(full, 500) : full; }
  double horizon(double full, double reduced) const { return quick ? reduced : full; }
};

EnsembleSpec ensemble(std::size_t n, std::uint64_t seed, double horizon, double dt) {
  EnsembleSpec e;
  e.n_paths = n;
  e.base_seed = seed;
  e.horizon = horizon;
  e.dt = dt;
  return e;
}

ManifoldPoint torus_x0() { return ManifoldPoint(Manifold::torus(), Vec{0.25, 0.0}); }
ManifoldPoint sphere_equator() { return ManifoldPoint(Manifold::sphere(2), Vec{0.0, 1.0, 0.0}); }

CriterionResult symbol_on_grid() {
  CriterionResult c{1, "Stratonovich symbol of dy on the torus", false, json::object()};
  const auto spec = specs::torus_sin_cos(Convention::Half);
  const auto dy = forms::torus_dy();
  double err_a = 0.0, err_fd = 0.0;
  std::size_t points = 0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const Vec x{i / 16.0, j / 16.0};
      const double s = std::sin(2.0 * kPi * x[0]);
      const double expected = -kPi * s * s;
      err_a = std::max(err_a, std::abs(stratonovich_symbol(spec, dy, x, DerivativeMethod::Analytic) - expected));
      err_fd = std::max(err_fd, std::abs(stratonovich_symbol(spec, dy, x, DerivativeMethod::FiniteDifference) - expected));
      ++points;
    }
  c.pass = err_a <= 1e-6 && err_fd <= 1e-5;
  c.details = {{"points", points}, {"max_error_analytic", err_a}, {"max_error_finite_difference", err_fd},
               {"tolerance_analytic", 1e-6}, {"tolerance_finite_difference", 1e-5}};
  return c;
}

CriterionResult martingale_part(const Scale& sc, std::uint64_t seed, unsigned threads) {
  CriterionResult c{2, "martingale part of the dy integral", false, json::object()};
  const auto half = specs::torus_sin_cos(Convention::Half);
  const auto unit = specs::torus_sin_cos(Convention::Unit);
  const auto dy = forms::torus_dy();
  const auto ens = ensemble(sc.paths(4000), seed, 2.0, 1e-3);
  const auto x0 = torus_x0();
  const std::size_t steps = ens.steps();
  struct Parts {
    double total = 0.0, drift_half = 0.0, drift_unit = 0.0;
  };
  auto parts = map_ensemble(ens, threads, [&](std::size_t, std::uint64_t s) {
    Parts p;
    LineIntegrator integ(dy);
    BrownianIncrements noise(s, ens.dt, half.noise_dim());
    double h_prev = stratonovich_symbol(half, dy, x0.coords());
    double u_prev = stratonovich_symbol(unit, dy, x0.coords());
    simulate_streaming(half, x0, steps, noise, [&](const PathStep& st) {
      integ.add(st.from, st.to, st.index);
      const double h = stratonovich_symbol(half, dy, st.to);
      const double u = stratonovich_symbol(unit, dy, st.to);
      p.drift_half += 0.5 * (h_prev + h) * st.dt;
      p.drift_unit += 0.5 * (u_prev + u) * st.dt;
      h_prev = h;
      u_prev = u;
      return true;
    });
    p.total = integ.value();
    return p;
  });
  std::vector<double> mh, mu;
  for (const auto& p : parts) {
    mh.push_back(p.total - p.drift_half);
    mu.push_back(p.total - p.drift_unit);
  }
  const auto sh = stats::summarize(mh), su = stats::summarize(mu);
  const bool half_ok = std::abs(sh.mean) <= 3.0 * sh.stderr_mean;
  const bool unit_ok = std::abs(su.mean) <= 3.0 * su.stderr_mean;
  c.pass = half_ok && !unit_ok;
  c.details = {{"n_paths", ens.n_paths}, {"horizon", ens.horizon}, {"dt", ens.dt},
               {"half_mean", sh.mean}, {"half_stderr", sh.stderr_mean}, {"half_within_3se", half_ok},
               {"unit_mean", su.mean}, {"unit_stderr", su.stderr_mean}, {"unit_within_3se", unit_ok}};
  return c;
}

CriterionResult exact_form_order(const Scale& sc, std::uint64_t seed, unsigned threads) {
  CriterionResult c{3, "exact-form integral error order along refined paths", false, json::object()};
  const auto spec = specs::torus_sin_cos(Convention::Half);
  const auto f = scalars::torus_sin_2pi_y();
  const auto df = forms::exact(f);
  const double fine = 1e-3;
  const std::vector<std::size_t> refine{4, 2, 1};
  const std::vector<double> h{4e-3, 2e-3, 1e-3};
  const auto ens = ensemble(sc.quick ? 50 : 100, seed, 1.0, fine);
  const auto x0 = torus_x0();
  struct PathErrors {
    std::vector<double> err;
    bool tripped = false;
  };
  auto runs = map_ensemble(ens, threads, [&](std::size_t, std::uint64_t s) {
    PathErrors p;
    try {
      for (std::size_t r : refine) {
        const auto path = simulate_path_refined(spec, x0, ens.horizon, fine, r, s);
        const auto lifted = lift_path(path);
        p.err.push_back(std::abs(line_integral(df, path).value - (f(lifted.back()) - f(lifted.front()))));
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::StepTooLarge) throw;
      p.tripped = true;
    }
    return p;
  });
  std::size_t below = 0, tripped = 0;
  double min_slope = std::numeric_limits<double>::infinity();
  std::vector<double> slopes, ms(h.size(), 0.0);
  for (const auto& p : runs) {
    if (p.tripped) {
      ++tripped;
      continue;
    }
    const double s = stats::loglog_slope(h, p.err);
    slopes.push_back(s);
    min_slope = std::min(min_slope, s);
    if (!(s >= 1.0)) ++below;
    for (std::size_t i = 0; i < h.size(); ++i) ms[i] += p.err[i] * p.err[i];
  }
  std::vector<double> rms;
  for (double m : ms) rms.push_back(std::sqrt(m / static_cast<double>(slopes.size())));
  std::vector<double> sorted = slopes;
  std::sort(sorted.begin(), sorted.end());
  c.pass = below == 0 && tripped == 0;
  c.details = {{"n_paths", ens.n_paths},
               {"dts", h},
               {"paths_below_order_1", below},
               {"paths_step_guard_tripped", tripped},
               {"min_path_order", min_slope},
               {"median_path_order", sorted.empty() ? 0.0 : sorted[sorted.size() / 2]},
               {"rms_errors", rms},
               {"rms_error_order", stats::loglog_slope(h, rms)}};
  return c;
}

json cycle_json(const CycleEstimate& e) {
  json out = json::array();
  for (std::size_t j = 0; j < e.basis.size(); ++j)
    out.push_back({{"form", e.basis[j]}, {"pairing", e.pairings[j]}, {"ci95", e.ci95[j]},
                   {"within_3ci95", std::abs(e.pairings[j]) <= 3.0 * e.ci95[j]}});
  return out;
}

CriterionResult cycle_nullity(const Scale& sc, std::uint64_t seed, unsigned threads) {
  CriterionResult c{4, "cycle pairings of the torus diffusion", false, json::object()};
  const auto spec = specs::torus_sin_cos(Convention::Half);
  const auto basis = forms::cohomology_basis(spec.manifold());
  CycleOptions co;
  co.threads = threads;
  const double t = sc.horizon(200.0, 50.0);
  const auto a = estimate_cycle(spec, torus_x0(), basis, ensemble(200, seed, t, 1e-3), co);
  const auto b = estimate_cycle(spec, torus_x0(), basis, ensemble(200, seed, 2.0 * t, 1e-3), co);
  bool ok = true;
  json ratios = json::array();
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const double ratio = a.ci95[j] / b.ci95[j];
    ratios.push_back({{"form", a.basis[j]}, {"ci95_ratio", ratio}, {"ratio_ok", ratio >= 1.8}});
    ok = ok && std::abs(a.pairings[j]) <= 3.0 * a.ci95[j] && ratio >= 1.8;
  }
  c.pass = ok;
  c.details = {{"n_paths", 200}, {"dt", 1e-3}, {"horizon", t}, {"burn_in", co.burn_in_fraction},
               {"pairings", cycle_json(a)}, {"pairings_doubled_horizon", cycle_json(b)},
               {"ci95_shrink", ratios}};
  return c;
}

CriterionResult gradient_null(const Scale& sc, std::uint64_t seed, unsigned threads) {
  CriterionResult c{5, "cycle pairings under gradient drift", false, json::object()};
  const auto spec = specs::torus_gradient_drift(scalars::torus_bump(), Convention::Half);
  const auto basis = forms::cohomology_basis(spec.manifold());
  CycleOptions co;
  co.threads = threads;
  const double t = sc.horizon(500.0, 100.0);
  const auto e = estimate_cycle(spec, torus_x0(), basis, ensemble(100, seed, t, 1e-3), co);
  bool ok = true;
  for (std::size_t j = 0; j < basis.size(); ++j) ok = ok && std::abs(e.pairings[j]) <= 3.0 * e.ci95[j];
  c.pass = ok;
  c.details = {{"n_paths", 100}, {"dt", 1e-3}, {"horizon", t}, {"pairings", cycle_json(e)}};
  return c;
}

json residual_json(const std::vector<InvarianceResidual>& rs, bool& all) {
  json out = json::array();
  all = true;
  for (const auto& r : rs) {
    all = all && r.pass;
    out.push_back({{"function", r.function_id}, {"residual", r.residual},
                   {"tolerance", r.tolerance}, {"pass", r.pass}});
  }
  return out;
}

CriterionResult invariant_measure(const Scale& sc, std::uint64_t seed, unsigned threads) {
  CriterionResult c{6, "invariance residuals of occupation measures", false, json::object()};
  const auto torus = specs::torus_sin_cos(Convention::Half);
  const double t = sc.horizon(500.0, 100.0);
  const auto grid = Binning::torus_grid(64);
  const auto mu = occupation_measure(torus, torus_x0(), ensemble(50, seed, t, 1e-3), grid, 0.1, threads);
  std::vector<ScalarField> torus_tests = {scalars::torus_y(), scalars::torus_sin_2pi_x(),
                                          scalars::torus_sin_2pi_y(), scalars::torus_cos_2pi_x(),
                                          scalars::torus_cos_2pi_y()};
  bool torus_ok = false, sphere_ok = false;
  const json torus_res = residual_json(validate_invariant(mu, torus, torus_tests), torus_ok);

  const auto sphere = specs::sphere_height(2, Convention::Half);
  const auto bands = Binning::sphere_bands(2, 256, 4);
  const auto nu = occupation_measure(sphere, sphere_equator(), ensemble(20, derive_seed(seed, 1), t, 5e-3),
                                     bands, 0.1, threads);
  const json sphere_res = residual_json(
      validate_invariant(nu, sphere, {scalars::sphere_x1(2), scalars::sphere_half_x1_sq(2)}), sphere_ok);

  const auto uniform = validate_invariant(MeasureEstimate::uniform(grid), torus, {scalars::torus_y()}).front();
  const double target = -kPi / 2.0;
  const bool uniform_close = std::abs(uniform.residual - target) <= 0.05 * std::abs(target);
  c.pass = torus_ok && sphere_ok && !uniform.pass && uniform_close;
  c.details = {{"horizon", t},
               {"torus", {{"n_paths", 50}, {"dt", 1e-3}, {"binning", grid.descriptor()}, {"residuals", torus_res}, {"all_pass", torus_ok}}},
               {"sphere", {{"n_paths", 20}, {"dt", 5e-3}, {"binning", bands.descriptor()}, {"residuals", sphere_res}, {"all_pass", sphere_ok}}},
               {"uniform_y", {{"residual", uniform.residual}, {"expected", target}, {"within_5_percent", uniform_close},
                              {"tolerance", uniform.tolerance}, {"pass", uniform.pass}}}};
  return c;
}

CriterionResult lyapunov_verdicts() {
  CriterionResult c{7, "Lyapunov verdicts", false, json::object()};
  const auto torus = specs::torus_sin_cos(Convention::Half);
  const auto sphere = specs::sphere_height(2, Convention::Half);
  const auto both = check_lyapunov(torus, forms::torus_dy(), RegionSpec::torus_circles({0.0, 0.5}, 1e-3));
  const auto single = check_lyapunov(torus, forms::torus_dy(), RegionSpec::torus_circles({0.5}, 1e-3));
  const auto poles = check_lyapunov(sphere, forms::exact(scalars::sphere_log_one_minus_x1_sq(2)),
                                    RegionSpec::sphere_poles(1e-3));
  c.pass = both.verdict == LyapunovVerdict::Strict && single.verdict == LyapunovVerdict::NonStrictZeroSet &&
           poles.verdict == LyapunovVerdict::Strict;
  auto j = [](const LyapunovCheckReport& r, const char* expected) {
    return json{{"region", r.region_id}, {"form", r.form_id}, {"verdict", to_string(r.verdict)},
                {"expected", expected}, {"max_symbol", r.max_symbol},
                {"zero_set_points", r.zero_set_points.size()}, {"points", r.points_evaluated}};
  };
  c.details = {{"grid_resolution", 256},
               {"torus_both_circles", j(both, "Strict")},
               {"torus_single_circle", j(single, "NonStrictZeroSet")},
               {"sphere_poles", j(poles, "Strict")}};
  return c;
}

CriterionResult tail_bound(const Scale& sc, std::uint64_t seed, unsigned threads) {
  CriterionResult c{8, "tail bound on the sphere", false, json::object()};
  const auto spec = specs::sphere_height(2, Convention::Half);
  const std::vector<double> ks{2.0, 5.0, 10.0, 50.0};
  const auto reps = tail_bound_experiment(spec, scalars::sphere_log_one_minus_x1_sq(2), sphere_equator(), 0.5,
                                          ks, ensemble(sc.paths(10000), seed, 0.5, 1e-3), threads);
  bool monotone = true;
  json levels = json::array();
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (i > 0 && reps[i].p_hat > reps[i - 1].p_hat) monotone = false;
    levels.push_back({{"k", reps[i].k}, {"p_hat", reps[i].p_hat}, {"wilson_upper", reps[i].wilson_upper},
                      {"bound", reps[i].bound}});
  }
  const auto& k2 = reps.front();
  c.pass = k2.wilson_upper <= k2.bound && monotone;
  c.details = {{"n_paths", k2.n_paths}, {"t", 0.5}, {"dt", 1e-3}, {"levels", levels},
               {"p_hat_monotone", monotone}, {"stopped_paths", k2.stopped_paths},
               {"consistency_half_pass", k2.consistency_half.pass},
               {"consistency_unit_pass", k2.consistency_unit.pass}};
  return c;
}

CriterionResult small_t_slope(const Scale& sc, std::uint64_t seed, unsigned threads) {
  CriterionResult c{9, "small-t slope of f", false, json::object()};
  const auto spec = specs::torus_sin_cos(Convention::Half);
  const auto dy = forms::torus_dy();
  const std::size_t n = sc.paths(10000);
  const auto main = estimate_f(spec, dy, torus_x0(), 1e-2, ensemble(n, seed, 1e-2, 1e-5), threads);
  const auto finer = estimate_f(spec, dy, torus_x0(), 1e-3, ensemble(n, derive_seed(seed, 1), 1e-3, 1e-6), threads);
  const double slope = main.value / 1e-2;
  const double rel = std::abs(slope - main.symbol_at_x0) / std::abs(main.symbol_at_x0);
  c.pass = rel <= 0.02;
  c.details = {{"n_paths", n},
               {"t", 1e-2},
               {"dt", 1e-5},
               {"value_over_t", slope},
               {"stderr_over_t", main.stderr_value / 1e-2},
               {"symbol_at_x0", main.symbol_at_x0},
               {"relative_error", rel},
               {"cross_check_agree", main.agree},
               {"t_1e-3", {{"value_over_t", finer.value / 1e-3},
                           {"relative_error", std::abs(finer.value / 1e-3 - finer.symbol_at_x0) /
                                                  std::abs(finer.symbol_at_x0)}}}};
  return c;
}

CriterionResult fluctuation(const Scale& sc, std::uint64_t seed, unsigned threads) {
  CriterionResult c{10, "fluctuation scaling", false, json::object()};
  const auto spec = specs::torus_sin_cos(Convention::Half);
  const std::vector<double> lambdas{4.0, 16.0, 64.0}, times{0.25, 0.5, 0.75, 1.0};
  const auto r = fluctuation_experiment(spec, torus_x0(), forms::torus_dy(), lambdas, times,
                                        ensemble(sc.paths(4000), seed, 1.0, 1e-3), threads);
  const double r2 = r.r_squared.back();
  c.pass = r2 >= 0.95 && std::abs(r.skewness) <= 0.2 && std::abs(r.excess_kurtosis) <= 0.5;
  c.details = {{"n_paths", r.n_paths}, {"dt", r.dt}, {"lambda", 64}, {"times", times},
               {"variances", r.variances.back()}, {"slope", r.slopes.back()}, {"r_squared", r2},
               {"r_squared_all_lambdas", r.r_squared},
               {"skewness", r.skewness}, {"excess_kurtosis", r.excess_kurtosis}};
  return c;
}

SuiteResult battery(bool quick, unsigned threads, std::uint64_t base_seed,
                    const std::function<void(const CriterionResult&)>& on_result) {
  SuiteResult out;
  out.quick = quick;
  out.base_seed = base_seed;
  const Scale sc{quick};
  auto seed = [&](int id) { return derive_seed(base_seed, static_cast<std::uint64_t>(id)); };
  auto timed = [&](auto&& fn) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult c = fn();
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_result) on_result(c);
    out.criteria.push_back(std::move(c));
  };
  timed([&] { return symbol_on_grid(); });
  timed([&] { return martingale_part(sc, seed(2), threads); });
  timed([&] { return exact_form_order(sc, seed(3), threads); });
  timed([&] { return cycle_nullity(sc, seed(4), threads); });
  timed([&] { return gradient_null(sc, seed(5), threads); });
  timed([&] { return invariant_measure(sc, seed(6), threads); });
  timed([&] { return lyapunov_verdicts(); });
  timed([&] { return tail_bound(sc, seed(8), threads); });
  timed([&] { return small_t_slope(sc, seed(9), threads); });
  timed([&] { return fluctuation(sc, seed(10), threads); });
  return out;
}

}  // namespace

json SuiteResult::to_json() const {
  json cs = json::array();
  std::size_t passed = 0;
  for (const auto& c : criteria) {
    passed += c.pass;
    cs.push_back({{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"details", c.details}});
  }
  return {{"mode", quick ? "quick" : "full"}, {"base_seed", base_seed}, {"criteria", cs},
          {"passed", passed}, {"total", criteria.size()}, {"all_pass", all_pass}};
}

SuiteResult run_suite(const SuiteOptions& opts) {
  const unsigned threads = resolve_threads(opts.threads);
  SuiteResult main = battery(opts.quick, threads, opts.base_seed, opts.on_result);
  if (opts.determinism_check) {
    const auto start = std::chrono::steady_clock::now();
    const unsigned other = threads == 1 ? 2 : 1;
    const SuiteResult a = opts.quick ? main : battery(true, threads, opts.base_seed, nullptr);
    const SuiteResult b = battery(true, other, opts.base_seed, nullptr);
    CriterionResult c{11, "determinism across thread counts", false, json::object()};
    c.pass = a.to_json().dump() == b.to_json().dump();
    c.details = {{"mode", "quick"}, {"identical_reports", c.pass}};
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (opts.on_result) opts.on_result(c);
    main.criteria.push_back(std::move(c));
  }
  main.all_pass = true;
  for (const auto& c : main.criteria) main.all_pass = main.all_pass && c.pass;
  return main;
}

namespace {

std::string compact(const json& v) {
  if (!v.is_number_float()) return v.dump();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5g", v.get<double>());
  return buf;
}

void flatten(std::ostringstream& s, const std::string& prefix, const json& v) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items())
      if (k != "form" && k != "function") flatten(s, prefix.empty() ? k : prefix + "." + k, x);
  } else if (v.is_array() && !v.empty() && v.front().is_object()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const json& e = v[i];
      std::string name = e.contains("form")       ? e["form"].get<std::string>()
                         : e.contains("function") ? e["function"].get<std::string>()
                                                  : std::to_string(i);
      flatten(s, prefix + "[" + name + "]", e);
    }
  } else if (v.is_array()) {
    s << ' ' << prefix << "=[";
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << compact(v[i]);
    s << ']';
  } else {
    s << ' ' << prefix << '=' << compact(v);
  }
}

}  // namespace

std::string summary_line(const CriterionResult& c) {
  std::ostringstream s;
  s << "criterion " << c.id << " [" << (c.pass ? "PASS" : "FAIL") << "] " << c.title << ':';
  flatten(s, "", c.details);
  char buf[32];
  std::snprintf(buf, sizeof buf, " (%.1f s)", c.seconds);
  s << buf;
  return s.str();
}

}  // namespace stochform::app
