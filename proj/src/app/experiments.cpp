#include "stochform/app/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "stochform/app/suite.hpp"
#include "stochform/cycles.hpp"
#include "stochform/generator.hpp"
#include "stochform/lyapunov.hpp"
#include "stochform/measures.hpp"
#include "stochform/stats.hpp"

namespace stochform::app {

using nlohmann::json;

json to_json(const Vec& v) {
  json a = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

namespace {

constexpr double kDefaultRegionRadius = 1e-3;

std::vector<std::string> coord_columns(const Manifold& m, const std::string& prefix = "coord_") {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m.coord_dim(); ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

EnsembleSpec ensemble_of(const ExperimentConfig& cfg) {
  EnsembleSpec e;
  e.n_paths = cfg.ensemble.n_paths;
  e.base_seed = cfg.ensemble.base_seed;
  e.horizon = cfg.ensemble.horizon;
  e.dt = cfg.ensemble.dt;
  return e;
}

std::vector<std::string> strings(const json& p, const char* key, std::vector<std::string> fallback) {
  return p.contains(key) ? p[key].get<std::vector<std::string>>() : fallback;
}

std::vector<OneForm> forms_of(const ExperimentConfig& cfg, const char* key) {
  std::vector<OneForm> out;
  if (!cfg.params.contains(key)) return forms::cohomology_basis(cfg.manifold);
  for (const auto& name : cfg.params[key].get<std::vector<std::string>>())
    out.push_back(forms::by_name(name, cfg.manifold));
  return out;
}

std::vector<ScalarField> scalars_of(const std::vector<std::string>& names, const Manifold& m) {
  std::vector<ScalarField> out;
  for (const auto& n : names) out.push_back(scalars::by_name(n, m));
  return out;
}

std::optional<RegionSpec> region_of(const ExperimentConfig& cfg) {
  if (!cfg.params.contains("region")) return std::nullopt;
  const json& r = cfg.params["region"];
  const double radius = r.value("radius", kDefaultRegionRadius);
  if (r["kind"] == "sphere_poles") {
    if (!cfg.manifold.is_sphere()) throw ConfigError("sphere_poles region needs a sphere manifold");
    return RegionSpec::sphere_poles(radius);
  }
  if (!cfg.manifold.is_torus()) throw ConfigError("torus_circles region needs the torus");
  return RegionSpec::torus_circles(r["x"].get<std::vector<double>>(), radius);
}

Binning binning_of(const ExperimentConfig& cfg) {
  const json b = cfg.params.value("binning", json::object());
  if (cfg.manifold.is_torus()) {
    if (b.contains("bands") || b.contains("azimuth"))
      throw ConfigError("torus binning takes only k");
    return Binning::torus_grid(b.value("k", std::size_t{64}));
  }
  if (b.contains("k")) throw ConfigError("sphere binning takes bands and azimuth");
  return Binning::sphere_bands(cfg.manifold.dim(), b.value("bands", std::size_t{256}),
                               b.value("azimuth", std::size_t{16}));
}

std::vector<std::string> default_test_functions(const Manifold& m) {
  if (m.is_torus())
    return {"torus_y", "torus_sin_2pi_x", "torus_sin_2pi_y", "torus_cos_2pi_x", "torus_cos_2pi_y"};
  return {"sphere_x1", "sphere_half_x1_sq"};
}

std::string default_form(const Manifold& m) {
  return m.is_torus() ? "torus_dy" : "exact:sphere_log_one_minus_x1_sq";
}

std::string default_function(const Manifold& m) {
  return m.is_torus() ? "torus_log_sin_sq" : "sphere_log_one_minus_x1_sq";
}

json coherence_and_pairings(const ExperimentConfig& cfg, const DiffusionSpec& spec,
                            const MeasureEstimate& mu) {
  json out = json::object();
  if (auto region = region_of(cfg)) {
    const auto c = coherence_check(mu, *region, region->radius());
    out["coherence"] = {{"region", region->id()},
                        {"radius", region->radius()},
                        {"coherent", c.coherent},
                        {"leaked_mass", c.leaked_mass}};
  }
  if (cfg.params.contains("forms")) {
    json js = json::array();
    for (const auto& alpha : forms_of(cfg, "forms"))
      js.push_back({{"form", alpha.id()}, {"J", estimate_J(spec, mu, alpha)}});
    out["pairings"] = js;
  }
  return out;
}

Artifact measure_artifact(const MeasureEstimate& mu, const std::string& stem) {
  Artifact a;
  a.stem = stem;
  a.table.columns = {"bin_index"};
  for (auto& c : coord_columns(mu.manifold(), "center_")) a.table.columns.push_back(c);
  a.table.columns.push_back("mass");
  for (std::size_t b = 0; b < mu.masses.size(); ++b) {
    std::vector<double> row{static_cast<double>(b)};
    const Vec c = mu.binning.center(b);
    for (std::size_t i = 0; i < c.size(); ++i) row.push_back(c[i]);
    row.push_back(mu.masses[b]);
    a.table.rows.push_back(std::move(row));
  }
  a.plot = PlotSpec{"bin mass against first center coordinate", "center_0", {"mass"}, true};
  return a;
}

json residuals_json(const std::vector<InvarianceResidual>& rs) {
  json out = json::array();
  for (const auto& r : rs)
    out.push_back({{"function", r.function_id},
                   {"residual", r.residual},
                   {"mc_allowance", r.mc_allowance},
                   {"discretization", r.discretization},
                   {"tolerance", r.tolerance},
                   {"pass", r.pass}});
  return out;
}

ExperimentResult run_simulate(const ExperimentConfig& cfg, const RunOptions& o) {
  const auto spec = build_spec(cfg);
  const auto x0 = build_x0(cfg);
  const auto ens = ensemble_of(cfg);
  const std::size_t dumps = std::min<std::size_t>(cfg.params.value("dump_paths", std::size_t{1}), ens.n_paths);
  struct Summary {
    std::uint64_t seed;
    Vec end;
    Vec lift;
    std::optional<SamplePath> path;
  };
  auto runs = map_ensemble(ens, o.threads, [&](std::size_t k, std::uint64_t seed) {
    SamplePath p = simulate_path(spec, x0, ens.horizon, ens.dt, seed);
    Summary s{seed, p.points.back(), Vec{}, std::nullopt};
    if (spec.manifold().is_torus()) {
      const auto lifted = lift_path(p);
      s.lift = lifted.back() - lifted.front();
    }
    if (k < dumps) s.path = std::move(p);
    return s;
  });
  ExperimentResult r;
  json paths = json::array();
  for (std::size_t k = 0; k < runs.size(); ++k) {
    json e = {{"path", k}, {"seed", runs[k].seed}, {"end", to_json(runs[k].end)}};
    if (spec.manifold().is_torus()) e["lift_displacement"] = to_json(runs[k].lift);
    paths.push_back(e);
    if (!runs[k].path) continue;
    const SamplePath& p = *runs[k].path;
    Artifact a;
    a.stem = "path_" + std::to_string(k);
    a.table.columns = {"t"};
    for (auto& c : coord_columns(spec.manifold())) a.table.columns.push_back(c);
    for (std::size_t i = 0; i < p.noise_dim; ++i) a.table.columns.push_back("dW_" + std::to_string(i));
    for (std::size_t s = 0; s < p.points.size(); ++s) {
      std::vector<double> row{p.times[s]};
      for (std::size_t i = 0; i < p.points[s].size(); ++i) row.push_back(p.points[s][i]);
      for (std::size_t i = 0; i < p.noise_dim; ++i)
        row.push_back(s == 0 ? 0.0 : p.dW[(s - 1) * p.noise_dim + i]);
      a.table.rows.push_back(std::move(row));
    }
    a.plot = PlotSpec{"path " + std::to_string(k), "t", coord_columns(spec.manifold()), false};
    r.artifacts.push_back(std::move(a));
  }
  r.result = {{"spec", spec.id()}, {"steps", ens.steps()}, {"paths", paths}};
  return r;
}

ExperimentResult run_generator_check(const ExperimentConfig& cfg, const RunOptions& o) {
  const auto spec = build_spec(cfg);
  const auto names = strings(cfg.params, "functions", {default_function(cfg.manifold)});
  const auto points = random_points(cfg.manifold, cfg.params.value("points", std::size_t{256}),
                                    cfg.params.value("point_seed", std::uint64_t{1}));
  const bool martingale = cfg.params.value("martingale", false);
  ExperimentResult r;
  json fs = json::array();
  for (const auto& f : scalars_of(names, cfg.manifold)) {
    std::vector<Vec> usable;
    for (const auto& p : points)
      if (!f.near_singular(p)) usable.push_back(p);
    const auto rep = generator_report(spec, f, usable);
    json e = {{"function", f.id()}, {"points", usable.size()}};
    e["max_deviation"] = rep.max_deviation ? json(*rep.max_deviation) : json(nullptr);
    if (rep.reference_label) {
      double worst = 0.0;
      for (const auto& s : rep.samples) {
        const double v = s.analytic ? *s.analytic : *s.finite_difference;
        worst = std::max(worst, std::abs(v - *s.reference));
      }
      e["reference"] = {{"label", *rep.reference_label}, {"max_difference", worst}};
    }
    if (martingale) {
      if (f.singular_set()) {
        e["martingale"] = "skipped: function has a singular set";
      } else {
        const auto m = martingale_residual_test(spec, f, build_x0(cfg), ensemble_of(cfg), o.threads);
        e["martingale"] = {{"n_paths", m.n_paths}, {"mean", m.mean}, {"stderr", m.stderr_mean},
                           {"z", m.z_score}, {"pass", m.pass}};
      }
    }
    fs.push_back(e);

    Artifact a;
    a.stem = "generator_" + f.id();
    a.table.columns = coord_columns(cfg.manifold);
    for (const char* c : {"analytic", "finite_difference", "reference"}) a.table.columns.push_back(c);
    const double nan = std::nan("");
    for (const auto& s : rep.samples) {
      std::vector<double> row;
      for (std::size_t i = 0; i < s.point.size(); ++i) row.push_back(s.point[i]);
      row.push_back(s.analytic.value_or(nan));
      row.push_back(s.finite_difference.value_or(nan));
      row.push_back(s.reference.value_or(nan));
      a.table.rows.push_back(std::move(row));
    }
    a.plot = PlotSpec{"L " + f.id(), "coord_0", {"analytic", "finite_difference", "reference"}, true};
    r.artifacts.push_back(std::move(a));
  }
  r.result = {{"spec", spec.id()}, {"convention", to_string(spec.convention())}, {"functions", fs}};
  return r;
}

ExperimentResult run_integrate(const ExperimentConfig& cfg, const RunOptions& o) {
  const auto spec = build_spec(cfg);
  const auto x0 = build_x0(cfg);
  const auto ens = ensemble_of(cfg);
  const auto alphas = forms_of(cfg, "forms");
  const bool decompose = cfg.params.value("decompose", true);
  struct Row {
    std::vector<double> total, drift;
  };
  auto rows = map_ensemble(ens, o.threads, [&](std::size_t, std::uint64_t seed) {
    const SamplePath p = simulate_path(spec, x0, ens.horizon, ens.dt, seed);
    Row row;
    for (const auto& a : alphas) {
      if (decompose) {
        const auto d = decompose_integral(a, p, spec);
        row.total.push_back(d.total);
        row.drift.push_back(d.drift_part);
      } else {
        row.total.push_back(line_integral(a, p).value);
        row.drift.push_back(0.0);
      }
    }
    return row;
  });
  ExperimentResult r;
  Artifact art;
  art.stem = "integrals";
  art.table.columns = {"path"};
  for (const auto& a : alphas) {
    art.table.columns.push_back("total_" + a.id());
    if (decompose) art.table.columns.push_back("drift_" + a.id());
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::vector<double> row{static_cast<double>(k)};
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      row.push_back(rows[k].total[j]);
      if (decompose) row.push_back(rows[k].drift[j]);
    }
    art.table.rows.push_back(std::move(row));
  }
  json fs = json::array();
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    std::vector<double> tot, mart;
    for (const auto& row : rows) {
      tot.push_back(row.total[j]);
      mart.push_back(row.total[j] - row.drift[j]);
    }
    const auto st = stats::summarize(tot);
    json e = {{"form", alphas[j].id()}, {"mean", st.mean}, {"stderr", st.stderr_mean}};
    if (decompose) {
      const auto sm = stats::summarize(mart);
      e["martingale_part"] = {{"mean", sm.mean}, {"stderr", sm.stderr_mean},
                              {"pass", std::abs(sm.mean) <= 3.0 * sm.stderr_mean}};
    }
    fs.push_back(e);
  }
  std::vector<std::string> ys;
  for (const auto& a : alphas) ys.push_back("total_" + a.id());
  art.plot = PlotSpec{"line integrals per path", "path", ys, true};
  r.artifacts.push_back(std::move(art));
  r.result = {{"spec", spec.id()}, {"n_paths", ens.n_paths}, {"horizon", ens.horizon},
              {"dt", ens.dt}, {"forms", fs}};
  return r;
}

ExperimentResult run_estimate_cycle(const ExperimentConfig& cfg, const RunOptions& o) {
  const auto spec = build_spec(cfg);
  const auto basis = forms_of(cfg, "forms");
  CycleOptions co;
  co.burn_in_fraction = cfg.ensemble.burn_in;
  co.batches = cfg.params.value("batches", std::size_t{20});
  co.threads = o.threads;
  const auto est = estimate_cycle(spec, build_x0(cfg), basis, ensemble_of(cfg), co);
  ExperimentResult r;
  json ps = json::array();
  for (std::size_t j = 0; j < est.basis.size(); ++j)
    ps.push_back({{"form", est.basis[j]},
                  {"pairing", est.pairings[j]},
                  {"ci95", est.ci95[j]},
                  {"zero_within_3ci95", std::abs(est.pairings[j]) <= 3.0 * est.ci95[j]}});
  r.result = {{"spec", spec.id()},   {"horizon", est.horizon}, {"dt", est.dt},
              {"n_paths", est.n_paths}, {"burn_in", est.burn_in_fraction},
              {"batches", est.batches}, {"pairings", ps}};
  if (!est.basis.empty()) {
    Artifact a;
    a.stem = "cycle_per_path";
    a.table.columns = {"path"};
    for (const auto& b : est.basis) a.table.columns.push_back(b);
    for (std::size_t k = 0; k < est.n_paths; ++k) {
      std::vector<double> row{static_cast<double>(k)};
      for (std::size_t j = 0; j < est.basis.size(); ++j) row.push_back(est.per_path[j][k]);
      a.table.rows.push_back(std::move(row));
    }
    a.plot = PlotSpec{"time-averaged pairings per path", "path", est.basis, true};
    r.artifacts.push_back(std::move(a));
  }
  return r;
}

ExperimentResult run_estimate_measure(const ExperimentConfig& cfg, const RunOptions& o) {
  const auto spec = build_spec(cfg);
  const auto mu = occupation_measure(spec, build_x0(cfg), ensemble_of(cfg), binning_of(cfg),
                                     cfg.ensemble.burn_in, o.threads);
  ExperimentResult r;
  std::size_t occupied = 0;
  double top = 0.0;
  for (double m : mu.masses) {
    occupied += m > 0.0;
    top = std::max(top, m);
  }
  r.result = {{"spec", spec.id()},       {"binning", mu.binning.descriptor()},
              {"bins", mu.masses.size()}, {"sample_count", mu.sample_count},
              {"total_mass", mu.total_mass()}, {"occupied_bins", occupied},
              {"largest_bin_mass", top}};
  r.result.update(coherence_and_pairings(cfg, spec, mu));
  r.artifacts.push_back(measure_artifact(mu, "measure"));
  return r;
}

ExperimentResult run_validate_measure(const ExperimentConfig& cfg, const RunOptions& o) {
  const auto spec = build_spec(cfg);
  const auto binning = binning_of(cfg);
  const std::string kind = cfg.params.value("measure", std::string("occupation"));
  const MeasureEstimate mu =
      kind == "uniform" ? MeasureEstimate::uniform(binning)
                        : occupation_measure(spec, build_x0(cfg), ensemble_of(cfg), binning,
                                             cfg.ensemble.burn_in, o.threads);
  const auto tests = scalars_of(
      strings(cfg.params, "test_functions", default_test_functions(cfg.manifold)), cfg.manifold);
  const auto rs = validate_invariant(mu, spec, tests);
  bool all = true;
  for (const auto& x : rs) all = all && x.pass;
  ExperimentResult r;
  r.result = {{"spec", spec.id()},         {"measure", kind},
              {"binning", binning.descriptor()}, {"sample_count", mu.sample_count},
              {"residuals", residuals_json(rs)}, {"all_pass", all}};
  r.result.update(coherence_and_pairings(cfg, spec, mu));
  r.artifacts.push_back(measure_artifact(mu, "measure"));
  return r;
}

ExperimentResult run_check_lyapunov(const ExperimentConfig& cfg, const RunOptions&) {
  const auto spec = build_spec(cfg);
  const auto beta = forms::by_name(cfg.params.value("form", default_form(cfg.manifold)), cfg.manifold);
  auto region = region_of(cfg);
  if (!region)
    region = cfg.manifold.is_torus() ? RegionSpec::torus_circles({0.0, 0.5}, kDefaultRegionRadius)
                                     : RegionSpec::sphere_poles(kDefaultRegionRadius);
  LyapunovCheckOptions lo;
  lo.grid_resolution = cfg.params.value("grid", std::size_t{256});
  lo.cutoff = cfg.params.value("cutoff", lo.cutoff);
  lo.zero_tol = cfg.params.value("zero_tol", lo.zero_tol);
  lo.keep_grid = cfg.write_csv || cfg.write_plots;
  const auto rep = check_lyapunov(spec, beta, *region, lo);
  ExperimentResult r;
  json zeros = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(rep.zero_set_points.size(), 8); ++i)
    zeros.push_back(to_json(rep.zero_set_points[i]));
  r.result = {{"spec", spec.id()},
              {"convention", to_string(spec.convention())},
              {"form", rep.form_id},
              {"region", rep.region_id},
              {"grid_resolution", rep.grid_resolution},
              {"cutoff", lo.cutoff},
              {"zero_tol", lo.zero_tol},
              {"points_evaluated", rep.points_evaluated},
              {"max_symbol", rep.max_symbol},
              {"argmax", to_json(rep.argmax)},
              {"violation_points", rep.violation_points.size()},
              {"zero_set_points", rep.zero_set_points.size()},
              {"zero_set_sample", zeros},
              {"verdict", to_string(rep.verdict)}};
  Artifact a;
  a.stem = "lyapunov_grid";
  a.table.columns = coord_columns(cfg.manifold);
  a.table.columns.push_back("S_beta_L");
  for (const auto& g : rep.grid) {
    std::vector<double> row;
    for (std::size_t i = 0; i < g.point.size(); ++i) row.push_back(g.point[i]);
    row.push_back(g.symbol);
    a.table.rows.push_back(std::move(row));
  }
  a.plot = PlotSpec{"S beta(L) on the grid", "coord_0", {"S_beta_L"}, true};
  r.artifacts.push_back(std::move(a));
  return r;
}

ExperimentResult run_estimate_f(const ExperimentConfig& cfg, const RunOptions& o) {
  const auto spec = build_spec(cfg);
  const auto beta = forms::by_name(cfg.params.value("form", default_form(cfg.manifold)), cfg.manifold);
  const auto times = cfg.params.contains("times") ? cfg.params["times"].get<std::vector<double>>()
                                                  : std::vector<double>{cfg.ensemble.horizon};
  ExperimentResult r;
  Artifact a;
  a.stem = "f_estimates";
  a.table.columns = {"t", "value", "stderr", "cross_value", "cross_stderr", "value_over_t"};
  json es = json::array();
  double symbol = 0.0;
  for (double t : times) {
    if (!(t >= 0.0)) throw ConfigError("params.times must be nonnegative");
    EnsembleSpec ens = ensemble_of(cfg);
    if (t > 0.0 && ens.dt > t) ens.dt = t;
    const auto f = estimate_f(spec, beta, build_x0(cfg), t, ens, o.threads);
    symbol = f.symbol_at_x0;
    const double slope = t > 0.0 ? f.value / t : f.symbol_at_x0;
    es.push_back({{"t", t},
                  {"dt", ens.dt},
                  {"value", f.value},
                  {"stderr", f.stderr_value},
                  {"cross_value", f.cross_value},
                  {"cross_stderr", f.cross_stderr},
                  {"difference_stderr", f.difference_stderr},
                  {"agree", f.agree},
                  {"value_over_t", slope},
                  {"stopped_paths", f.stopped_paths},
                  {"n_paths", f.n_paths}});
    a.table.rows.push_back({t, f.value, f.stderr_value, f.cross_value, f.cross_stderr, slope});
  }
  a.plot = PlotSpec{"f(t, x0)", "t", {"value", "cross_value"}, false};
  r.artifacts.push_back(std::move(a));
  r.result = {{"spec", spec.id()}, {"form", beta.id()}, {"x0", to_json(cfg.x0)},
              {"symbol_at_x0", symbol}, {"estimates", es}};
  return r;
}

json consistency_json(const ConsistencyCheck& c) {
  return {{"convention", to_string(c.convention)}, {"mean", c.mean}, {"stderr", c.stderr_mean},
          {"pass", c.pass}};
}

ExperimentResult run_tail_bound(const ExperimentConfig& cfg, const RunOptions& o) {
  const auto spec = build_spec(cfg);
  const auto f = scalars::by_name(cfg.params.value("function", default_function(cfg.manifold)), cfg.manifold);
  const double t = cfg.params.value("t", cfg.ensemble.horizon);
  const auto ks = cfg.params.contains("k") ? cfg.params["k"].get<std::vector<double>>()
                                           : std::vector<double>{2.0, 5.0, 10.0, 50.0};
  EnsembleSpec ens = ensemble_of(cfg);
  if (ens.dt > t) ens.dt = t;
  const auto reps = tail_bound_experiment(spec, f, build_x0(cfg), t, ks, ens, o.threads,
                                          cfg.params.value("grid", std::size_t{256}));
  ExperimentResult r;
  Artifact a;
  a.stem = "tail_bound";
  a.table.columns = {"k", "p_hat", "wilson_lower", "wilson_upper", "bound", "bound_half", "bound_unit"};
  json rows = json::array();
  bool monotone = true;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const auto& x = reps[i];
    if (i > 0 && ks[i] >= ks[i - 1] && x.p_hat > reps[i - 1].p_hat) monotone = false;
    rows.push_back({{"k", x.k},
                    {"hits", x.hits},
                    {"p_hat", x.p_hat},
                    {"wilson_lower", x.wilson_lower},
                    {"wilson_upper", x.wilson_upper},
                    {"bound", x.bound},
                    {"margin", x.margin},
                    {"vacuous", x.vacuous},
                    {"bound_half", x.bound_half},
                    {"bound_unit", x.bound_unit}});
    a.table.rows.push_back({x.k, x.p_hat, x.wilson_lower, x.wilson_upper, x.bound, x.bound_half, x.bound_unit});
  }
  const auto& first = reps.front();
  r.result = {{"spec", spec.id()},
              {"function", first.function_id},
              {"t", t},
              {"dt", ens.dt},
              {"x0", to_json(first.x0)},
              {"f_x0", first.f_x0},
              {"n_paths", first.n_paths},
              {"stopped_paths", first.stopped_paths},
              {"mean_f_t", first.mean_f_t},
              {"decay_constant", {{"half", first.decay_half}, {"unit", first.decay_unit}}},
              {"consistency",
               {{"half", consistency_json(first.consistency_half)},
                {"unit", consistency_json(first.consistency_unit)}}},
              {"p_hat_monotone_in_k", monotone},
              {"levels", rows}};
  a.plot = PlotSpec{"tail probability against k", "k", {"p_hat", "wilson_upper", "bound"}, false, true, true};
  r.artifacts.push_back(std::move(a));
  return r;
}

ExperimentResult run_fluctuation(const ExperimentConfig& cfg, const RunOptions& o) {
  const auto spec = build_spec(cfg);
  const auto alpha = forms::by_name(cfg.params.value("form", std::string(cfg.manifold.is_torus() ? "torus_dy" : "exact:sphere_x1")), cfg.manifold);
  const auto lambdas = cfg.params.contains("lambdas") ? cfg.params["lambdas"].get<std::vector<double>>()
                                                      : std::vector<double>{4.0, 16.0, 64.0};
  const auto times = cfg.params.contains("times") ? cfg.params["times"].get<std::vector<double>>()
                                                  : std::vector<double>{0.25, 0.5, 0.75, 1.0};
  const auto rep = fluctuation_experiment(spec, build_x0(cfg), alpha, lambdas, times, ensemble_of(cfg), o.threads);
  ExperimentResult r;
  json ls = json::array();
  Artifact a;
  a.stem = "fluctuation";
  a.table.columns = {"t"};
  std::vector<std::string> ys;
  for (double l : lambdas) {
    ys.push_back("variance_lambda_" + std::to_string(static_cast<long long>(std::llround(l))));
    a.table.columns.push_back(ys.back());
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row{times[i]};
    for (std::size_t l = 0; l < lambdas.size(); ++l) row.push_back(rep.variances[l][i]);
    a.table.rows.push_back(std::move(row));
  }
  for (std::size_t l = 0; l < lambdas.size(); ++l)
    ls.push_back({{"lambda", lambdas[l]},
                  {"variances", rep.variances[l]},
                  {"means", rep.means[l]},
                  {"slope", rep.slopes[l]},
                  {"intercept", rep.intercepts[l]},
                  {"r_squared", rep.r_squared[l]}});
  r.result = {{"spec", spec.id()},   {"form", rep.form_id},   {"times", times},
              {"n_paths", rep.n_paths}, {"dt", rep.dt},        {"lambdas", ls},
              {"skewness", rep.skewness}, {"excess_kurtosis", rep.excess_kurtosis}};
  a.plot = PlotSpec{"variance of the rescaled fluctuation", "t", ys, false};
  r.artifacts.push_back(std::move(a));
  return r;
}

ExperimentResult run_paper_suite(const ExperimentConfig& cfg, const RunOptions& o) {
  SuiteOptions so;
  so.quick = o.quick;
  so.threads = o.threads;
  so.base_seed = cfg.ensemble.base_seed;
  if (o.progress) so.on_result = [&](const CriterionResult& c) { o.progress(summary_line(c)); };
  const auto res = run_suite(so);
  ExperimentResult r;
  r.result = res.to_json();
  r.ok = res.all_pass;
  for (const auto& c : res.criteria) r.meta["criterion_seconds"][std::to_string(c.id)] = c.seconds;
  return r;
}

}  // namespace

ExperimentConfig apply_quick(ExperimentConfig cfg) {
  cfg.ensemble.n_paths = std::min<std::size_t>(cfg.ensemble.n_paths, 500);
  return cfg;
}

void resolve_names(const ExperimentConfig& cfg) {
  try {
    build_spec(cfg);
    const auto& p = cfg.params;
    if (p.contains("forms"))
      for (const auto& n : p["forms"].get<std::vector<std::string>>()) forms::by_name(n, cfg.manifold);
    if (p.contains("form")) forms::by_name(p["form"].get<std::string>(), cfg.manifold);
    for (const char* key : {"functions", "test_functions"})
      if (p.contains(key)) scalars_of(p[key].get<std::vector<std::string>>(), cfg.manifold);
    if (p.contains("function")) scalars::by_name(p["function"].get<std::string>(), cfg.manifold);
    if (p.contains("measure") && p["measure"] != "occupation" && p["measure"] != "uniform")
      throw ConfigError("params.measure must be occupation or uniform");
    if (p.contains("binning") ||
        cfg.experiment == "estimate-measure" || cfg.experiment == "validate-measure")
      binning_of(cfg);
    region_of(cfg);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  const auto& e = cfg.experiment;
  if (e == "simulate") return run_simulate(cfg, opts);
  if (e == "generator-check") return run_generator_check(cfg, opts);
  if (e == "integrate") return run_integrate(cfg, opts);
  if (e == "estimate-cycle") return run_estimate_cycle(cfg, opts);
  if (e == "estimate-measure") return run_estimate_measure(cfg, opts);
  if (e == "validate-measure") return run_validate_measure(cfg, opts);
  if (e == "check-lyapunov") return run_check_lyapunov(cfg, opts);
  if (e == "estimate-f") return run_estimate_f(cfg, opts);
  if (e == "tail-bound") return run_tail_bound(cfg, opts);
  if (e == "fluctuation") return run_fluctuation(cfg, opts);
  if (e == "paper-suite") return run_paper_suite(cfg, opts);
  throw ConfigError("unknown experiment '" + e + "'");
}

}  // namespace stochform::app
