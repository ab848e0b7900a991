#include "stochform/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "stochform/stats.hpp"

namespace stochform {

std::string to_string(LyapunovVerdict v) {
  switch (v) {
    case LyapunovVerdict::Strict: return "Strict";
    case LyapunovVerdict::NonStrictZeroSet: return "NonStrictZeroSet";
    case LyapunovVerdict::Violated: return "Violated";
  }
  return "unknown";
}

std::vector<Vec> manifold_grid(const Manifold& m, std::size_t resolution) {
  if (resolution == 0) throw Error(ErrorKind::InvalidArgument, "grid resolution must be positive");
  const double n = static_cast<double>(resolution);
  std::vector<Vec> out;
  if (m.is_torus()) {
    out.reserve(resolution * resolution);
    for (std::size_t i = 0; i < resolution; ++i)
      for (std::size_t j = 0; j < resolution; ++j)
        out.push_back(Vec{static_cast<double>(i) / n, static_cast<double>(j) / n});
    return out;
  }
  if (m.dim() == 1) {
    for (std::size_t i = 0; i < resolution; ++i) {
      const double a = 2.0 * static_cast<double>(i) / n;
      out.push_back(Vec{cospi(a), sinpi(a)});
    }
    return out;
  }
  out.reserve((resolution + 1) * resolution);
  for (std::size_t i = 0; i <= resolution; ++i) {
    const double theta = static_cast<double>(i) / n;  // in units of pi
    for (std::size_t j = 0; j < resolution; ++j) {
      const double phi = 2.0 * static_cast<double>(j) / n;
      Vec v(m.coord_dim());
      v[0] = cospi(theta);
      v[1] = sinpi(theta) * cospi(phi);
      v[2] = sinpi(theta) * sinpi(phi);
      out.push_back(v);
    }
  }
  return out;
}

LyapunovCheckReport check_lyapunov(const DiffusionSpec& spec, const OneForm& beta,
                                   const RegionSpec& region, const LyapunovCheckOptions& opts) {
  if (!beta.closed()) throw Error(ErrorKind::NonClosedForm, beta.id() + " is not flagged closed");
  if (!(opts.cutoff > 0.0)) throw Error(ErrorKind::InvalidArgument, "cutoff must be positive");
  LyapunovCheckReport r;
  r.form_id = beta.id();
  r.region_id = region.id();
  r.grid_resolution = opts.grid_resolution;
  r.max_symbol = -std::numeric_limits<double>::infinity();
  for (const Vec& x : manifold_grid(spec.manifold(), opts.grid_resolution)) {
    if (region.distance(x) < opts.cutoff) continue;
    const double s = stratonovich_symbol(spec, beta, x, opts.method);
    ++r.points_evaluated;
    if (s > r.max_symbol) {
      r.max_symbol = s;
      r.argmax = x;
    }
    if (s > opts.zero_tol)
      r.violation_points.push_back(x);
    else if (std::abs(s) <= opts.zero_tol)
      r.zero_set_points.push_back(x);
    if (opts.keep_grid) r.grid.push_back({x, s});
  }
  if (r.points_evaluated == 0)
    throw Error(ErrorKind::InvalidArgument, "no grid points outside the cutoff neighborhood");
  if (!r.violation_points.empty())
    r.verdict = LyapunovVerdict::Violated;
  else if (!r.zero_set_points.empty())
    r.verdict = LyapunovVerdict::NonStrictZeroSet;
  else
    r.verdict = LyapunovVerdict::Strict;
  return r;
}

void write_lyapunov_grid_csv(std::ostream& os, const LyapunovCheckReport& report,
                             const Manifold& m) {
  const std::size_t d = m.coord_dim();
  for (std::size_t i = 0; i < d; ++i) os << "coord_" << i << ',';
  os << "S_beta_L\n";
  const auto old = os.precision(17);
  for (const auto& g : report.grid) {
    for (std::size_t i = 0; i < d; ++i) os << g.point[i] << ',';
    os << g.symbol << '\n';
  }
  os.precision(old);
}

FEstimate estimate_f(const DiffusionSpec& spec, const OneForm& beta, const ManifoldPoint& x0,
                     double t, const EnsembleSpec& ens, unsigned threads) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "t must be nonnegative");
  if (beta.near_singular(x0.coords()))
    throw Error(ErrorKind::SingularProximity, "x0 lies inside the cutoff neighborhood");
  FEstimate out;
  out.t = t;
  out.n_paths = ens.n_paths;
  out.symbol_at_x0 = stratonovich_symbol(spec, beta, x0.coords());
  if (t == 0.0) {
    out.agree = true;
    return out;
  }
  EnsembleSpec run = ens;
  run.horizon = t;
  run.validate();
  const std::size_t steps = run.steps();

  struct PathResult {
    double drift = 0.0;
    double integral = 0.0;
    bool stopped = false;
  };
  auto results = map_ensemble(run, threads, [&](std::size_t, std::uint64_t seed) {
    PathResult p;
    LineIntegrator integ(beta);
    BrownianIncrements noise(seed, run.dt, spec.noise_dim());
    double s_prev = out.symbol_at_x0;
    simulate_streaming(spec, x0, steps, noise, [&](const PathStep& s) {
      try {
        integ.add(s.from, s.to, s.index);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularProximity) throw;
        p.stopped = true;
        return false;
      }
      const double s_cur = stratonovich_symbol(spec, beta, s.to);
      p.drift += 0.5 * (s_prev + s_cur) * s.dt;
      s_prev = s_cur;
      return true;
    });
    p.integral = integ.value();
    return p;
  });

  std::vector<double> drift, cross, diff;
  for (const auto& p : results) {
    drift.push_back(p.drift);
    cross.push_back(p.integral);
    diff.push_back(p.drift - p.integral);
    if (p.stopped) ++out.stopped_paths;
  }
  const auto sd = stats::summarize(drift), sc = stats::summarize(cross),
             sdiff = stats::summarize(diff);
  out.value = sd.mean;
  out.stderr_value = sd.stderr_mean;
  out.cross_value = sc.mean;
  out.cross_stderr = sc.stderr_mean;
  out.difference_stderr = sdiff.stderr_mean;
  out.agree = std::abs(sdiff.mean) <= 3.0 * sdiff.stderr_mean;
  return out;
}

namespace {

double decay_constant(const DiffusionSpec& spec, const ScalarField& f, std::size_t resolution) {
  double d = -std::numeric_limits<double>::infinity();
  for (const Vec& x : manifold_grid(spec.manifold(), resolution)) {
    if (f.near_singular(x)) continue;
    d = std::max(d, -apply_generator(spec, f, x));
  }
  return d;
}

ConsistencyCheck consistency(Convention c, const std::vector<double>& residuals) {
  ConsistencyCheck out;
  out.convention = c;
  if (residuals.empty()) return out;
  const auto s = stats::summarize(residuals);
  out.mean = s.mean;
  out.stderr_mean = s.stderr_mean;
  out.pass = std::abs(s.mean) <= 3.0 * s.stderr_mean;
  return out;
}

}  // namespace

std::vector<TailBoundReport> tail_bound_experiment(const DiffusionSpec& spec, const ScalarField& f,
                                                   const ManifoldPoint& x0, double t,
                                                   const std::vector<double>& ks,
                                                   const EnsembleSpec& ens, unsigned threads,
                                                   std::size_t grid_resolution) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "t must be positive");
  if (ks.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one k");
  for (double k : ks)
    if (!(k > 2.0 * t)) throw Error(ErrorKind::InvalidArgument, "k must exceed 2t");
  if (f.near_singular(x0.coords()))
    throw Error(ErrorKind::SingularProximity, "x0 lies inside the cutoff neighborhood");
  const double f0 = f(x0.coords());
  if (!std::isfinite(f0)) throw Error(ErrorKind::NonFinite, "f(x0) is not finite");
  for (const Vec& x : manifold_grid(spec.manifold(), grid_resolution))
    if (!f.near_singular(x) && f(x) > 1e-12)
      throw Error(ErrorKind::InvalidArgument, f.id() + " is positive somewhere off its singular set");

  const DiffusionSpec half = spec.with_convention(Convention::Half);
  const DiffusionSpec unit = spec.with_convention(Convention::Unit);
  const double d_half = decay_constant(half, f, grid_resolution);
  const double d_unit = decay_constant(unit, f, grid_resolution);

  EnsembleSpec run = ens;
  run.horizon = t;
  run.validate();
  const std::size_t steps = run.steps();

  struct PathResult {
    double f_t = 0.0;
    bool stopped = false;
    double residual_half = 0.0;
    double residual_unit = 0.0;
  };
  auto results = map_ensemble(run, threads, [&](std::size_t, std::uint64_t seed) {
    PathResult p;
    BrownianIncrements noise(seed, run.dt, spec.noise_dim());
    double lh_prev = apply_generator(half, f, x0.coords());
    double lu_prev = apply_generator(unit, f, x0.coords());
    double ih = 0.0, iu = 0.0;
    Vec last = x0.coords();
    simulate_streaming(spec, x0, steps, noise, [&](const PathStep& s) {
      if (f.near_singular(s.to)) {
        p.stopped = true;
        return false;
      }
      const double lh = apply_generator(half, f, s.to);
      const double lu = apply_generator(unit, f, s.to);
      ih += 0.5 * (lh_prev + lh) * s.dt;
      iu += 0.5 * (lu_prev + lu) * s.dt;
      lh_prev = lh;
      lu_prev = lu;
      last = s.to;
      return true;
    });
    if (p.stopped) {
      p.f_t = -std::numeric_limits<double>::infinity();
      return p;
    }
    p.f_t = f(last);
    p.residual_half = p.f_t - f0 - ih;
    p.residual_unit = p.f_t - f0 - iu;
    return p;
  });

  std::vector<double> live_f, res_half, res_unit;
  std::size_t stopped = 0;
  for (const auto& p : results) {
    if (p.stopped) {
      ++stopped;
      continue;
    }
    live_f.push_back(p.f_t);
    res_half.push_back(p.residual_half);
    res_unit.push_back(p.residual_unit);
  }
  const double mean_f = live_f.empty() ? 0.0 : stats::summarize(live_f).mean;
  const ConsistencyCheck c_half = consistency(Convention::Half, res_half);
  const ConsistencyCheck c_unit = consistency(Convention::Unit, res_unit);

  std::vector<TailBoundReport> out;
  for (double k : ks) {
    TailBoundReport r;
    r.function_id = f.id();
    r.t = t;
    r.k = k;
    r.x0 = x0.coords();
    r.f_x0 = f0;
    r.n_paths = run.n_paths;
    for (const auto& p : results)
      if (p.f_t <= f0 - k) ++r.hits;
    r.p_hat = static_cast<double>(r.hits) / static_cast<double>(r.n_paths);
    const auto w = stats::wilson(r.hits, r.n_paths);
    r.wilson_lower = w.lower;
    r.wilson_upper = w.upper;
    r.bound = (2.0 * t - f0) / (k - f0);
    r.margin = r.bound - r.wilson_upper;
    r.vacuous = r.bound >= 1.0;
    r.decay_half = d_half;
    r.decay_unit = d_unit;
    r.bound_half = (d_half * t - f0) / (k - f0);
    r.bound_unit = (d_unit * t - f0) / (k - f0);
    r.stopped_paths = stopped;
    r.mean_f_t = mean_f;
    r.consistency_half = c_half;
    r.consistency_unit = c_unit;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace stochform
