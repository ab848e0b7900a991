#include "stochform/cycles.hpp"

#include <algorithm>
#include <cmath>

#include "stochform/stats.hpp"

namespace stochform {

CycleEstimate estimate_cycle(const DiffusionSpec& spec, const ManifoldPoint& x0,
                             const std::vector<OneForm>& basis, const EnsembleSpec& ens,
                             const CycleOptions& opts) {
  for (const auto& alpha : basis) {
    if (!alpha.closed())
      throw Error(ErrorKind::NonClosedForm, alpha.id() + " is not flagged closed");
    if (!(alpha.manifold() == spec.manifold()))
      throw Error(ErrorKind::ManifoldMismatch, alpha.id() + " does not live on " +
                                                   spec.manifold().name());
  }
  if (!(opts.burn_in_fraction >= 0.0 && opts.burn_in_fraction < 1.0))
    throw Error(ErrorKind::InvalidArgument, "burn-in fraction must lie in [0, 1)");
  if (opts.batches == 0) throw Error(ErrorKind::InvalidArgument, "batches must be positive");
  ens.validate();

  CycleEstimate out;
  out.horizon = ens.horizon;
  out.dt = ens.dt;
  out.n_paths = ens.n_paths;
  out.burn_in_fraction = opts.burn_in_fraction;
  out.batches = std::min(opts.batches, ens.n_paths);
  for (const auto& alpha : basis) out.basis.push_back(alpha.id());
  if (basis.empty()) return out;

  const std::size_t steps = ens.steps();
  const auto start = static_cast<std::size_t>(
      std::llround(opts.burn_in_fraction * static_cast<double>(steps)));
  const double window = static_cast<double>(steps - start) * ens.dt;
  if (!(window > 0.0)) throw Error(ErrorKind::EmptyAfterBurnIn, "no steps left after burn-in");

  auto averages = map_ensemble(ens, opts.threads, [&](std::size_t, std::uint64_t seed) {
    std::vector<LineIntegrator> integrators;
    for (const auto& alpha : basis) integrators.emplace_back(alpha);
    BrownianIncrements noise(seed, ens.dt, spec.noise_dim());
    simulate_streaming(spec, x0, steps, noise, [&](const PathStep& s) {
      if (s.index >= start)
        for (auto& integ : integrators) integ.add(s.from, s.to, s.index);
      return true;
    });
    std::vector<double> a;
    for (const auto& integ : integrators) a.push_back(integ.value() / window);
    return a;
  });

  out.per_path.assign(basis.size(), std::vector<double>(ens.n_paths));
  for (std::size_t k = 0; k < ens.n_paths; ++k)
    for (std::size_t j = 0; j < basis.size(); ++j) out.per_path[j][k] = averages[k][j];
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto bm = stats::batch_means(out.per_path[j], out.batches);
    out.pairings.push_back(stats::summarize(out.per_path[j]).mean);
    out.ci95.push_back(bm.ci95);
  }
  return out;
}

double estimate_J(const DiffusionSpec& spec, const MeasureEstimate& mu, const OneForm& alpha,
                  DerivativeMethod method) {
  if (!(mu.manifold() == spec.manifold()))
    throw Error(ErrorKind::ManifoldMismatch, "measure and spec live on different manifolds");
  double total = 0.0;
  for (std::size_t b = 0; b < mu.masses.size(); ++b) {
    if (mu.masses[b] <= 0.0) continue;
    total += stratonovich_symbol(spec, alpha, mu.binning.center(b), method) * mu.masses[b];
  }
  return total;
}

FluctuationReport fluctuation_experiment(const DiffusionSpec& spec, const ManifoldPoint& x0,
                                         const OneForm& alpha, const std::vector<double>& lambdas,
                                         const std::vector<double>& times, const EnsembleSpec& ens,
                                         unsigned threads) {
  if (!alpha.closed()) throw Error(ErrorKind::NonClosedForm, alpha.id() + " is not flagged closed");
  if (lambdas.empty() || times.empty())
    throw Error(ErrorKind::InvalidArgument, "fluctuation grids must be nonempty");
  for (double l : lambdas)
    if (!(l > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
  for (double t : times)
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "times must be positive");

  EnsembleSpec run = ens;
  run.horizon = *std::max_element(lambdas.begin(), lambdas.end()) *
                *std::max_element(times.begin(), times.end());
  run.validate();
  const std::size_t steps = run.steps();

  // checkpoint step for every (lambda, t) pair, row-major in lambda
  const std::size_t nl = lambdas.size(), nt = times.size();
  std::vector<std::size_t> checkpoint(nl * nt);
  for (std::size_t l = 0; l < nl; ++l)
    for (std::size_t i = 0; i < nt; ++i)
      checkpoint[l * nt + i] = static_cast<std::size_t>(std::llround(lambdas[l] * times[i] / run.dt));

  auto samples = map_ensemble(run, threads, [&](std::size_t, std::uint64_t seed) {
    std::vector<double> values(nl * nt, 0.0);
    LineIntegrator integ(alpha);
    BrownianIncrements noise(seed, run.dt, spec.noise_dim());
    double drift = 0.0;
    double s_prev = stratonovich_symbol(spec, alpha, x0.coords());
    auto record = [&](std::size_t step) {
      for (std::size_t c = 0; c < checkpoint.size(); ++c)
        if (checkpoint[c] == step)
          values[c] = (integ.value() - drift) / std::sqrt(lambdas[c / nt]);
    };
    simulate_streaming(spec, x0, steps, noise, [&](const PathStep& s) {
      integ.add(s.from, s.to, s.index);
      const double s_cur = stratonovich_symbol(spec, alpha, s.to);
      drift += 0.5 * (s_prev + s_cur) * s.dt;
      s_prev = s_cur;
      record(s.index + 1);
      return true;
    });
    return values;
  });

  FluctuationReport r;
  r.form_id = alpha.id();
  r.lambdas = lambdas;
  r.times = times;
  r.n_paths = run.n_paths;
  r.dt = run.dt;
  std::vector<double> column(run.n_paths);
  for (std::size_t l = 0; l < nl; ++l) {
    std::vector<double> var(nt), mean(nt);
    for (std::size_t i = 0; i < nt; ++i) {
      for (std::size_t k = 0; k < run.n_paths; ++k) column[k] = samples[k][l * nt + i];
      const auto s = stats::summarize(column);
      var[i] = s.variance;
      mean[i] = s.mean;
    }
    const auto fit = stats::linear_fit(times, var);
    r.variances.push_back(std::move(var));
    r.means.push_back(std::move(mean));
    r.slopes.push_back(fit.slope);
    r.intercepts.push_back(fit.intercept);
    r.r_squared.push_back(fit.r_squared);
  }
  const std::size_t l_max = static_cast<std::size_t>(
      std::max_element(lambdas.begin(), lambdas.end()) - lambdas.begin());
  const std::size_t t_max = static_cast<std::size_t>(
      std::max_element(times.begin(), times.end()) - times.begin());
  for (std::size_t k = 0; k < run.n_paths; ++k) column[k] = samples[k][l_max * nt + t_max];
  const auto shape = stats::shape_moments(column);
  r.skewness = shape.skewness;
  r.excess_kurtosis = shape.excess_kurtosis;
  return r;
}

}  // namespace stochform
