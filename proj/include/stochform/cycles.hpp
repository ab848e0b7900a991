#pragma once

#include <string>
#include <vector>

#include "stochform/forms.hpp"
#include "stochform/generator.hpp"
#include "stochform/measures.hpp"

namespace stochform {

struct CycleOptions {
  double burn_in_fraction = 0.1;
  std::size_t batches = 20;
  unsigned threads = 1;
};

struct CycleEstimate {
  std::vector<std::string> basis;
  std::vector<double> pairings;
  std::vector<double> ci95;
  /// per_path[j][k]: time average of form j along path k.
  std::vector<std::vector<double>> per_path;
  double horizon = 0.0;
  double dt = 0.0;
  std::size_t n_paths = 0;
  double burn_in_fraction = 0.0;
  std::size_t batches = 0;
};

/// Time averages (1/T_eff) int alpha dX over the post-burn-in window, pooled
/// over paths with batch-means confidence intervals.
CycleEstimate estimate_cycle(const DiffusionSpec& spec, const ManifoldPoint& x0,
                             const std::vector<OneForm>& basis, const EnsembleSpec& ens,
                             const CycleOptions& opts = {});

/// sum over bins of S alpha(L)(center) * mass.
double estimate_J(const DiffusionSpec& spec, const MeasureEstimate& mu, const OneForm& alpha,
                  DerivativeMethod method = DerivativeMethod::Auto);

struct FluctuationReport {
  std::string form_id;
  std::vector<double> lambdas;
  std::vector<double> times;
  /// variances[l][i], means[l][i]: across paths at lambda l, time i.
  std::vector<std::vector<double>> variances;
  std::vector<std::vector<double>> means;
  std::vector<double> slopes;
  std::vector<double> intercepts;
  std::vector<double> r_squared;
  double skewness = 0.0;         // largest lambda, largest t
  double excess_kurtosis = 0.0;
  std::size_t n_paths = 0;
  double dt = 0.0;
};

/// M_t = lambda^{-1/2} (int_0^{lambda t} alpha dX - int_0^{lambda t} S alpha(L) ds),
/// all (lambda, t) pairs read off one simulation per path up to
/// max(lambda) * max(t). The ensemble horizon is ignored.
FluctuationReport fluctuation_experiment(const DiffusionSpec& spec, const ManifoldPoint& x0,
                                         const OneForm& alpha, const std::vector<double>& lambdas,
                                         const std::vector<double>& times, const EnsembleSpec& ens,
                                         unsigned threads = 1);

}  // namespace stochform
