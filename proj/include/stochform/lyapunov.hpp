#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stochform/forms.hpp"
#include "stochform/generator.hpp"
#include "stochform/region.hpp"

namespace stochform {

enum class LyapunovVerdict { Strict, NonStrictZeroSet, Violated };

std::string to_string(LyapunovVerdict v);

/// Grid nodes over M. Torus: (i/N, j/N), i, j < N. S^2: theta_i = i pi / N
/// (i = 0..N) from e_1, phi_j = 2 pi j / N (j < N). S^n, n > 2: the same
/// grid on the (x_1, x_2, x_3) slice. S^1: N equally spaced angles.
std::vector<Vec> manifold_grid(const Manifold& m, std::size_t resolution);

struct LyapunovCheckOptions {
  std::size_t grid_resolution = 256;
  double cutoff = 1e-4;
  double zero_tol = 1e-8;
  DerivativeMethod method = DerivativeMethod::Auto;
  bool keep_grid = false;
};

struct GridValue {
  Vec point;
  double symbol;
};

struct LyapunovCheckReport {
  std::string form_id;
  std::string region_id;
  std::size_t grid_resolution = 0;
  std::size_t points_evaluated = 0;
  double max_symbol = 0.0;
  Vec argmax;
  /// Points with symbol > zero_tol.
  std::vector<Vec> violation_points;
  /// Points with |symbol| <= zero_tol.
  std::vector<Vec> zero_set_points;
  LyapunovVerdict verdict = LyapunovVerdict::Violated;
  std::vector<GridValue> grid;  // filled when keep_grid
};

/// Evaluates S beta(L) on the grid minus the cutoff neighborhood of W.
LyapunovCheckReport check_lyapunov(const DiffusionSpec& spec, const OneForm& beta,
                                   const RegionSpec& region, const LyapunovCheckOptions& opts = {});

/// CSV: coords...,S_beta_L
void write_lyapunov_grid_csv(std::ostream& os, const LyapunovCheckReport& report,
                             const Manifold& m);

struct FEstimate {
  double t = 0.0;
  double value = 0.0;  // mean of int_0^t S beta(L)(X_s) ds
  double stderr_value = 0.0;
  double cross_value = 0.0;  // mean of int_0^t beta dX
  double cross_stderr = 0.0;
  double difference_stderr = 0.0;  // paired
  bool agree = false;              // |value - cross| <= 3 difference_stderr
  std::size_t n_paths = 0;
  std::size_t stopped_paths = 0;
  double symbol_at_x0 = 0.0;
};

/// f(t, x0) = E int_0^t S beta(L) ds, cross-checked against E int beta dX.
/// Paths reaching the cutoff neighborhood of beta's singular set stop there
/// and contribute their stopped integrals.
FEstimate estimate_f(const DiffusionSpec& spec, const OneForm& beta, const ManifoldPoint& x0,
                     double t, const EnsembleSpec& ens, unsigned threads = 1);

struct ConsistencyCheck {
  Convention convention = Convention::Half;
  double mean = 0.0;  // E[f(X_t) - f(x0) - int L f ds]
  double stderr_mean = 0.0;
  bool pass = false;  // |mean| <= 3 stderr
};

struct TailBoundReport {
  std::string function_id;
  double t = 0.0;
  double k = 0.0;
  Vec x0;
  double f_x0 = 0.0;
  std::size_t n_paths = 0;
  std::size_t hits = 0;
  double p_hat = 0.0;
  double wilson_lower = 0.0;
  double wilson_upper = 0.0;
  /// (2t - f(x0)) / (k - f(x0)), the bound with decay constant 2.
  double bound = 0.0;
  double margin = 0.0;  // bound - wilson_upper
  bool vacuous = false;
  /// max over M of -L f, per convention, and the bound (D t - f) / (k - f).
  double decay_half = 0.0;
  double decay_unit = 0.0;
  double bound_half = 0.0;
  double bound_unit = 0.0;
  std::size_t stopped_paths = 0;
  double mean_f_t = 0.0;  // over paths that did not stop
  ConsistencyCheck consistency_half;
  ConsistencyCheck consistency_unit;
};

/// One ensemble to time t, reported for every k in `ks`. Requires k > 2t,
/// f <= 0 on M minus its singular set, f(x0) finite.
std::vector<TailBoundReport> tail_bound_experiment(const DiffusionSpec& spec, const ScalarField& f,
                                                   const ManifoldPoint& x0, double t,
                                                   const std::vector<double>& ks,
                                                   const EnsembleSpec& ens, unsigned threads = 1,
                                                   std::size_t grid_resolution = 256);

}  // namespace stochform
