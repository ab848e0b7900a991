#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stochform/forms.hpp"
#include "stochform/sde.hpp"

namespace stochform {

enum class DerivativeMethod { Auto, Analytic, FiniteDifference };

std::string to_string(DerivativeMethod m);

/// True when f and every field of the spec carry analytic derivatives.
bool has_analytic_generator(const DiffusionSpec& spec, const ScalarField& f);
bool has_analytic_symbol(const DiffusionSpec& spec, const OneForm& alpha);

/// L f(x) = V f + c sum_i X_i (X_i f), c from the spec's convention.
/// Accepts lifted torus coordinates. Throws DomainViolation near f's
/// singular set, InvalidArgument if Analytic is requested but unavailable.
double apply_generator(const DiffusionSpec& spec, const ScalarField& f, const Vec& x,
                       DerivativeMethod method = DerivativeMethod::Auto);
double apply_generator(const DiffusionSpec& spec, const ScalarField& f, const ManifoldPoint& x,
                       DerivativeMethod method = DerivativeMethod::Auto);

/// S alpha(L)(x) = alpha(V) + c sum_i X_i(alpha(X_i)).
double stratonovich_symbol(const DiffusionSpec& spec, const OneForm& alpha, const Vec& x,
                           DerivativeMethod method = DerivativeMethod::Auto);
double stratonovich_symbol(const DiffusionSpec& spec, const OneForm& alpha,
                           const ManifoldPoint& x,
                           DerivativeMethod method = DerivativeMethod::Auto);

/// Externally stated closed form for a catalog (spec, function) pair, kept
/// next to the computed values so disagreements stay visible in reports.
struct ReferenceFormula {
  std::string label;
  std::function<double(const Vec&)> value;
};

std::optional<ReferenceFormula> reference_formula(const DiffusionSpec& spec,
                                                  const ScalarField& f);

struct GeneratorSample {
  Vec point;
  std::optional<double> analytic;
  std::optional<double> finite_difference;
  std::optional<double> reference;
};

struct GeneratorReport {
  std::string function_id;
  std::string spec_id;
  Convention convention = Convention::Half;
  std::vector<GeneratorSample> samples;
  /// Present only when both methods were evaluated.
  std::optional<double> max_deviation;
  std::optional<std::string> reference_label;
};

GeneratorReport generator_report(const DiffusionSpec& spec, const ScalarField& f,
                                 const std::vector<Vec>& points);

struct MartingaleTestReport {
  std::string function_id;
  std::size_t n_paths = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  double z_score = 0.0;
  bool pass = false;  // |mean| <= 3 stderr
};

/// R_T = f(X_T) - f(X_0) - int_0^T L f(X_s) ds over an ensemble, trapezoidal
/// quadrature, f evaluated on lifted torus coordinates.
MartingaleTestReport martingale_residual_test(const DiffusionSpec& spec, const ScalarField& f,
                                              const ManifoldPoint& x0, const EnsembleSpec& ens,
                                              unsigned threads = 1,
                                              DerivativeMethod method = DerivativeMethod::Auto);

/// Uniform random points on M (Gaussian normalization on the sphere).
std::vector<Vec> random_points(const Manifold& m, std::size_t n, std::uint64_t seed);

}  // namespace stochform
