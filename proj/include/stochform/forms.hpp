#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stochform/fields.hpp"
#include "stochform/sde.hpp"

namespace stochform {

/// A 1-form alpha, evaluated as alpha_x(v) on ambient (sphere) or chart
/// (torus) coordinates.
///
/// Forms with a known covector field omega (alpha_x(v) = omega(x) . v) also
/// expose its derivative so the Stratonovich symbol has an analytic route:
/// covector_deriv(x, w, v) = d/dt omega(x + t w) . v at t = 0.
class OneForm {
 public:
  enum class Kind { ExactOf, TorusBasisDx, TorusBasisDy, Combination, UserClosure };
  using Eval = std::function<double(const Vec& x, const Vec& v)>;
  using Covector = std::function<Vec(const Vec&)>;
  using CovectorDeriv = std::function<double(const Vec& x, const Vec& w, const Vec& v)>;

  OneForm(Kind kind, std::string id, Manifold m, Eval eval, bool closed, Covector covector = {},
          CovectorDeriv covector_deriv = {}, std::optional<RegionSpec> singular = std::nullopt);

  Kind kind() const noexcept { return kind_; }
  const std::string& id() const noexcept { return id_; }
  const Manifold& manifold() const noexcept { return manifold_; }
  bool closed() const noexcept { return closed_; }
  double operator()(const Vec& x, const Vec& v) const { return eval_(x, v); }
  bool has_covector() const noexcept { return covector_ && covector_deriv_; }
  Vec covector(const Vec& x) const { return covector_(x); }
  double covector_deriv(const Vec& x, const Vec& w, const Vec& v) const {
    return covector_deriv_(x, w, v);
  }
  const std::optional<RegionSpec>& singular_set() const noexcept { return singular_; }
  bool near_singular(const Vec& x) const { return singular_ && singular_->contains(x); }

 private:
  Kind kind_;
  std::string id_;
  Manifold manifold_;
  Eval eval_;
  bool closed_;
  Covector covector_;
  CovectorDeriv covector_deriv_;
  std::optional<RegionSpec> singular_;
};

namespace forms {

/// df. Uses the analytic gradient when f has one, otherwise central
/// differences along retracted curves (step kFdStep).
OneForm exact(const ScalarField& f);
/// df evaluated by central differences even when f is analytic.
OneForm exact_fd(const ScalarField& f);
OneForm torus_dx();
OneForm torus_dy();
/// a * alpha + b * beta.
OneForm combine(double a, const OneForm& alpha, double b, const OneForm& beta);
/// Closed non-exact basis of H^1(M): {dx, dy} on T^2, empty on S^n (n >= 2).
std::vector<OneForm> cohomology_basis(const Manifold& m);
/// "torus_dx", "torus_dy" or "exact:<scalar catalog id>".
OneForm by_name(const std::string& name, const Manifold& m);

}  // namespace forms

/// Midpoint geometry of one path step: Stratonovich evaluation point and
/// displacement (unwrapped on the torus, tangent chord on the sphere).
struct StepChord {
  Vec midpoint;
  Vec delta;
};

/// Largest admissible single-step torus displacement per coordinate.
inline constexpr double kMaxTorusStep = 0.25;

/// Throws StepTooLarge when a torus step exceeds kMaxTorusStep.
StepChord step_chord(const Manifold& m, const Vec& from, const Vec& to);

struct PathIntegral {
  double value = 0.0;
  std::vector<double> increments;  // filled when retained
  Vec lift_displacement;           // torus only: unwrapped end - start
};

/// Stratonovich integral of alpha along the path by the midpoint rule.
/// Throws SingularProximity (with the step index) when the path enters the
/// cutoff neighborhood of alpha's singular set.
PathIntegral line_integral(const OneForm& alpha, const SamplePath& path,
                           bool retain_increments = false);

/// Streaming counterpart of line_integral.
class LineIntegrator {
 public:
  explicit LineIntegrator(const OneForm& alpha) : alpha_(&alpha) {}
  /// Adds the increment of step `index` and returns it.
  double add(const Vec& from, const Vec& to, std::size_t index);
  double value() const noexcept { return value_; }

 private:
  const OneForm* alpha_;
  double value_ = 0.0;
};

struct IntegralDecomposition {
  double total = 0.0;
  double drift_part = 0.0;       // trapezoidal integral of S alpha(L) dt
  double martingale_part = 0.0;  // total - drift_part
};

/// Splits the line integral into its bounded-variation and martingale parts.
/// Throws SpecMismatch if the path was generated by another SDE.
IntegralDecomposition decompose_integral(const OneForm& alpha, const SamplePath& path,
                                         const DiffusionSpec& spec);

/// Unwrapped (lifted) coordinates of a torus path; the points themselves on
/// the sphere.
std::vector<Vec> lift_path(const SamplePath& path);

}  // namespace stochform
