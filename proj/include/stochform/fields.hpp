#pragma once

#include <functional>
#include <optional>
#include <string>

#include "stochform/geometry.hpp"
#include "stochform/region.hpp"

namespace stochform {

/// Default radius of the cutoff neighborhood around singular sets.
inline constexpr double kDefaultSingularCutoff = 1e-4;

/// Step of the central differences used for directional derivatives.
inline constexpr double kFdStep = 1e-5;

/// Central difference of g along the retracted curve t -> R(x + t w), where
/// R normalizes on the sphere and is the identity on the torus chart (lift).
double directional_derivative(const Manifold& m, const std::function<double(const Vec&)>& g,
                              const Vec& x, const Vec& w, double h = kFdStep);

/// A real function on M, evaluated on ambient coordinates (sphere) or on
/// unwrapped chart coordinates (torus). Torus catalog entries such as `y`
/// are only meaningful on lifts; periodic ones accept any representative.
///
/// Catalog entries carry an analytic gradient and Hessian-vector product so
/// that the generator can be evaluated without finite differences.
class ScalarField {
 public:
  using Value = std::function<double(const Vec&)>;
  using Gradient = std::function<Vec(const Vec&)>;
  using HessianVec = std::function<Vec(const Vec&, const Vec&)>;

  ScalarField(std::string id, Manifold m, Value value, Gradient grad = {},
              HessianVec hess = {}, std::optional<RegionSpec> singular = std::nullopt);

  const std::string& id() const noexcept { return id_; }
  const Manifold& manifold() const noexcept { return manifold_; }
  double operator()(const Vec& x) const { return value_(x); }
  bool has_gradient() const noexcept { return static_cast<bool>(grad_); }
  bool has_hessian() const noexcept { return static_cast<bool>(hess_); }
  /// Ambient (sphere) or chart (torus) gradient. Requires has_gradient().
  Vec gradient(const Vec& x) const;
  /// Hessian applied to w. Requires has_hessian().
  Vec hessian_times(const Vec& x, const Vec& w) const;
  const std::optional<RegionSpec>& singular_set() const noexcept { return singular_; }
  /// True when x lies in the cutoff neighborhood of the singular set.
  bool near_singular(const Vec& x) const { return singular_ && singular_->contains(x); }

  /// The same field with a different singular-set cutoff radius.
  ScalarField with_cutoff(double cutoff) const;

 private:
  std::string id_;
  Manifold manifold_;
  Value value_;
  Gradient grad_;
  HessianVec hess_;
  std::optional<RegionSpec> singular_;
};

/// A tangent vector field. Values are ambient vectors tangent to the sphere
/// or chart vectors on the torus. `dir_deriv(x, w)` is the Jacobian of the
/// (ambient/chart) extension applied to w, used by the analytic generator.
class VectorField {
 public:
  enum class Kind { SphereHeightGradient, TorusSinCos, GradientOfScalar, Constant, UserClosure };
  using Value = std::function<Vec(const Vec&)>;
  using DirDeriv = std::function<Vec(const Vec&, const Vec&)>;

  VectorField(Kind kind, std::string id, Manifold m, Value value, DirDeriv dir = {});

  Kind kind() const noexcept { return kind_; }
  const std::string& id() const noexcept { return id_; }
  const Manifold& manifold() const noexcept { return manifold_; }
  Vec operator()(const Vec& x) const { return value_(x); }
  bool has_dir_deriv() const noexcept { return static_cast<bool>(dir_); }
  Vec dir_deriv(const Vec& x, const Vec& w) const;

 private:
  Kind kind_;
  std::string id_;
  Manifold manifold_;
  Value value_;
  DirDeriv dir_;
};

/// Field value at x as a checked tangent vector. Throws ManifoldMismatch
/// when x is not on the field's manifold.
TangentVector eval_field(const VectorField& field, const ManifoldPoint& x);

namespace fields {

/// V(x) = e_1 - x_1 x, the gradient of the height x_1 on S^n.
VectorField sphere_height_gradient(std::size_t n);
/// V = sin(2 pi x) d/dx + cos(2 pi x) d/dy on T^2.
VectorField torus_sin_cos();
/// Constant chart field on T^2.
VectorField torus_constant(double vx, double vy);
/// Riemannian gradient of f (tangential projection of the ambient gradient
/// on the sphere). Falls back to central differences when f has no
/// analytic gradient.
VectorField gradient_of(const ScalarField& f);

}  // namespace fields

namespace scalars {

ScalarField constant(const Manifold& m, double c);
/// x_1^2 / 2 on S^n.
ScalarField sphere_half_x1_sq(std::size_t n);
/// x_1 on S^n.
ScalarField sphere_x1(std::size_t n);
/// ln(1 - x_1^2) on S^n minus the poles.
ScalarField sphere_log_one_minus_x1_sq(std::size_t n,
                                       double cutoff = kDefaultSingularCutoff);
/// Lifted coordinate y on T^2 (multivalued on the torus; its differential is dy).
ScalarField torus_y();
/// Lifted coordinate x on T^2.
ScalarField torus_x();
/// ln(sin^2(2 pi x)) on T^2 minus the circles {x = 0}, {x = 1/2}.
ScalarField torus_log_sin_sq(double cutoff = kDefaultSingularCutoff);
ScalarField torus_sin_2pi_x();
ScalarField torus_sin_2pi_y();
ScalarField torus_cos_2pi_x();
ScalarField torus_cos_2pi_y();
/// F(x, y) = sin(2 pi x) sin(2 pi y) / 10.
ScalarField torus_bump();

/// Catalog lookup by id ("torus_y", "sphere_x1", ...). Throws InvalidArgument.
ScalarField by_name(const std::string& name, const Manifold& m);

}  // namespace scalars

}  // namespace stochform
