#pragma once

#include <cstddef>
#include <string>

#include "stochform/error.hpp"
#include "stochform/vec.hpp"

namespace stochform {

enum class ManifoldKind { Sphere, Torus2 };

/// Manifold tag: the unit sphere S^n embedded in R^{n+1}, or the flat torus
/// T^2 = R^2 / Z^2 with fundamental domain [0,1)^2.
class Manifold {
 public:
  static Manifold sphere(std::size_t n);
  static Manifold torus() { return Manifold(ManifoldKind::Torus2, 2); }

  ManifoldKind kind() const noexcept { return kind_; }
  bool is_sphere() const noexcept { return kind_ == ManifoldKind::Sphere; }
  bool is_torus() const noexcept { return kind_ == ManifoldKind::Torus2; }
  /// Intrinsic dimension.
  std::size_t dim() const noexcept { return dim_; }
  /// Length of the coordinate vector (n+1 on S^n, 2 on T^2).
  std::size_t coord_dim() const noexcept { return is_sphere() ? dim_ + 1 : 2; }
  std::string name() const;

  friend bool operator==(const Manifold&, const Manifold&) = default;

 private:
  Manifold(ManifoldKind kind, std::size_t dim) : kind_(kind), dim_(dim) {}
  ManifoldKind kind_;
  std::size_t dim_;
};

inline constexpr double kSphereNormTol = 1e-12;
inline constexpr double kTangencyTol = 1e-10;

/// A point on a supported manifold. Construction validates the constraint:
/// unit norm (within 1e-12) on the sphere, [0,1) coordinates on the torus.
class ManifoldPoint {
 public:
  ManifoldPoint(Manifold m, Vec coords);

  const Manifold& manifold() const noexcept { return manifold_; }
  const Vec& coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }

  friend bool operator==(const ManifoldPoint&, const ManifoldPoint&) = default;

 private:
  Manifold manifold_;
  Vec coords_;
};

/// A tangent vector in ambient (sphere) or chart (torus) components.
class TangentVector {
 public:
  TangentVector(ManifoldPoint base, Vec components);

  const ManifoldPoint& base() const noexcept { return base_; }
  const Vec& components() const noexcept { return components_; }

 private:
  ManifoldPoint base_;
  Vec components_;
};

/// v / |v| as a point of S^{dim(v)-1}. Throws ZeroVector if |v| < 1e-300.
ManifoldPoint project_sphere(const Vec& v);

/// Componentwise reduction mod 1 into [0,1). Throws NonFinite on NaN/inf.
ManifoldPoint wrap_torus(double x, double y);
ManifoldPoint wrap_torus(const Vec& p);

/// Scalar mod-1 reduction into [0,1).
double wrap_unit(double x) noexcept;

/// Representative of d in (-1/2, 1/2].
double minimal_image(double d) noexcept;

/// Maps an unconstrained coordinate vector back onto M (normalize on the
/// sphere, wrap on the torus). The torus chart is used unwrapped elsewhere,
/// so callers that want lifts skip this.
ManifoldPoint retract(const Manifold& m, const Vec& v);

/// Removes the normal component at a sphere point; identity on the torus.
Vec project_tangent(const Manifold& m, const Vec& base, const Vec& v);

/// sin(pi x) and cos(pi x) with exact zeros at integers / half-integers.
double sinpi(double x) noexcept;
double cospi(double x) noexcept;

}  // namespace stochform
