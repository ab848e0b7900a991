#include "stochform/geometry.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <numbers>
#include <utility>

namespace stochform {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ManifoldMismatch: return "ManifoldMismatch";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::SingularProximity: return "SingularProximity";
    case ErrorKind::SpecMismatch: return "SpecMismatch";
    case ErrorKind::NonClosedForm: return "NonClosedForm";
    case ErrorKind::EmptyAfterBurnIn: return "EmptyAfterBurnIn";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
  }
  return "Unknown";
}

Manifold Manifold::sphere(std::size_t n) {
  if (n < 1 || n + 1 > kMaxDim)
    throw Error(ErrorKind::InvalidArgument, "sphere dimension must be in [1, " +
                                                std::to_string(kMaxDim - 1) + "]");
  return Manifold(ManifoldKind::Sphere, n);
}

std::string Manifold::name() const {
  return is_sphere() ? "S^" + std::to_string(dim_) : "T^2";
}

ManifoldPoint::ManifoldPoint(Manifold m, Vec coords) : manifold_(m), coords_(coords) {
  if (coords_.size() != m.coord_dim())
    throw Error(ErrorKind::ManifoldMismatch, "coordinate length " + std::to_string(coords_.size()) +
                                                 " does not match " + m.name());
  if (!all_finite(coords_)) throw Error(ErrorKind::NonFinite, "point coordinates");
  if (m.is_sphere()) {
    if (std::abs(norm(coords_) - 1.0) > kSphereNormTol)
      throw Error(ErrorKind::ManifoldMismatch, "point is not on the unit sphere");
  } else {
    for (double c : coords_)
      if (c < 0.0 || c >= 1.0)
        throw Error(ErrorKind::ManifoldMismatch, "torus coordinate outside [0,1)");
  }
}

TangentVector::TangentVector(ManifoldPoint base, Vec components)
    : base_(std::move(base)), components_(components) {
  if (components_.size() != base_.manifold().coord_dim())
    throw Error(ErrorKind::ManifoldMismatch, "tangent vector length");
  if (base_.manifold().is_sphere()) {
    double scale = std::max(1.0, norm(components_));
    if (std::abs(dot(components_, base_.coords())) > kTangencyTol * scale)
      throw Error(ErrorKind::ManifoldMismatch, "vector is not tangent to the sphere");
  }
}

ManifoldPoint project_sphere(const Vec& v) {
  if (!all_finite(v)) throw Error(ErrorKind::NonFinite, "project_sphere input");
  if (v.size() < 2) throw Error(ErrorKind::InvalidArgument, "project_sphere needs dim >= 2");
  double n = norm(v);
  if (n < 1e-300) throw Error(ErrorKind::ZeroVector, "cannot project the zero vector");
  Vec out = v;
  if (n != 1.0) out *= 1.0 / n;
  return ManifoldPoint(Manifold::sphere(v.size() - 1), out);
}

double wrap_unit(double x) noexcept {
  double r = x - std::floor(x);
  // x slightly below an integer rounds up to 1.0
  return r >= 1.0 ? 0.0 : r;
}

double minimal_image(double d) noexcept {
  double r = d - std::floor(d);  // [0,1)
  return r > 0.5 ? r - 1.0 : r;
}

ManifoldPoint wrap_torus(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y))
    throw Error(ErrorKind::NonFinite, "wrap_torus input");
  return ManifoldPoint(Manifold::torus(), Vec{wrap_unit(x), wrap_unit(y)});
}

ManifoldPoint wrap_torus(const Vec& p) {
  if (p.size() != 2) throw Error(ErrorKind::ManifoldMismatch, "torus coordinates need length 2");
  return wrap_torus(p[0], p[1]);
}

ManifoldPoint retract(const Manifold& m, const Vec& v) {
  if (m.is_sphere()) return project_sphere(v);
  return wrap_torus(v);
}

Vec project_tangent(const Manifold& m, const Vec& base, const Vec& v) {
  if (!m.is_sphere()) return v;
  Vec out = v;
  out.axpy(-dot(v, base), base);
  return out;
}

namespace {

// r in [-1, 1] with sin(pi x) = sin(pi r)
double reduce_two(double x) noexcept { return x - 2.0 * std::nearbyint(0.5 * x); }

}  // namespace

double sinpi(double x) noexcept {
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  double r = reduce_two(x);
  // fold onto [-1/2, 1/2] using sin(pi r) = sin(pi (1 - r))
  if (r > 0.5) r = 1.0 - r;
  else if (r < -0.5) r = -1.0 - r;
  return std::sin(std::numbers::pi * r);
}

double cospi(double x) noexcept {
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  double r = std::abs(reduce_two(x));  // [0, 1]
  // cos(pi r) = sin(pi (1/2 - r)); exact 0 at r = 1/2
  return sinpi(0.5 - r);
}

}  // namespace stochform
