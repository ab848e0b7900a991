#include "stochform/fields.hpp"

#include <cmath>
#include <numbers>

namespace stochform {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

}  // namespace

double directional_derivative(const Manifold& m, const std::function<double(const Vec&)>& g,
                              const Vec& x, const Vec& w, double h) {
  Vec plus = x, minus = x;
  plus.axpy(h, w);
  minus.axpy(-h, w);
  if (m.is_sphere()) {
    plus *= 1.0 / norm(plus);
    minus *= 1.0 / norm(minus);
  }
  return (g(plus) - g(minus)) / (2.0 * h);
}

ScalarField::ScalarField(std::string id, Manifold m, Value value, Gradient grad,
                         HessianVec hess, std::optional<RegionSpec> singular)
    : id_(std::move(id)),
      manifold_(m),
      value_(std::move(value)),
      grad_(std::move(grad)),
      hess_(std::move(hess)),
      singular_(std::move(singular)) {
  require(static_cast<bool>(value_), "scalar field needs an evaluator");
}

Vec ScalarField::gradient(const Vec& x) const {
  require(has_gradient(), "scalar field has no analytic gradient");
  return grad_(x);
}

Vec ScalarField::hessian_times(const Vec& x, const Vec& w) const {
  require(has_hessian(), "scalar field has no analytic Hessian");
  return hess_(x, w);
}

ScalarField ScalarField::with_cutoff(double cutoff) const {
  ScalarField out = *this;
  if (!singular_) return out;
  const RegionSpec& s = *singular_;
  if (s.kind() == RegionSpec::Kind::SpherePoles) {
    out.singular_ = RegionSpec::sphere_poles(cutoff);
  } else if (s.kind() == RegionSpec::Kind::TorusCircles) {
    out.singular_ = RegionSpec::torus_circles(s.circle_positions(), cutoff);
  } else {
    out.singular_ = RegionSpec::user(s.id(), [s](const Vec& x) { return s.distance(x); }, cutoff);
  }
  return out;
}

VectorField::VectorField(Kind kind, std::string id, Manifold m, Value value, DirDeriv dir)
    : kind_(kind), id_(std::move(id)), manifold_(m), value_(std::move(value)), dir_(std::move(dir)) {
  require(static_cast<bool>(value_), "vector field needs an evaluator");
}

Vec VectorField::dir_deriv(const Vec& x, const Vec& w) const {
  require(has_dir_deriv(), "vector field has no analytic Jacobian");
  return dir_(x, w);
}

TangentVector eval_field(const VectorField& field, const ManifoldPoint& x) {
  if (!(field.manifold() == x.manifold()))
    throw Error(ErrorKind::ManifoldMismatch, "field " + field.id() + " lives on " +
                                                 field.manifold().name() + ", point on " +
                                                 x.manifold().name());
  Vec v = field(x.coords());
  if (!all_finite(v)) throw Error(ErrorKind::NonFinite, "field " + field.id());
  return TangentVector(x, v);
}

namespace fields {

VectorField sphere_height_gradient(std::size_t n) {
  Manifold m = Manifold::sphere(n);
  auto value = [](const Vec& x) {
    Vec v = -x[0] * x;
    v[0] += 1.0;
    return v;
  };
  // d/dt [e1 - x1 x] along w = -w1 x - x1 w
  auto dir = [](const Vec& x, const Vec& w) { return -w[0] * x - x[0] * w; };
  return VectorField(VectorField::Kind::SphereHeightGradient, "sphere_height_gradient", m, value,
                     dir);
}

VectorField torus_sin_cos() {
  auto value = [](const Vec& p) { return Vec{sinpi(2.0 * p[0]), cospi(2.0 * p[0])}; };
  auto dir = [](const Vec& p, const Vec& w) {
    return Vec{kTwoPi * cospi(2.0 * p[0]) * w[0], -kTwoPi * sinpi(2.0 * p[0]) * w[0]};
  };
  return VectorField(VectorField::Kind::TorusSinCos, "torus_sin_cos", Manifold::torus(), value,
                     dir);
}

VectorField torus_constant(double vx, double vy) {
  require(std::isfinite(vx) && std::isfinite(vy), "constant field must be finite");
  Vec c{vx, vy};
  std::string id = "torus_constant(" + std::to_string(vx) + "," + std::to_string(vy) + ")";
  return VectorField(
      VectorField::Kind::Constant, id, Manifold::torus(), [c](const Vec&) { return c; },
      [](const Vec&, const Vec&) { return Vec::zeros(2); });
}

VectorField gradient_of(const ScalarField& f) {
  const Manifold m = f.manifold();
  const std::string id = "grad(" + f.id() + ")";
  auto ambient_grad = [f](const Vec& x) {
    if (f.has_gradient()) return f.gradient(x);
    constexpr double h = 1e-6;
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      Vec a = x, b = x;
      a[i] += h;
      b[i] -= h;
      g[i] = (f(a) - f(b)) / (2.0 * h);
    }
    return g;
  };
  if (m.is_torus()) {
    VectorField::DirDeriv dir;
    if (f.has_hessian()) dir = [f](const Vec& x, const Vec& w) { return f.hessian_times(x, w); };
    return VectorField(VectorField::Kind::GradientOfScalar, id, m, ambient_grad, dir);
  }
  auto value = [ambient_grad](const Vec& x) {
    Vec g = ambient_grad(x);
    g.axpy(-dot(g, x), x);
    return g;
  };
  VectorField::DirDeriv dir;
  if (f.has_gradient() && f.has_hessian()) {
    // d/dt [g - (g.x) x] along w with g = grad f, Hw = d/dt g
    dir = [f](const Vec& x, const Vec& w) {
      Vec g = f.gradient(x);
      Vec hw = f.hessian_times(x, w);
      Vec out = hw;
      out.axpy(-dot(hw, x) - dot(g, w), x);
      out.axpy(-dot(g, x), w);
      return out;
    };
  }
  return VectorField(VectorField::Kind::GradientOfScalar, id, m, value, dir);
}

}  // namespace fields

namespace scalars {

ScalarField constant(const Manifold& m, double c) {
  return ScalarField(
      "constant(" + std::to_string(c) + ")", m, [c](const Vec&) { return c; },
      [m](const Vec&) { return Vec::zeros(m.coord_dim()); },
      [m](const Vec&, const Vec&) { return Vec::zeros(m.coord_dim()); });
}

ScalarField sphere_half_x1_sq(std::size_t n) {
  Manifold m = Manifold::sphere(n);
  return ScalarField(
      "sphere_half_x1_sq", m, [](const Vec& x) { return 0.5 * x[0] * x[0]; },
      [](const Vec& x) {
        Vec g = Vec::zeros(x.size());
        g[0] = x[0];
        return g;
      },
      [](const Vec& x, const Vec& w) {
        Vec h = Vec::zeros(x.size());
        h[0] = w[0];
        return h;
      });
}

ScalarField sphere_x1(std::size_t n) {
  Manifold m = Manifold::sphere(n);
  return ScalarField(
      "sphere_x1", m, [](const Vec& x) { return x[0]; },
      [](const Vec& x) { return Vec::unit(x.size(), 0); },
      [](const Vec& x, const Vec&) { return Vec::zeros(x.size()); });
}

ScalarField sphere_log_one_minus_x1_sq(std::size_t n, double cutoff) {
  Manifold m = Manifold::sphere(n);
  return ScalarField(
      "sphere_log_one_minus_x1_sq", m, [](const Vec& x) { return std::log1p(-x[0] * x[0]); },
      [](const Vec& x) {
        Vec g = Vec::zeros(x.size());
        g[0] = -2.0 * x[0] / (1.0 - x[0] * x[0]);
        return g;
      },
      [](const Vec& x, const Vec& w) {
        double s = 1.0 - x[0] * x[0];
        Vec h = Vec::zeros(x.size());
        h[0] = -2.0 * (1.0 + x[0] * x[0]) / (s * s) * w[0];
        return h;
      },
      RegionSpec::sphere_poles(cutoff));
}

ScalarField torus_y() {
  return ScalarField(
      "torus_y", Manifold::torus(), [](const Vec& p) { return p[1]; },
      [](const Vec&) { return Vec{0.0, 1.0}; }, [](const Vec&, const Vec&) { return Vec{0.0, 0.0}; });
}

ScalarField torus_x() {
  return ScalarField(
      "torus_x", Manifold::torus(), [](const Vec& p) { return p[0]; },
      [](const Vec&) { return Vec{1.0, 0.0}; }, [](const Vec&, const Vec&) { return Vec{0.0, 0.0}; });
}

ScalarField torus_log_sin_sq(double cutoff) {
  return ScalarField(
      "torus_log_sin_sq", Manifold::torus(),
      [](const Vec& p) {
        double s = sinpi(2.0 * p[0]);
        return std::log(s * s);
      },
      [](const Vec& p) {
        // d/dx 2 ln|sin 2 pi x| = 4 pi cot(2 pi x)
        return Vec{2.0 * kTwoPi * cospi(2.0 * p[0]) / sinpi(2.0 * p[0]), 0.0};
      },
      [](const Vec& p, const Vec& w) {
        double s = sinpi(2.0 * p[0]);
        return Vec{-2.0 * kTwoPi * kTwoPi / (s * s) * w[0], 0.0};
      },
      RegionSpec::torus_circles({0.0, 0.5}, cutoff));
}

ScalarField torus_sin_2pi_x() {
  return ScalarField(
      "torus_sin_2pi_x", Manifold::torus(), [](const Vec& p) { return sinpi(2.0 * p[0]); },
      [](const Vec& p) { return Vec{kTwoPi * cospi(2.0 * p[0]), 0.0}; },
      [](const Vec& p, const Vec& w) {
        return Vec{-kTwoPi * kTwoPi * sinpi(2.0 * p[0]) * w[0], 0.0};
      });
}

ScalarField torus_sin_2pi_y() {
  return ScalarField(
      "torus_sin_2pi_y", Manifold::torus(), [](const Vec& p) { return sinpi(2.0 * p[1]); },
      [](const Vec& p) { return Vec{0.0, kTwoPi * cospi(2.0 * p[1])}; },
      [](const Vec& p, const Vec& w) {
        return Vec{0.0, -kTwoPi * kTwoPi * sinpi(2.0 * p[1]) * w[1]};
      });
}

ScalarField torus_cos_2pi_x() {
  return ScalarField(
      "torus_cos_2pi_x", Manifold::torus(), [](const Vec& p) { return cospi(2.0 * p[0]); },
      [](const Vec& p) { return Vec{-kTwoPi * sinpi(2.0 * p[0]), 0.0}; },
      [](const Vec& p, const Vec& w) {
        return Vec{-kTwoPi * kTwoPi * cospi(2.0 * p[0]) * w[0], 0.0};
      });
}

ScalarField torus_cos_2pi_y() {
  return ScalarField(
      "torus_cos_2pi_y", Manifold::torus(), [](const Vec& p) { return cospi(2.0 * p[1]); },
      [](const Vec& p) { return Vec{0.0, -kTwoPi * sinpi(2.0 * p[1])}; },
      [](const Vec& p, const Vec& w) {
        return Vec{0.0, -kTwoPi * kTwoPi * cospi(2.0 * p[1]) * w[1]};
      });
}

ScalarField torus_bump() {
  return ScalarField(
      "torus_bump", Manifold::torus(),
      [](const Vec& p) { return 0.1 * sinpi(2.0 * p[0]) * sinpi(2.0 * p[1]); },
      [](const Vec& p) {
        double sx = sinpi(2.0 * p[0]), cx = cospi(2.0 * p[0]);
        double sy = sinpi(2.0 * p[1]), cy = cospi(2.0 * p[1]);
        return Vec{0.1 * kTwoPi * cx * sy, 0.1 * kTwoPi * sx * cy};
      },
      [](const Vec& p, const Vec& w) {
        double sx = sinpi(2.0 * p[0]), cx = cospi(2.0 * p[0]);
        double sy = sinpi(2.0 * p[1]), cy = cospi(2.0 * p[1]);
        double k = 0.1 * kTwoPi * kTwoPi;
        return Vec{k * (-sx * sy * w[0] + cx * cy * w[1]), k * (cx * cy * w[0] - sx * sy * w[1])};
      });
}

ScalarField by_name(const std::string& name, const Manifold& m) {
  if (m.is_sphere()) {
    if (name == "sphere_half_x1_sq") return sphere_half_x1_sq(m.dim());
    if (name == "sphere_x1") return sphere_x1(m.dim());
    if (name == "sphere_log_one_minus_x1_sq") return sphere_log_one_minus_x1_sq(m.dim());
  } else {
    if (name == "torus_y") return torus_y();
    if (name == "torus_x") return torus_x();
    if (name == "torus_log_sin_sq") return torus_log_sin_sq();
    if (name == "torus_sin_2pi_x") return torus_sin_2pi_x();
    if (name == "torus_sin_2pi_y") return torus_sin_2pi_y();
    if (name == "torus_cos_2pi_x") return torus_cos_2pi_x();
    if (name == "torus_cos_2pi_y") return torus_cos_2pi_y();
    if (name == "torus_bump") return torus_bump();
  }
  if (name == "constant") return constant(m, 1.0);
  throw Error(ErrorKind::InvalidArgument, "unknown scalar field '" + name + "' on " + m.name());
}

}  // namespace scalars

}  // namespace stochform
