#include "stochform/generator.hpp"

#include <cmath>
#include <numbers>

#include "stochform/stats.hpp"

namespace stochform {

namespace {

bool field_analytic(const VectorField& v) { return v.has_dir_deriv(); }

// The drift enters only through a first derivative, so only the noise
// fields need Jacobians.
bool spec_analytic(const DiffusionSpec& spec) {
  for (const auto& x : spec.noise())
    if (!field_analytic(x)) return false;
  return true;
}

bool use_analytic(DerivativeMethod method, bool available, const char* what) {
  switch (method) {
    case DerivativeMethod::Analytic:
      if (!available)
        throw Error(ErrorKind::InvalidArgument, std::string("no analytic route for ") + what);
      return true;
    case DerivativeMethod::FiniteDifference: return false;
    case DerivativeMethod::Auto: return available;
  }
  return available;
}

void check_manifold(const DiffusionSpec& spec, const Manifold& m, const std::string& id) {
  if (!(spec.manifold() == m))
    throw Error(ErrorKind::ManifoldMismatch, id + " lives on " + m.name() + ", spec on " +
                                                 spec.manifold().name());
}

}  // namespace

std::string to_string(DerivativeMethod m) {
  switch (m) {
    case DerivativeMethod::Auto: return "auto";
    case DerivativeMethod::Analytic: return "analytic_catalog";
    case DerivativeMethod::FiniteDifference: return "directional_finite_difference";
  }
  return "unknown";
}

bool has_analytic_generator(const DiffusionSpec& spec, const ScalarField& f) {
  return f.has_gradient() && f.has_hessian() && spec_analytic(spec);
}

bool has_analytic_symbol(const DiffusionSpec& spec, const OneForm& alpha) {
  return alpha.has_covector() && spec_analytic(spec);
}

double apply_generator(const DiffusionSpec& spec, const ScalarField& f, const Vec& x,
                       DerivativeMethod method) {
  check_manifold(spec, f.manifold(), f.id());
  if (f.near_singular(x))
    throw Error(ErrorKind::DomainViolation, f.id() + " is singular near the evaluation point");
  const double c = spec.factor();
  const Manifold& m = spec.manifold();
  if (use_analytic(method, has_analytic_generator(spec, f), f.id().c_str())) {
    const Vec g = f.gradient(x);
    double out = spec.drift() ? dot(g, (*spec.drift())(x)) : 0.0;
    for (const auto& field : spec.noise()) {
      const Vec w = field(x);
      out += c * (dot(w, f.hessian_times(x, w)) + dot(g, field.dir_deriv(x, w)));
    }
    return out;
  }
  const std::function<double(const Vec&)> fv = [&f](const Vec& p) { return f(p); };
  double out = spec.drift() ? directional_derivative(m, fv, x, (*spec.drift())(x)) : 0.0;
  for (const auto& field : spec.noise()) {
    // p -> (X f)(p), differentiated once more along X(x)
    const std::function<double(const Vec&)> xf = [&](const Vec& p) {
      return directional_derivative(m, fv, p, field(p));
    };
    out += c * directional_derivative(m, xf, x, field(x));
  }
  return out;
}

double apply_generator(const DiffusionSpec& spec, const ScalarField& f, const ManifoldPoint& x,
                       DerivativeMethod method) {
  check_manifold(spec, x.manifold(), "point");
  return apply_generator(spec, f, x.coords(), method);
}

double stratonovich_symbol(const DiffusionSpec& spec, const OneForm& alpha, const Vec& x,
                           DerivativeMethod method) {
  check_manifold(spec, alpha.manifold(), alpha.id());
  if (alpha.near_singular(x))
    throw Error(ErrorKind::DomainViolation, alpha.id() + " is singular near the evaluation point");
  const double c = spec.factor();
  const Manifold& m = spec.manifold();
  if (use_analytic(method, has_analytic_symbol(spec, alpha), alpha.id().c_str())) {
    const Vec omega = alpha.covector(x);
    double out = spec.drift() ? dot(omega, (*spec.drift())(x)) : 0.0;
    for (const auto& field : spec.noise()) {
      const Vec w = field(x);
      out += c * (alpha.covector_deriv(x, w, w) + dot(omega, field.dir_deriv(x, w)));
    }
    return out;
  }
  double out = spec.drift() ? alpha(x, (*spec.drift())(x)) : 0.0;
  for (const auto& field : spec.noise()) {
    const std::function<double(const Vec&)> ax = [&](const Vec& p) { return alpha(p, field(p)); };
    out += c * directional_derivative(m, ax, x, field(x));
  }
  return out;
}

double stratonovich_symbol(const DiffusionSpec& spec, const OneForm& alpha,
                           const ManifoldPoint& x, DerivativeMethod method) {
  check_manifold(spec, x.manifold(), "point");
  return stratonovich_symbol(spec, alpha, x.coords(), method);
}

std::optional<ReferenceFormula> reference_formula(const DiffusionSpec& spec,
                                                  const ScalarField& f) {
  if (spec.drift() || spec.noise_dim() != 1) return std::nullopt;
  const auto kind = spec.noise().front().kind();
  const std::string& id = f.id();
  if (kind == VectorField::Kind::SphereHeightGradient) {
    if (id == "sphere_half_x1_sq")
      return ReferenceFormula{"(1+3x1^2)(1-x1^2)", [](const Vec& x) {
                                return (1.0 + 3.0 * x[0] * x[0]) * (1.0 - x[0] * x[0]);
                              }};
    if (id == "sphere_x1")
      return ReferenceFormula{"-2x1(1-x1^2)",
                              [](const Vec& x) { return -2.0 * x[0] * (1.0 - x[0] * x[0]); }};
    if (id == "sphere_log_one_minus_x1_sq")
      return ReferenceFormula{"-2(1-x1^2)", [](const Vec& x) { return -2.0 * (1.0 - x[0] * x[0]); }};
  }
  if (kind == VectorField::Kind::TorusSinCos) {
    if (id == "torus_y")
      return ReferenceFormula{"-pi sin^2(2 pi x)", [](const Vec& p) {
                                double s = sinpi(2.0 * p[0]);
                                return -std::numbers::pi * s * s;
                              }};
    if (id == "torus_log_sin_sq")
      return ReferenceFormula{"-2 pi^2 sin^2(2 pi x)", [](const Vec& p) {
                                double s = sinpi(2.0 * p[0]);
                                return -2.0 * std::numbers::pi * std::numbers::pi * s * s;
                              }};
  }
  return std::nullopt;
}

GeneratorReport generator_report(const DiffusionSpec& spec, const ScalarField& f,
                                 const std::vector<Vec>& points) {
  GeneratorReport report;
  report.function_id = f.id();
  report.spec_id = spec.id();
  report.convention = spec.convention();
  const bool analytic = has_analytic_generator(spec, f);
  const auto ref = reference_formula(spec, f);
  if (ref) report.reference_label = ref->label;
  double max_dev = 0.0;
  for (const Vec& x : points) {
    GeneratorSample s{x, std::nullopt, std::nullopt, std::nullopt};
    s.finite_difference = apply_generator(spec, f, x, DerivativeMethod::FiniteDifference);
    if (analytic) {
      s.analytic = apply_generator(spec, f, x, DerivativeMethod::Analytic);
      max_dev = std::max(max_dev, std::abs(*s.analytic - *s.finite_difference));
    }
    if (ref) s.reference = ref->value(x);
    report.samples.push_back(std::move(s));
  }
  if (analytic) report.max_deviation = max_dev;
  return report;
}

MartingaleTestReport martingale_residual_test(const DiffusionSpec& spec, const ScalarField& f,
                                              const ManifoldPoint& x0, const EnsembleSpec& ens,
                                              unsigned threads, DerivativeMethod method) {
  check_manifold(spec, f.manifold(), f.id());
  const std::size_t steps = ens.steps();
  const bool torus = spec.manifold().is_torus();
  auto residuals = map_ensemble(ens, threads, [&](std::size_t, std::uint64_t seed) {
    BrownianIncrements noise(seed, ens.dt, spec.noise_dim());
    Vec lift = x0.coords();
    const double f0 = f(lift);
    double lf_prev = apply_generator(spec, f, lift, method);
    double integral = 0.0;
    simulate_streaming(spec, x0, steps, noise, [&](const PathStep& s) {
      if (torus) {
        lift[0] += minimal_image(s.to[0] - s.from[0]);
        lift[1] += minimal_image(s.to[1] - s.from[1]);
      } else {
        lift = s.to;
      }
      const double lf = apply_generator(spec, f, lift, method);
      integral += 0.5 * (lf_prev + lf) * s.dt;
      lf_prev = lf;
      return true;
    });
    return f(lift) - f0 - integral;
  });
  const auto s = stats::summarize(residuals);
  MartingaleTestReport r;
  r.function_id = f.id();
  r.n_paths = ens.n_paths;
  r.mean = s.mean;
  r.stderr_mean = s.stderr_mean;
  r.z_score = s.stderr_mean > 0.0 ? s.mean / s.stderr_mean : (s.mean == 0.0 ? 0.0 : INFINITY);
  r.pass = std::abs(s.mean) <= 3.0 * s.stderr_mean;
  return r;
}

std::vector<Vec> random_points(const Manifold& m, std::size_t n, std::uint64_t seed) {
  std::vector<Vec> out;
  NormalStream normals(seed);
  std::array<double, kMaxDim> z{};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t d = m.is_sphere() ? m.coord_dim() : 2;
    normals.draw(i, std::span<double>(z.data(), d));
    Vec v(d);
    if (m.is_sphere()) {
      for (std::size_t j = 0; j < d; ++j) v[j] = z[j];
      v *= 1.0 / norm(v);
    } else {
      // Phi(z) via erfc keeps this a pure function of the normal stream
      for (std::size_t j = 0; j < 2; ++j) v[j] = wrap_unit(0.5 * std::erfc(-z[j] / std::sqrt(2.0)));
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace stochform
