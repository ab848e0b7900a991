#include "stochform/forms.hpp"

#include <algorithm>
#include <cmath>

#include "stochform/generator.hpp"

namespace stochform {

OneForm::OneForm(Kind kind, std::string id, Manifold m, Eval eval, bool closed,
                 Covector covector, CovectorDeriv covector_deriv,
                 std::optional<RegionSpec> singular)
    : kind_(kind),
      id_(std::move(id)),
      manifold_(m),
      eval_(std::move(eval)),
      closed_(closed),
      covector_(std::move(covector)),
      covector_deriv_(std::move(covector_deriv)),
      singular_(std::move(singular)) {
  if (!eval_) throw Error(ErrorKind::InvalidArgument, "one-form needs an evaluator");
}

namespace forms {

OneForm exact(const ScalarField& f) {
  if (!(f.has_gradient() && f.has_hessian())) return exact_fd(f);
  return OneForm(
      OneForm::Kind::ExactOf, "d(" + f.id() + ")", f.manifold(),
      [f](const Vec& x, const Vec& v) { return dot(f.gradient(x), v); }, true,
      [f](const Vec& x) { return f.gradient(x); },
      [f](const Vec& x, const Vec& w, const Vec& v) { return dot(f.hessian_times(x, w), v); },
      f.singular_set());
}

OneForm exact_fd(const ScalarField& f) {
  const Manifold m = f.manifold();
  return OneForm(
      OneForm::Kind::ExactOf, "d(" + f.id() + ")", m,
      [f, m](const Vec& x, const Vec& v) {
        return directional_derivative(m, [&f](const Vec& p) { return f(p); }, x, v);
      },
      true, {}, {}, f.singular_set());
}

namespace {

OneForm torus_coordinate_form(std::size_t axis) {
  Vec omega = Vec::unit(2, axis);
  return OneForm(
      axis == 0 ? OneForm::Kind::TorusBasisDx : OneForm::Kind::TorusBasisDy,
      axis == 0 ? "torus_dx" : "torus_dy", Manifold::torus(),
      [axis](const Vec&, const Vec& v) { return v[axis]; }, true,
      [omega](const Vec&) { return omega; },
      [](const Vec&, const Vec&, const Vec&) { return 0.0; });
}

}  // namespace

OneForm torus_dx() { return torus_coordinate_form(0); }
OneForm torus_dy() { return torus_coordinate_form(1); }

OneForm combine(double a, const OneForm& alpha, double b, const OneForm& beta) {
  if (!(alpha.manifold() == beta.manifold()))
    throw Error(ErrorKind::ManifoldMismatch, "cannot combine forms on different manifolds");
  std::optional<RegionSpec> singular;
  if (alpha.singular_set() && beta.singular_set()) {
    auto sa = *alpha.singular_set(), sb = *beta.singular_set();
    singular = RegionSpec::user(
        sa.id() + "|" + sb.id(),
        [sa, sb](const Vec& x) { return std::min(sa.distance(x), sb.distance(x)); },
        std::max(sa.radius(), sb.radius()));
  } else if (alpha.singular_set()) {
    singular = alpha.singular_set();
  } else {
    singular = beta.singular_set();
  }
  OneForm::Covector cov;
  OneForm::CovectorDeriv dcov;
  if (alpha.has_covector() && beta.has_covector()) {
    cov = [=](const Vec& x) { return a * alpha.covector(x) + b * beta.covector(x); };
    dcov = [=](const Vec& x, const Vec& w, const Vec& v) {
      return a * alpha.covector_deriv(x, w, v) + b * beta.covector_deriv(x, w, v);
    };
  }
  std::string id = std::to_string(a) + "*" + alpha.id() + "+" + std::to_string(b) + "*" + beta.id();
  return OneForm(
      OneForm::Kind::Combination, id, alpha.manifold(),
      [=](const Vec& x, const Vec& v) { return a * alpha(x, v) + b * beta(x, v); },
      alpha.closed() && beta.closed(), cov, dcov, singular);
}

std::vector<OneForm> cohomology_basis(const Manifold& m) {
  if (m.is_torus()) return {torus_dx(), torus_dy()};
  if (m.dim() == 1)
    throw Error(ErrorKind::InvalidArgument, "H^1(S^1) basis is not provided; use S^n, n >= 2");
  return {};
}

OneForm by_name(const std::string& name, const Manifold& m) {
  if (m.is_torus() && name == "torus_dx") return torus_dx();
  if (m.is_torus() && name == "torus_dy") return torus_dy();
  const std::string prefix = "exact:";
  if (name.rfind(prefix, 0) == 0) return exact(scalars::by_name(name.substr(prefix.size()), m));
  throw Error(ErrorKind::InvalidArgument, "unknown one-form '" + name + "' on " + m.name());
}

}  // namespace forms

StepChord step_chord(const Manifold& m, const Vec& from, const Vec& to) {
  if (m.is_torus()) {
    Vec delta{minimal_image(to[0] - from[0]), minimal_image(to[1] - from[1])};
    if (std::abs(delta[0]) > kMaxTorusStep || std::abs(delta[1]) > kMaxTorusStep)
      throw Error(ErrorKind::StepTooLarge, "torus step displacement exceeds 0.25");
    Vec mid = from;
    mid.axpy(0.5, delta);
    return {mid, delta};
  }
  Vec mid = from + to;
  const double n = norm(mid);
  if (n < 1e-12) throw Error(ErrorKind::StepTooLarge, "antipodal sphere step");
  mid *= 1.0 / n;
  return {mid, project_tangent(m, mid, to - from)};
}

double LineIntegrator::add(const Vec& from, const Vec& to, std::size_t index) {
  const Manifold& m = alpha_->manifold();
  try {
    if (alpha_->singular_set()) {
      if (index == 0 && alpha_->near_singular(from))
        throw Error(ErrorKind::SingularProximity, alpha_->id() + ": path starts inside the cutoff");
      if (alpha_->near_singular(to))
        throw Error(ErrorKind::SingularProximity, alpha_->id() + ": path entered the cutoff");
    }
    const StepChord c = step_chord(m, from, to);
    if (alpha_->near_singular(c.midpoint))
      throw Error(ErrorKind::SingularProximity, alpha_->id() + ": path entered the cutoff");
    const double inc = (*alpha_)(c.midpoint, c.delta);
    value_ += inc;
    return inc;
  } catch (const Error& e) {
    throw e.with_step(index);
  }
}

PathIntegral line_integral(const OneForm& alpha, const SamplePath& path, bool retain_increments) {
  if (!(alpha.manifold() == path.manifold))
    throw Error(ErrorKind::ManifoldMismatch, "form and path live on different manifolds");
  PathIntegral out;
  LineIntegrator integrator(alpha);
  Vec lift = Vec::zeros(path.manifold.coord_dim());
  const bool torus = path.manifold.is_torus();
  if (retain_increments) out.increments.reserve(path.steps());
  for (std::size_t k = 0; k < path.steps(); ++k) {
    const double inc = integrator.add(path.points[k], path.points[k + 1], k);
    if (retain_increments) out.increments.push_back(inc);
    if (torus) lift += step_chord(path.manifold, path.points[k], path.points[k + 1]).delta;
  }
  out.value = integrator.value();
  if (torus) out.lift_displacement = lift;
  return out;
}

IntegralDecomposition decompose_integral(const OneForm& alpha, const SamplePath& path,
                                         const DiffusionSpec& spec) {
  if (path.spec_id != spec.id() || path.noise_dim != spec.noise_dim() ||
      !(path.manifold == spec.manifold()))
    throw Error(ErrorKind::SpecMismatch,
                "path generated by '" + path.spec_id + "', not by '" + spec.id() + "'");
  IntegralDecomposition d;
  d.total = line_integral(alpha, path).value;
  if (path.steps() > 0) {
    double prev = stratonovich_symbol(spec, alpha, path.points[0]);
    for (std::size_t k = 1; k <= path.steps(); ++k) {
      const double cur = stratonovich_symbol(spec, alpha, path.points[k]);
      d.drift_part += 0.5 * (prev + cur) * path.dt;
      prev = cur;
    }
  }
  d.martingale_part = d.total - d.drift_part;
  return d;
}

std::vector<Vec> lift_path(const SamplePath& path) {
  std::vector<Vec> out;
  out.reserve(path.points.size());
  if (path.points.empty()) return out;
  out.push_back(path.points[0]);
  for (std::size_t k = 1; k < path.points.size(); ++k) {
    if (path.manifold.is_torus()) {
      Vec next = out.back();
      next[0] += minimal_image(path.points[k][0] - path.points[k - 1][0]);
      next[1] += minimal_image(path.points[k][1] - path.points[k - 1][1]);
      out.push_back(next);
    } else {
      out.push_back(path.points[k]);
    }
  }
  return out;
}

}  // namespace stochform
