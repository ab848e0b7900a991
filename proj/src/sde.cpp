#include "stochform/sde.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace stochform {

std::string to_string(Convention c) { return c == Convention::Half ? "half" : "unit"; }

Convention parse_convention(const std::string& s) {
  if (s == "half") return Convention::Half;
  if (s == "unit") return Convention::Unit;
  throw Error(ErrorKind::InvalidArgument, "convention must be 'half' or 'unit', got '" + s + "'");
}

DiffusionSpec::DiffusionSpec(std::string id, Manifold m, std::optional<VectorField> drift,
                             std::vector<VectorField> noise, Convention convention,
                             bool deterministic)
    : id_(std::move(id)),
      manifold_(m),
      drift_(std::move(drift)),
      noise_(std::move(noise)),
      convention_(convention) {
  if (drift_ && !(drift_->manifold() == m))
    throw Error(ErrorKind::ManifoldMismatch, "drift field lives on another manifold");
  for (const auto& f : noise_)
    if (!(f.manifold() == m))
      throw Error(ErrorKind::ManifoldMismatch, "noise field " + f.id() + " lives on another manifold");
  if (noise_.empty() && !deterministic)
    throw Error(ErrorKind::InvalidArgument, "diffusion without noise fields must be flagged deterministic");
  if (noise_.size() > kMaxDim) throw Error(ErrorKind::InvalidArgument, "too many noise fields");
}

DiffusionSpec DiffusionSpec::with_convention(Convention c) const {
  DiffusionSpec out = *this;
  out.convention_ = c;
  return out;
}

namespace specs {

DiffusionSpec torus_sin_cos(Convention c) {
  return DiffusionSpec("torus_sin_cos_noise", Manifold::torus(), std::nullopt,
                       {fields::torus_sin_cos()}, c);
}

DiffusionSpec sphere_height(std::size_t n, Convention c) {
  return DiffusionSpec("sphere_height_noise(S^" + std::to_string(n) + ")", Manifold::sphere(n),
                       std::nullopt, {fields::sphere_height_gradient(n)}, c);
}

DiffusionSpec torus_gradient_drift(const ScalarField& potential, Convention c) {
  return DiffusionSpec("torus_bm_grad(" + potential.id() + ")", Manifold::torus(),
                       fields::gradient_of(potential),
                       {fields::torus_constant(1.0, 0.0), fields::torus_constant(0.0, 1.0)}, c);
}

DiffusionSpec torus_sin_cos_flow() {
  return DiffusionSpec("torus_sin_cos_flow", Manifold::torus(), fields::torus_sin_cos(), {},
                       Convention::Half, true);
}

DiffusionSpec still(const Manifold& m) {
  return DiffusionSpec("still(" + m.name() + ")", m, std::nullopt, {}, Convention::Half, true);
}

}  // namespace specs

namespace {

// V(x) dt + sum_i X_i(x) dW_i
Vec increment_field(const DiffusionSpec& spec, const Vec& x, double dt,
                    std::span<const double> dW) {
  Vec out = Vec::zeros(x.size());
  if (spec.drift()) out.axpy(dt, (*spec.drift())(x));
  const auto& noise = spec.noise();
  for (std::size_t i = 0; i < noise.size(); ++i) out.axpy(dW[i], noise[i](x));
  return out;
}

Vec constrain(const Manifold& m, const Vec& v) {
  if (!all_finite(v)) throw Error(ErrorKind::NonFinite, "field evaluation produced NaN/inf");
  if (m.is_sphere()) {
    double n = norm(v);
    if (n < 1e-300) throw Error(ErrorKind::ZeroVector, "step collapsed to the origin");
    Vec out = v;
    if (n != 1.0) out *= 1.0 / n;
    return out;
  }
  return Vec{wrap_unit(v[0]), wrap_unit(v[1])};
}

}  // namespace

Vec heun_step(const DiffusionSpec& spec, const Vec& x, double dt, std::span<const double> dW) {
  const Vec f0 = increment_field(spec, x, dt, dW);
  const Vec predictor = constrain(spec.manifold(), x + f0);
  const Vec f1 = increment_field(spec, predictor, dt, dW);
  Vec corrected = x;
  corrected.axpy(0.5, f0);
  corrected.axpy(0.5, f1);
  return constrain(spec.manifold(), corrected);
}

ManifoldPoint step_stratonovich(const DiffusionSpec& spec, const ManifoldPoint& x, double dt,
                                std::span<const double> dW) {
  if (!(x.manifold() == spec.manifold()))
    throw Error(ErrorKind::ManifoldMismatch, "point not on " + spec.manifold().name());
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  if (dW.size() != spec.noise_dim())
    throw Error(ErrorKind::InvalidArgument, "dW has length " + std::to_string(dW.size()) +
                                                ", expected " + std::to_string(spec.noise_dim()));
  return ManifoldPoint(spec.manifold(), heun_step(spec, x.coords(), dt, dW));
}

std::size_t step_count(double horizon, double dt) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw Error(ErrorKind::InvalidArgument, "horizon must be positive");
  if (!(dt > 0.0) || !(dt <= horizon))
    throw Error(ErrorKind::InvalidArgument, "dt must satisfy 0 < dt <= horizon");
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

SamplePath simulate_path_refined(const DiffusionSpec& spec, const ManifoldPoint& x0,
                                 double horizon, double dt_fine, std::size_t refine,
                                 std::uint64_t seed) {
  BrownianIncrements noise(seed, dt_fine, spec.noise_dim(), refine);
  const double dt = noise.dt();
  const std::size_t n = step_count(horizon, dt);
  SamplePath path{spec.manifold(), spec.id(), seed, dt, spec.noise_dim(), {}, {}, {}};
  path.times.reserve(n + 1);
  path.points.reserve(n + 1);
  path.dW.reserve(n * spec.noise_dim());
  path.times.push_back(0.0);
  path.points.push_back(x0.coords());
  simulate_streaming(spec, x0, n, noise, [&](const PathStep& s) {
    path.times.push_back(static_cast<double>(s.index + 1) * dt);
    path.points.push_back(s.to);
    path.dW.insert(path.dW.end(), s.dW.begin(), s.dW.end());
    return true;
  });
  return path;
}

SamplePath simulate_path(const DiffusionSpec& spec, const ManifoldPoint& x0, double horizon,
                         double dt, std::uint64_t seed) {
  return simulate_path_refined(spec, x0, horizon, dt, 1, seed);
}

SamplePath replay(const DiffusionSpec& spec, const SamplePath& path) {
  if (path.spec_id != spec.id())
    throw Error(ErrorKind::SpecMismatch, "path was generated by " + path.spec_id);
  if (path.points.empty()) throw Error(ErrorKind::InvalidArgument, "empty path");
  return simulate_path(spec, path.point(0), static_cast<double>(path.steps()) * path.dt, path.dt,
                       path.seed);
}

void EnsembleSpec::validate() const {
  if (n_paths == 0) throw Error(ErrorKind::InvalidArgument, "n_paths must be positive");
  (void)step_count(horizon, dt);
}

std::vector<SamplePath> simulate_ensemble(const DiffusionSpec& spec, const ManifoldPoint& x0,
                                          const EnsembleSpec& ens, unsigned threads) {
  return map_ensemble(ens, threads, [&](std::size_t, std::uint64_t seed) {
    return simulate_path(spec, x0, ens.horizon, ens.dt, seed);
  });
}

void write_path_csv(std::ostream& os, const SamplePath& path) {
  const std::size_t d = path.manifold.coord_dim();
  os << "t";
  for (std::size_t i = 0; i < d; ++i) os << ",coord_" << i;
  for (std::size_t i = 0; i < path.noise_dim; ++i) os << ",dW_" << i;
  os << "\n" << std::setprecision(17);
  for (std::size_t k = 0; k < path.points.size(); ++k) {
    os << path.times[k];
    for (std::size_t i = 0; i < d; ++i) os << "," << path.points[k][i];
    for (std::size_t i = 0; i < path.noise_dim; ++i) {
      os << ",";
      if (k > 0) os << path.dW[(k - 1) * path.noise_dim + i];
    }
    os << "\n";
  }
}

}  // namespace stochform
