#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stochform/fields.hpp"
#include "stochform/parallel.hpp"
#include "stochform/rng.hpp"

namespace stochform {

/// Coefficient of the second-order term of the generator:
/// Half -> L = V + 1/2 sum X_i^2, Unit -> L = V + sum X_i^2.
///
/// Paths are always simulated from dX = V dt + sum X_i o dW^i with standard
/// Brownian motion, whose generator has the 1/2. The flag only changes how
/// generator-side quantities are evaluated, so Unit acts as a biased reading
/// that statistical checks are expected to reject.
enum class Convention { Half, Unit };

inline double convention_factor(Convention c) noexcept { return c == Convention::Half ? 0.5 : 1.0; }
std::string to_string(Convention c);
Convention parse_convention(const std::string& s);

/// dX = V(X) dt + sum_i X_i(X) o dW^i on a compact manifold.
class DiffusionSpec {
 public:
  DiffusionSpec(std::string id, Manifold m, std::optional<VectorField> drift,
                std::vector<VectorField> noise, Convention convention = Convention::Half,
                bool deterministic = false);

  /// Identifies the SDE (not the convention): paths store it for replay checks.
  const std::string& id() const noexcept { return id_; }
  const Manifold& manifold() const noexcept { return manifold_; }
  const std::optional<VectorField>& drift() const noexcept { return drift_; }
  const std::vector<VectorField>& noise() const noexcept { return noise_; }
  std::size_t noise_dim() const noexcept { return noise_.size(); }
  Convention convention() const noexcept { return convention_; }
  double factor() const noexcept { return convention_factor(convention_); }
  bool deterministic() const noexcept { return noise_.empty(); }

  DiffusionSpec with_convention(Convention c) const;

 private:
  std::string id_;
  Manifold manifold_;
  std::optional<VectorField> drift_;
  std::vector<VectorField> noise_;
  Convention convention_;
};

namespace specs {

/// dz = V(z) o dB with V = sin(2 pi x) d/dx + cos(2 pi x) d/dy on T^2.
DiffusionSpec torus_sin_cos(Convention c = Convention::Half);
/// dx = V(x) o dB on S^n with V(x) = e_1 - x_1 x.
DiffusionSpec sphere_height(std::size_t n = 2, Convention c = Convention::Half);
/// Torus Brownian motion (noise d/dx, d/dy) with drift grad F.
DiffusionSpec torus_gradient_drift(const ScalarField& potential,
                                   Convention c = Convention::Half);
/// Deterministic flow dz/dt = V(z) with the torus sin/cos field.
DiffusionSpec torus_sin_cos_flow();
/// Zero drift and no noise on the given manifold.
DiffusionSpec still(const Manifold& m);

}  // namespace specs

/// One Heun (predictor-corrector) Stratonovich step on raw coordinates.
/// Returns projected (sphere) or wrapped (torus) coordinates.
Vec heun_step(const DiffusionSpec& spec, const Vec& x, double dt, std::span<const double> dW);

/// Checked single step: x must lie on the spec's manifold, |dW| = m.
ManifoldPoint step_stratonovich(const DiffusionSpec& spec, const ManifoldPoint& x, double dt,
                                std::span<const double> dW);

/// View of one integration step handed to streaming observers.
struct PathStep {
  std::size_t index;  // step k: from = x_k, to = x_{k+1}
  double t;           // time of x_k
  double dt;
  const Vec& from;
  const Vec& to;
  std::span<const double> dW;
};

/// Fixed step count round(horizon / dt).
std::size_t step_count(double horizon, double dt);

/// Integrates the SDE for `steps` steps and hands each step to
/// `observer(const PathStep&) -> bool`; returning false stops early.
/// Returns the number of steps taken. Errors carry the step index.
template <class Observer>
std::size_t simulate_streaming(const DiffusionSpec& spec, const ManifoldPoint& x0,
                               std::size_t steps, BrownianIncrements& noise, Observer&& observer) {
  if (!(spec.manifold() == x0.manifold()))
    throw Error(ErrorKind::ManifoldMismatch, "initial point not on " + spec.manifold().name());
  std::array<double, kMaxDim> dw{};
  const std::span<double> dW(dw.data(), spec.noise_dim());
  const double dt = noise.dt();
  Vec x = x0.coords();
  for (std::size_t k = 0; k < steps; ++k) {
    noise.next(dW);
    Vec next;
    try {
      next = heun_step(spec, x, dt, dW);
    } catch (const Error& e) {
      throw e.with_step(k);
    }
    PathStep step{k, static_cast<double>(k) * dt, dt, x, next, dW};
    if (!observer(step)) return k + 1;
    x = next;
  }
  return steps;
}

/// Discretized trajectory with the increments that produced it.
struct SamplePath {
  Manifold manifold;
  std::string spec_id;
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::size_t noise_dim = 0;
  std::vector<double> times;  // times[k] = k dt
  std::vector<Vec> points;
  std::vector<double> dW;  // row-major, step k occupies [k m, (k+1) m)

  std::size_t steps() const noexcept { return points.empty() ? 0 : points.size() - 1; }
  ManifoldPoint point(std::size_t k) const { return ManifoldPoint(manifold, points[k]); }
  std::span<const double> increment(std::size_t k) const {
    return {dW.data() + k * noise_dim, noise_dim};
  }
};

SamplePath simulate_path(const DiffusionSpec& spec, const ManifoldPoint& x0, double horizon,
                         double dt, std::uint64_t seed);

/// Path with step refine * dt_fine driven by the Brownian path sampled at
/// dt_fine (increments summed). refine = 1 equals simulate_path.
SamplePath simulate_path_refined(const DiffusionSpec& spec, const ManifoldPoint& x0,
                                 double horizon, double dt_fine, std::size_t refine,
                                 std::uint64_t seed);

/// Rebuilds a path from its recorded seed and step size.
SamplePath replay(const DiffusionSpec& spec, const SamplePath& path);

struct EnsembleSpec {
  std::size_t n_paths = 1;
  std::uint64_t base_seed = 0;
  double horizon = 1.0;
  double dt = 1e-3;

  void validate() const;
  std::size_t steps() const { return step_count(horizon, dt); }
  std::uint64_t path_seed(std::size_t k) const { return derive_seed(base_seed, k); }
};

/// Retains every path. Identical output for any thread count.
std::vector<SamplePath> simulate_ensemble(const DiffusionSpec& spec, const ManifoldPoint& x0,
                                          const EnsembleSpec& ens, unsigned threads = 1);

/// Runs `per_path(k, seed) -> R` for every ensemble member and returns the
/// results in path order. Errors carry the path index.
template <class PerPath>
auto map_ensemble(const EnsembleSpec& ens, unsigned threads, PerPath&& per_path) {
  using R = decltype(per_path(std::size_t{}, std::uint64_t{}));
  ens.validate();
  std::vector<std::optional<R>> slots(ens.n_paths);
  parallel_for(ens.n_paths, threads, [&](std::size_t k) {
    try {
      slots[k].emplace(per_path(k, ens.path_seed(k)));
    } catch (const Error& e) {
      throw e.with_path(k);
    }
  });
  std::vector<R> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// CSV dump: header t,coord_0..coord_d,dW_0..dW_{m-1}; the dW columns of
/// row k hold the increment that produced point k (empty on row 0).
void write_path_csv(std::ostream& os, const SamplePath& path);

}  // namespace stochform
