#include "stochform/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "stochform/generator.hpp"
#include "stochform/stats.hpp"

namespace stochform {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t clamp_index(double u, std::size_t n) {
  if (!(u > 0.0)) return 0;
  const auto i = static_cast<std::size_t>(u * static_cast<double>(n));
  return std::min(i, n - 1);
}

}  // namespace

Binning Binning::torus_grid(std::size_t k) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "torus grid needs k >= 1");
  return Binning(Manifold::torus(), k, k);
}

Binning Binning::sphere_bands(std::size_t n, std::size_t bands, std::size_t azimuth) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "sphere binning needs S^n with n >= 2");
  if (bands == 0 || azimuth == 0)
    throw Error(ErrorKind::InvalidArgument, "sphere binning needs positive band and sector counts");
  return Binning(Manifold::sphere(n), bands, azimuth);
}

std::string Binning::descriptor() const {
  if (manifold_.is_torus())
    return "torus_grid_" + std::to_string(rows_) + "x" + std::to_string(cols_);
  return "sphere_x1_bands_" + std::to_string(rows_) + "x_azimuth_" + std::to_string(cols_);
}

Binning Binning::refined() const { return Binning(manifold_, 2 * rows_, 2 * cols_); }

std::size_t Binning::index_of(const Vec& x) const {
  if (manifold_.is_torus()) return clamp_index(x[0], rows_) * cols_ + clamp_index(x[1], cols_);
  const double band = 0.5 * (x[0] + 1.0);
  const double phi = std::atan2(x[2], x[1]);
  return clamp_index(band, rows_) * cols_ + clamp_index((phi + std::numbers::pi) / kTwoPi, cols_);
}

Vec Binning::sphere_point(double x1, double phi) const {
  Vec v(manifold_.coord_dim());
  const double r = std::sqrt(std::max(0.0, 1.0 - x1 * x1));
  v[0] = x1;
  v[1] = r * std::cos(phi);
  v[2] = r * std::sin(phi);
  return v;
}

Vec Binning::center(std::size_t bin) const {
  const double i = static_cast<double>(bin / cols_) + 0.5;
  const double j = static_cast<double>(bin % cols_) + 0.5;
  if (manifold_.is_torus())
    return Vec{i / static_cast<double>(rows_), j / static_cast<double>(cols_)};
  return sphere_point(-1.0 + 2.0 * i / static_cast<double>(rows_),
                      -std::numbers::pi + kTwoPi * j / static_cast<double>(cols_));
}

std::vector<Vec> Binning::corners(std::size_t bin) const {
  const double i = static_cast<double>(bin / cols_);
  const double j = static_cast<double>(bin % cols_);
  const double r = static_cast<double>(rows_), c = static_cast<double>(cols_);
  std::vector<Vec> out;
  for (double di : {0.0, 1.0})
    for (double dj : {0.0, 1.0}) {
      if (manifold_.is_torus())
        out.push_back(Vec{(i + di) / r, (j + dj) / c});
      else
        out.push_back(sphere_point(-1.0 + 2.0 * (i + di) / r, -std::numbers::pi + kTwoPi * (j + dj) / c));
    }
  return out;
}

double Binning::circumradius(std::size_t bin) const {
  if (manifold_.is_torus())
    return 0.5 * std::hypot(1.0 / static_cast<double>(rows_), 1.0 / static_cast<double>(cols_));
  // sampled boundary, padded by the sagitta of one sample spacing
  constexpr int kSamples = 16;
  const Vec ctr = center(bin);
  const double i = static_cast<double>(bin / cols_);
  const double j = static_cast<double>(bin % cols_);
  const double r = static_cast<double>(rows_), c = static_cast<double>(cols_);
  double best = 0.0;
  for (int s = 0; s <= kSamples; ++s) {
    const double u = static_cast<double>(s) / kSamples;
    for (double edge : {0.0, 1.0}) {
      const Vec a = sphere_point(-1.0 + 2.0 * (i + edge) / r, -std::numbers::pi + kTwoPi * (j + u) / c);
      const Vec b = sphere_point(-1.0 + 2.0 * (i + u) / r, -std::numbers::pi + kTwoPi * (j + edge) / c);
      best = std::max({best, norm(a - ctr), norm(b - ctr)});
    }
  }
  return best + (kTwoPi / c + 2.0 / r) / kSamples;
}

double MeasureEstimate::total_mass() const {
  double s = 0.0;
  for (double m : masses) s += m;
  return s;
}

MeasureEstimate MeasureEstimate::uniform(const Binning& b) {
  MeasureEstimate mu{b, std::vector<double>(b.size(), 1.0 / static_cast<double>(b.size())), 0, {}};
  return mu;
}

MeasureEstimate MeasureEstimate::dirac(const Binning& b, const Vec& x) {
  MeasureEstimate mu{b, std::vector<double>(b.size(), 0.0), 0, {}};
  mu.masses[b.index_of(x)] = 1.0;
  return mu;
}

namespace {

std::size_t burn_in_start(std::size_t steps, double burn_in_fraction) {
  if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0))
    throw Error(ErrorKind::InvalidArgument, "burn-in fraction must lie in [0, 1)");
  return static_cast<std::size_t>(std::llround(burn_in_fraction * static_cast<double>(steps)));
}

MeasureEstimate pool(const Binning& binning, const std::vector<std::vector<double>>& per_path) {
  MeasureEstimate mu{binning, std::vector<double>(binning.size(), 0.0), 0, {}};
  double total = 0.0;
  for (const auto& counts : per_path)
    for (std::size_t b = 0; b < counts.size(); ++b) {
      mu.masses[b] += counts[b];
      total += counts[b];
    }
  if (total <= 0.0) throw Error(ErrorKind::EmptyAfterBurnIn, "no samples left after burn-in");
  for (double& m : mu.masses) m /= total;
  mu.sample_count = static_cast<std::size_t>(total);
  if (per_path.size() > 1) {
    for (const auto& counts : per_path) {
      double n = 0.0;
      for (double c : counts) n += c;
      std::vector<double> masses(counts.size());
      for (std::size_t b = 0; b < counts.size(); ++b) masses[b] = counts[b] / n;
      mu.batch_masses.push_back(std::move(masses));
    }
  }
  return mu;
}

}  // namespace

std::vector<double> occupation_counts(const SamplePath& path, const Binning& binning,
                                      double burn_in_fraction) {
  if (!(path.manifold == binning.manifold()))
    throw Error(ErrorKind::ManifoldMismatch, "path and binning live on different manifolds");
  std::vector<double> counts(binning.size(), 0.0);
  if (path.points.empty()) return counts;
  for (std::size_t k = burn_in_start(path.steps(), burn_in_fraction); k < path.points.size(); ++k)
    counts[binning.index_of(path.points[k])] += 1.0;
  return counts;
}

MeasureEstimate occupation_measure(const std::vector<SamplePath>& paths, const Binning& binning,
                                   double burn_in_fraction) {
  std::vector<std::vector<double>> per_path;
  per_path.reserve(paths.size());
  for (const auto& p : paths) per_path.push_back(occupation_counts(p, binning, burn_in_fraction));
  return pool(binning, per_path);
}

MeasureEstimate occupation_measure(const DiffusionSpec& spec, const ManifoldPoint& x0,
                                   const EnsembleSpec& ens, const Binning& binning,
                                   double burn_in_fraction, unsigned threads) {
  if (!(spec.manifold() == binning.manifold()))
    throw Error(ErrorKind::ManifoldMismatch, "spec and binning live on different manifolds");
  const std::size_t steps = ens.steps();
  const std::size_t start = burn_in_start(steps, burn_in_fraction);
  auto per_path = map_ensemble(ens, threads, [&](std::size_t, std::uint64_t seed) {
    std::vector<double> counts(binning.size(), 0.0);
    if (start == 0) counts[binning.index_of(x0.coords())] += 1.0;
    BrownianIncrements noise(seed, ens.dt, spec.noise_dim());
    simulate_streaming(spec, x0, steps, noise, [&](const PathStep& s) {
      if (s.index + 1 >= start) counts[binning.index_of(s.to)] += 1.0;
      return true;
    });
    return counts;
  });
  return pool(binning, per_path);
}

std::vector<InvarianceResidual> validate_invariant(const MeasureEstimate& mu,
                                                   const DiffusionSpec& spec,
                                                   const std::vector<ScalarField>& test_functions) {
  if (!(mu.manifold() == spec.manifold()))
    throw Error(ErrorKind::ManifoldMismatch, "measure and spec live on different manifolds");
  const Binning& bins = mu.binning;
  std::vector<InvarianceResidual> out;
  for (const auto& f : test_functions) {
    InvarianceResidual r;
    r.function_id = f.id();
    std::vector<double> lf(bins.size(), 0.0);
    double lf_max = 0.0;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      if (mu.masses[b] <= 0.0) continue;
      const Vec c = bins.center(b);
      lf[b] = apply_generator(spec, f, c);
      lf_max = std::max(lf_max, std::abs(lf[b]));
      double spread = 0.0;
      for (const Vec& corner : bins.corners(b))
        spread = std::max(spread, std::abs(apply_generator(spec, f, corner) - lf[b]));
      r.residual += lf[b] * mu.masses[b];
      r.discretization += spread * mu.masses[b];
    }
    if (mu.batch_masses.size() >= 2) {
      std::vector<double> per_batch;
      for (const auto& masses : mu.batch_masses) {
        double s = 0.0;
        for (std::size_t b = 0; b < bins.size(); ++b) s += lf[b] * masses[b];
        per_batch.push_back(s);
      }
      r.mc_allowance = 3.0 * stats::summarize(per_batch).stderr_mean;
    } else if (mu.sample_count > 0) {
      r.mc_allowance = 3.0 * lf_max / std::sqrt(static_cast<double>(mu.sample_count));
    }
    r.tolerance = r.mc_allowance + r.discretization;
    r.pass = std::abs(r.residual) <= r.tolerance;
    out.push_back(std::move(r));
  }
  return out;
}

CoherenceResult coherence_check(const MeasureEstimate& mu, const RegionSpec& region,
                                double neighborhood_radius) {
  CoherenceResult out;
  if (!(neighborhood_radius > 0.0)) {
    out.leaked_mass = 0.0;
    out.coherent = false;
    return out;
  }
  const Binning& bins = mu.binning;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    if (mu.masses[b] <= 0.0) continue;
    if (region.distance(bins.center(b)) - bins.circumradius(b) < neighborhood_radius)
      out.leaked_mass += mu.masses[b];
  }
  out.coherent = out.leaked_mass <= kCoherenceMassTol;
  return out;
}

void write_measure_csv(std::ostream& os, const MeasureEstimate& mu) {
  const std::size_t d = mu.manifold().coord_dim();
  os << "bin_index";
  for (std::size_t i = 0; i < d; ++i) os << ",center_" << i;
  os << ",mass\n";
  const auto old = os.precision(17);
  for (std::size_t b = 0; b < mu.masses.size(); ++b) {
    const Vec c = mu.binning.center(b);
    os << b;
    for (std::size_t i = 0; i < d; ++i) os << ',' << c[i];
    os << ',' << mu.masses[b] << '\n';
  }
  os.precision(old);
}

}  // namespace stochform
