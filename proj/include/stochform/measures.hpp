#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stochform/fields.hpp"
#include "stochform/region.hpp"
#include "stochform/sde.hpp"

namespace stochform {

/// Histogram partition of M.
///
/// Torus: k x k uniform grid on [0,1)^2, bin index = i * k + j for x in
/// [i/k, (i+1)/k), y in [j/k, (j+1)/k).
/// Sphere (n >= 2): `bands` slabs uniform in x_1 on [-1, 1] (equal area on
/// S^2) times `azimuth` sectors of atan2(x_3, x_2); index = band * azimuth + sector.
class Binning {
 public:
  static Binning torus_grid(std::size_t k);
  static Binning sphere_bands(std::size_t n, std::size_t bands, std::size_t azimuth);

  const Manifold& manifold() const noexcept { return manifold_; }
  std::size_t size() const noexcept { return rows_ * cols_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::string descriptor() const;

  std::size_t index_of(const Vec& x) const;
  Vec center(std::size_t bin) const;
  std::vector<Vec> corners(std::size_t bin) const;
  /// Upper bound on the distance from the center to any point of the bin.
  double circumradius(std::size_t bin) const;

  /// Same partition type with every resolution doubled.
  Binning refined() const;

 private:
  Binning(Manifold m, std::size_t rows, std::size_t cols) : manifold_(m), rows_(rows), cols_(cols) {}
  Vec sphere_point(double x1, double phi) const;

  Manifold manifold_;
  std::size_t rows_;
  std::size_t cols_;
};

inline constexpr double kMassSumTol = 1e-12;

/// Normalized histogram measure. `sample_count` = 0 marks an exact
/// (non-sampled) measure. `batch_masses` holds one normalized histogram per
/// independent path when the measure was built from an ensemble.
struct MeasureEstimate {
  Binning binning;
  std::vector<double> masses;
  std::size_t sample_count = 0;
  std::vector<std::vector<double>> batch_masses;

  const Manifold& manifold() const noexcept { return binning.manifold(); }
  double total_mass() const;
  /// Uniform mass over bins (not invariant in general; used as a control).
  static MeasureEstimate uniform(const Binning& b);
  /// All mass in the bin containing x.
  static MeasureEstimate dirac(const Binning& b, const Vec& x);
};

/// Visit counts of one path (points with index >= round(burn_in * steps)).
std::vector<double> occupation_counts(const SamplePath& path, const Binning& binning,
                                      double burn_in_fraction);

/// Normalized visit-frequency histogram pooled over paths. Throws
/// EmptyAfterBurnIn when no samples survive the burn-in.
MeasureEstimate occupation_measure(const std::vector<SamplePath>& paths, const Binning& binning,
                                   double burn_in_fraction);

/// Streams an ensemble into an occupation measure without retaining paths.
MeasureEstimate occupation_measure(const DiffusionSpec& spec, const ManifoldPoint& x0,
                                   const EnsembleSpec& ens, const Binning& binning,
                                   double burn_in_fraction, unsigned threads = 1);

struct InvarianceResidual {
  std::string function_id;
  double residual = 0.0;        // sum_bins L f(center) mass
  double mc_allowance = 0.0;    // 3 x batch standard error (or C / sqrt(samples))
  double discretization = 0.0;  // sum_bins mass * max_corner |L f(corner) - L f(center)|
  double tolerance = 0.0;
  bool pass = false;
};

/// Checks int L f dmu = 0 for each test function.
std::vector<InvarianceResidual> validate_invariant(const MeasureEstimate& mu,
                                                   const DiffusionSpec& spec,
                                                   const std::vector<ScalarField>& test_functions);

inline constexpr double kCoherenceMassTol = 1e-9;

struct CoherenceResult {
  bool coherent = false;
  double leaked_mass = 0.0;
};

/// Mass of the bins that may meet the radius-neighborhood of W; coherent
/// when it is at most 1e-9.
CoherenceResult coherence_check(const MeasureEstimate& mu, const RegionSpec& region,
                                double neighborhood_radius);

/// CSV: bin_index,center_0..center_d,mass
void write_measure_csv(std::ostream& os, const MeasureEstimate& mu);

}  // namespace stochform
