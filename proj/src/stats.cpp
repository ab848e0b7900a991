#include "stochform/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <vector>

#include "stochform/error.hpp"

namespace stochform::stats {

Summary summarize(std::span<const double> xs) {
  Summary s;
  s.n = xs.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n < 2) return s;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.variance = ss / static_cast<double>(s.n - 1);
  s.stderr_mean = std::sqrt(s.variance / static_cast<double>(s.n));
  return s;
}

double t_quantile_975(std::size_t dof) {
  if (dof == 0) throw Error(ErrorKind::InvalidArgument, "t quantile needs dof >= 1");
  boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(dist, 0.975);
}

BatchMeans batch_means(std::span<const double> xs, std::size_t batches) {
  BatchMeans out;
  if (xs.empty()) return out;
  batches = std::max<std::size_t>(1, std::min(batches, xs.size()));
  const std::size_t n = xs.size();
  for (std::size_t b = 0; b < batches; ++b) {
    std::size_t lo = b * n / batches, hi = (b + 1) * n / batches;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += xs[i];
    out.batch_means.push_back(s / static_cast<double>(hi - lo));
  }
  double total = 0.0;
  for (double x : xs) total += x;
  out.mean = total / static_cast<double>(n);
  if (batches >= 2) {
    Summary s = summarize(out.batch_means);
    out.ci95 = t_quantile_975(batches - 1) * s.stderr_mean;
  }
  return out;
}

Interval wilson(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  const double lower = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double upper = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {lower, upper};
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "linear_fit needs >= 2 paired samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r_squared = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : (syy == 0.0 ? 1.0 : 0.0);
  return f;
}

double loglog_slope(std::span<const double> h, std::span<const double> err) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < h.size(); ++i) {
    lx.push_back(std::log(h[i]));
    ly.push_back(std::log(err[i]));
  }
  return linear_fit(lx, ly).slope;
}

Moments shape_moments(std::span<const double> xs) {
  Moments m;
  const double n = static_cast<double>(xs.size());
  if (xs.size() < 4) return m;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : xs) {
    double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 <= 0.0) return m;
  m.skewness = m3 / std::pow(m2, 1.5);
  m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  return m;
}

}  // namespace stochform::stats
