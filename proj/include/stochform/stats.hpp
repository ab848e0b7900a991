#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stochform::stats {

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance (0 when n < 2)
  double stderr_mean = 0.0;
};

Summary summarize(std::span<const double> xs);

/// Two-sided 95% Student-t quantile with `dof` degrees of freedom.
double t_quantile_975(std::size_t dof);

struct BatchMeans {
  std::vector<double> batch_means;
  double mean = 0.0;
  double ci95 = 0.0;  // half-width from the Student-t quantile
};

/// Splits `xs` (in order) into `batches` contiguous groups of near-equal
/// size and forms the confidence interval from the group means.
BatchMeans batch_means(std::span<const double> xs, std::size_t batches);

struct Interval {
  double lower;
  double upper;
};

/// Wilson score interval at confidence z (1.96 for 95%).
Interval wilson(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Slope of log(err) against log(h).
double loglog_slope(std::span<const double> h, std::span<const double> err);

struct Moments {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

Moments shape_moments(std::span<const double> xs);

}  // namespace stochform::stats
