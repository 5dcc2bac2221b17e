#pragma once

#include <cstddef>
#include <span>

namespace gapprobe {

// Monte Carlo summary of a per-replica statistic. `std_error` belongs to the
// mean; `variance_std_error` is the delete-one jackknife error of the
// unbiased sample variance.
struct EstimateWithCI {
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  std::size_t replicas = 0;
  double variance_std_error = 0.0;
};

EstimateWithCI summarize(std::span<const double> values);

// Delete-one jackknife of the Pearson correlation between paired samples.
struct CorrelationEstimate {
  double value = 0.0;
  double std_error = 0.0;
};
CorrelationEstimate correlation_jackknife(std::span<const double> a, std::span<const double> b);

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares of log(variance) on log(sigma).
PowerLawFit growth_exponent(std::span<const double> sigmas, std::span<const double> variances);

}  // namespace gapprobe
