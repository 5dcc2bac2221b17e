#include "gapprobe/estimators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gapprobe/error.hpp"

namespace gapprobe {

EstimateWithCI summarize(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) throw std::invalid_argument("summarize: no replicas");
  EstimateWithCI est;
  est.replicas = n;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(n);
  if (n < 2) return est;

  // centred sums keep the jackknife free of cancellation
  double s2 = 0.0;
  for (double v : values) s2 += (v - est.mean) * (v - est.mean);
  const double dn = static_cast<double>(n);
  est.variance = s2 / (dn - 1.0);
  est.std_error = std::sqrt(est.variance / dn);
  if (n < 3) return est;

  // Leaving out d_i = x_i - mean shifts the centred sum of squares to
  // s2 - d_i^2 - d_i^2/(n-1); divide by n-2 for the unbiased variance.
  std::vector<double> loo(n);
  double loo_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - est.mean;
    loo[i] = (s2 - d * d * dn / (dn - 1.0)) / (dn - 2.0);
    loo_mean += loo[i];
  }
  loo_mean /= dn;
  double spread = 0.0;
  for (double v : loo) spread += (v - loo_mean) * (v - loo_mean);
  est.variance_std_error = std::sqrt((dn - 1.0) / dn * spread);
  return est;
}

CorrelationEstimate correlation_jackknife(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n != b.size() || n < 3) throw std::invalid_argument("correlation_jackknife: need at least 3 paired samples");
  const double dn = static_cast<double>(n);
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= dn;
  mb /= dn;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  CorrelationEstimate out;
  if (saa <= 0.0 || sbb <= 0.0) throw NumericError(ErrorKind::numerical_degeneracy, "correlation of a constant sample");
  out.value = sab / std::sqrt(saa * sbb);
  // removing point i: centred sums drop d_i d_j * n/(n-1)
  std::vector<double> loo(n);
  double loo_mean = 0.0;
  const double shrink = dn / (dn - 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    const double caa = saa - shrink * da * da;
    const double cbb = sbb - shrink * db * db;
    const double cab = sab - shrink * da * db;
    loo[i] = cab / std::sqrt(caa * cbb);
    loo_mean += loo[i];
  }
  loo_mean /= dn;
  double spread = 0.0;
  for (double v : loo) spread += (v - loo_mean) * (v - loo_mean);
  out.std_error = std::sqrt((dn - 1.0) / dn * spread);
  return out;
}

PowerLawFit growth_exponent(std::span<const double> sigmas, std::span<const double> variances) {
  const std::size_t n = sigmas.size();
  if (n != variances.size()) throw std::invalid_argument("growth_exponent: length mismatch");
  if (n < 3) throw std::invalid_argument("growth_exponent: need at least 3 points");
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    require_positive(sigmas[i], "sigma");
    require_positive(variances[i], "variance");
    lx[i] = std::log(sigmas[i]);
    ly[i] = std::log(variances[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw NumericError(ErrorKind::degenerate_fit, "all sigma values are equal");
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace gapprobe
