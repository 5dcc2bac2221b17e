#include "gapprobe/closedform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gapprobe/error.hpp"

namespace gapprobe {
namespace {

using std::numbers::pi;
using std::numbers::sqrt2;
const double sqrt_pi = std::sqrt(pi);

// 1 - e^{-t}, accurate as t -> 0
double one_minus_exp_neg(double t) { return -std::expm1(-t); }

double gaussian_suppression(double sigma) { return one_minus_exp_neg(4.0 * pi * pi * sigma * sigma); }

}  // namespace

double eq5(double sigma) {
  require_positive(sigma, "sigma");
  return sigma * gaussian_suppression(sigma) / (sqrt2 * pi * sqrt_pi);
}

double gaussian_cosine_integral(double a, double b) {
  require_positive(b, "b");
  if (!std::isfinite(a)) throw std::invalid_argument("a must be finite");
  return std::sqrt(pi / b) * std::exp(-a * a / (4.0 * b));
}

double term_I(double sigma) {
  require_positive(sigma, "sigma");
  return sigma * sigma * gaussian_suppression(sigma) / (4.0 * pi);
}

double term_II_lower_bound(double sigma) { return -u_l2_norm_sq(sigma); }

double u_l2_norm_sq(double sigma) {
  require_positive(sigma, "sigma");
  return sqrt_pi * sigma * sigma * sigma / 2.0;
}

// The sigma^3 diagonal term and the sinc-squared bound cancel, leaving term (I).
double var_lower_bound(double sigma) { return term_I(sigma); }

double energy_upper_bound(double sigma) {
  require_positive(sigma, "sigma");
  return 7.0 * sqrt_pi / 4.0 * sigma;
}

double energy_exact(double sigma) {
  require_positive(sigma, "sigma");
  return 3.0 * sqrt_pi / 8.0 * sigma;
}

double rayleigh_upper_bound(double sigma) {
  require_positive(sigma, "sigma");
  return 7.0 * pi * sqrt_pi / (sigma * gaussian_suppression(sigma));
}

double poisson_variance(double sigma) { return u_l2_norm_sq(sigma); }

double gap_criterion_ratio(double sigma, double variance) {
  require_positive(sigma, "sigma");
  require_positive(variance, "variance");
  return sigma / variance;
}

ClosedFormReport closed_form_report(double sigma) {
  return ClosedFormReport{
      .sigma = sigma,
      .eq5 = eq5(sigma),
      .term_I = term_I(sigma),
      .term_II_lb = term_II_lower_bound(sigma),
      .u_l2_sq = u_l2_norm_sq(sigma),
      .var_lb = var_lower_bound(sigma),
      .energy_ub = energy_upper_bound(sigma),
      .energy_exact = energy_exact(sigma),
      .rayleigh_ub = rayleigh_upper_bound(sigma),
      .poisson_var = poisson_variance(sigma),
  };
}

}  // namespace gapprobe
