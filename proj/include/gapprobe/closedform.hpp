#pragma once

// Closed-form values of every quantity in the no-spectral-gap argument for
// the linear statistics of u_sigma under the sine_2 process. All functions
// throw std::invalid_argument for sigma <= 0.

namespace gapprobe {

// int e^{-u^2/2s^2} sin^2(sqrt2 pi u) / pi^2 du = s (1 - e^{-4 pi^2 s^2}) / (sqrt2 pi^{3/2})
double eq5(double sigma);

// int_R e^{-b u^2} cos(a u) du = sqrt(pi/b) e^{-a^2/(4b)}
double gaussian_cosine_integral(double a, double b);

// Product-rotated Gaussian term of the correlation integral.
double term_I(double sigma);

// Lower bound of the sinc-squared term, obtained by dropping the Gaussian envelope.
double term_II_lower_bound(double sigma);

// int u_sigma^2 dx = sqrt(pi) sigma^3 / 2
double u_l2_norm_sq(double sigma);

double var_lower_bound(double sigma);
double energy_upper_bound(double sigma);

// (1/2) int (u_sigma')^2 dx = 3 sqrt(pi) sigma / 8
double energy_exact(double sigma);

double rayleigh_upper_bound(double sigma);

// Var of u_sigma^* under the unit-intensity Poisson process.
double poisson_variance(double sigma);

// sigma / Var(u_sigma^*); tends to zero iff the argument rules out a gap.
double gap_criterion_ratio(double sigma, double variance);

struct ClosedFormReport {
  double sigma;
  double eq5;
  double term_I;
  double term_II_lb;
  double u_l2_sq;
  double var_lb;
  double energy_ub;
  double energy_exact;
  double rayleigh_ub;
  double poisson_var;
};

ClosedFormReport closed_form_report(double sigma);

}  // namespace gapprobe
