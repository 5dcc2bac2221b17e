#include "gapprobe/verification.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "gapprobe/closedform.hpp"

namespace gapprobe {
namespace {

using std::numbers::pi;
using std::numbers::sqrt2;

std::string label(const char* name, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s(%.6g)", name, a);
  return buf;
}

std::string label(const char* name, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s(%.6g;%.6g)", name, a, b);
  return buf;
}

class Suite {
public:
  explicit Suite(const VerifyOptions& o) : opt_(o) {}

  void add(std::string name, double closed, const IntegralResult& q, double scale) {
    if (opt_.inject_fault && name.rfind(*opt_.inject_fault, 0) == 0) closed *= 1.0 + 1e-6;
    Check c;
    c.name = std::move(name);
    c.closed_form = closed;
    c.quadrature = q.value;
    c.quadrature_error = q.error_estimate;
    c.scale = scale;
    c.rel_error = std::abs(closed - q.value) / scale;
    c.tolerance = opt_.tolerance;
    c.passed = c.rel_error <= c.tolerance;
    checks_.push_back(std::move(c));
  }
  void add(std::string name, double closed, const IntegralResult& q) { add(std::move(name), closed, q, std::abs(closed)); }

  std::vector<Check> take() { return std::move(checks_); }

private:
  const VerifyOptions& opt_;
  std::vector<Check> checks_;
};

// h'(a) = -int u e^{-b u^2} sin(a u) du; the ODE is h'(a) = -(a / 2b) h(a).
IntegralResult gaussian_cosine_derivative(double a, double b, const QuadratureSpec& spec) {
  const double width = 1.0 / std::sqrt(2.0 * b);
  const double panel = (a > 0.0) ? std::min(1.0, pi / a) : 1.0;
  return integrate_1d({[a, b](double u) { return -u * std::exp(-b * u * u) * std::sin(a * u); }, Tail::gaussian, width, panel},
                      spec);
}

}  // namespace

const std::vector<double>& verification_sigmas() {
  static const std::vector<double> grid{0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0};
  return grid;
}

std::vector<Check> run_verification(const VerifyOptions& options) {
  options.spec.validate();
  const QuadratureSpec& spec = options.spec;
  Suite suite(options);

  for (double s : verification_sigmas()) {
    suite.add(label("eq5", s), eq5(s), eq5_quadrature(s, spec));
    suite.add(label("term_I", s), term_I(s), term_I_quadrature(s, spec));
    suite.add(label("u_l2_norm_sq", s), u_l2_norm_sq(s), u_l2_quadrature(s, spec));
    suite.add(label("energy_exact", s), energy_exact(s), energy_quadrature(s, spec));
    suite.add(label("energy_upper_bound", s), energy_upper_bound(s), energy_upper_bound_quadrature(s, spec));
  }

  // Tiny values (large a^2/b) are compared against the integrand's L1 norm
  // sqrt(pi/b), the natural scale of the quadrature's absolute error.
  const double grid[][2] = {{0.0, 1.0}, {1.0, 1.0}, {3.0, 0.25}, {5.0, 2.0}, {2.0 * sqrt2 * pi, 0.5}, {0.5, 4.0}};
  for (const auto& ab : grid) {
    const double a = ab[0], b = ab[1];
    const double norm = std::sqrt(pi / b);
    const double h = gaussian_cosine_integral(a, b);
    suite.add(label("gaussian_cosine_integral", a, b), h, gaussian_cosine_quadrature(a, b, spec), std::max(std::abs(h), norm));
    const IntegralResult dh = gaussian_cosine_derivative(a, b, spec);
    // derivative side scale: int |u| e^{-b u^2} du = 1/b
    suite.add(label("gaussian_cosine_ode", a, b), -a / (2.0 * b) * h, dh, std::max(a / (2.0 * b) * h, 1.0 / b));
  }

  suite.add("sinc_squared_line(1)", pi,
            integrate_1d({[](double u) { return pi * pi * sinc_squared(1.0, u); }, Tail::periodic_inverse_square, pi, 0.5},
                         spec));
  suite.add("sinc_squared_line(sqrt2*pi)", sqrt2,
            integrate_1d({[](double u) { return sinc_squared(sqrt2 * pi, u); }, Tail::periodic_inverse_square, 1.0 / sqrt2,
                          0.25},
                         spec));
  return suite.take();
}

}  // namespace gapprobe
