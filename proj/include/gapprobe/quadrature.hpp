#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "gapprobe/error.hpp"

namespace gapprobe {

enum class Rule { gauss_hermite_mapped, adaptive_simpson, tanh_sinh };

// max_subdivisions bounds the refinement spent on one panel: the number of
// subintervals for adaptive_simpson, the number of nodes for tanh_sinh, and
// the node count of the whole-line rule for gauss_hermite_mapped.
struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
  Rule rule = Rule::tanh_sinh;

  // Defaults for integrals assembled from 2D rules or cancelling 1D pieces.
  static QuadratureSpec two_dimensional() {
    QuadratureSpec s;
    s.rel_tol = 1e-8;
    return s;
  }

  void validate() const;
  double target(double value) const { return std::max(abs_tol, rel_tol * std::abs(value)); }
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::int64_t evaluations = 0;
};

// How an integrand over the whole line decays.
//   gaussian: |f(x)| <= poly(x) e^{-x^2/(2 scale^2)}; truncated at |x| = 12 scale.
//   periodic_inverse_square: f(x) = g(x)/x^2 for large |x| with g periodic of
//   period `scale`; summed over whole periods and Richardson-extrapolated in 1/U.
enum class Tail { gaussian, periodic_inverse_square };

struct LineIntegrand {
  std::function<double(double)> f;
  Tail tail = Tail::gaussian;
  double scale = 1.0;
  double panel = 1.0;  // longest panel; must resolve the integrand's oscillation
};

constexpr double kGaussianCutoff = 12.0;

IntegralResult integrate_1d(const LineIntegrand& integrand, const QuadratureSpec& spec = {});

// Finite interval, panels no longer than `panel`.
IntegralResult integrate_interval(const std::function<double(double)>& f, double a, double b, double panel,
                                  const QuadratureSpec& spec = {});

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1]; cached, safe to call concurrently.
const GaussRule& gauss_legendre(int n);

// Gauss-Hermite for the weight e^{-t^2}, with log-weights so that
// w_i e^{t_i^2} stays representable at large n.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> log_weights;
};
const HermiteRule& gauss_hermite(int n);

namespace detail {
[[noreturn]] void throw_non_finite(double x, double y);
[[noreturn]] void throw_tolerance(const char* what, double error, double target);
constexpr double kEps = std::numeric_limits<double>::epsilon();
}  // namespace detail

// Tensor-product composite Gauss-Legendre over a rectangle. The estimate is
// the order-24 rule; the error is its distance to an order-16 rule on the same
// panels plus a rounding bound. Panels are halved until the target is met.
// `symmetric` declares f(x, y) = f(y, x) on a square box, halving the work.
template <class F>
IntegralResult integrate_box(F&& f, double x0, double x1, double y0, double y1, double panel,
                             const QuadratureSpec& spec, bool symmetric = false) {
  spec.validate();
  if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("integrate_box: empty box");
  if (symmetric && (x0 != y0 || x1 != y1)) throw std::invalid_argument("integrate_box: symmetric needs a square box");
  const GaussRule& lo = gauss_legendre(16);
  const GaussRule& hi = gauss_legendre(24);
  IntegralResult out;
  int nx = std::max(1, static_cast<int>(std::ceil((x1 - x0) / panel)));
  int ny = std::max(1, static_cast<int>(std::ceil((y1 - y0) / panel)));
  for (;;) {
    const double hx = (x1 - x0) / nx;
    const double hy = (y1 - y0) / ny;
    double sum_lo = 0.0, sum_hi = 0.0, sum_abs = 0.0;
    auto panel_sum = [&](const GaussRule& rule, int ix, int iy, double& abs_acc) {
      const double cx = x0 + (ix + 0.5) * hx;
      const double cy = y0 + (iy + 0.5) * hy;
      double s = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = cx + 0.5 * hx * rule.nodes[i];
        double row = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          const double y = cy + 0.5 * hy * rule.nodes[j];
          const double v = f(x, y);
          if (!std::isfinite(v)) detail::throw_non_finite(x, y);
          row += rule.weights[j] * v;
          abs_acc += std::abs(rule.weights[i] * rule.weights[j] * v);
        }
        s += rule.weights[i] * row;
      }
      out.evaluations += static_cast<std::int64_t>(rule.nodes.size() * rule.nodes.size());
      return 0.25 * hx * hy * s;
    };
    double discard = 0.0;
    double comp_hi = 0.0, comp_lo = 0.0;
    // Neumaier summation across panels
    auto add = [](double& sum, double& comp, double v) {
      const double t = sum + v;
      comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
      sum = t;
    };
    for (int ix = 0; ix < nx; ++ix) {
      for (int iy = symmetric ? ix : 0; iy < ny; ++iy) {
        const double mult = (symmetric && iy != ix) ? 2.0 : 1.0;
        double abs_acc = 0.0;
        add(sum_hi, comp_hi, mult * panel_sum(hi, ix, iy, abs_acc));
        add(sum_lo, comp_lo, mult * panel_sum(lo, ix, iy, discard));
        sum_abs += mult * 0.25 * hx * hy * abs_acc;
      }
    }
    sum_hi += comp_hi;
    sum_lo += comp_lo;
    out.value = sum_hi;
    const double rounding = 8.0 * detail::kEps * sum_abs;
    out.error_estimate = std::abs(sum_hi - sum_lo) + rounding;
    if (out.error_estimate <= spec.target(out.value)) return out;
    if (std::abs(sum_hi - sum_lo) <= rounding || 2 * std::max(nx, ny) > spec.max_subdivisions) {
      detail::throw_tolerance("integrate_box", out.error_estimate, spec.target(out.value));
    }
    nx *= 2;
    ny *= 2;
  }
}

// sin^2(c u) / (pi^2 u^2), patched by its series near u = 0.
double sinc_squared(double c, double u) noexcept;

// sine_2 kernel, duplicated here so the oracle does not depend on pointproc.
double sine_kernel_value(double t) noexcept;

// int e^{-u^2/2 s^2} sin^2(sqrt2 pi u) / (pi^2 u^2) du
IntegralResult J_integral(double sigma, const QuadratureSpec& spec = {});

enum class VarianceRoute { rotated, direct2d };

// Exact variance of u_sigma^* under sine_2. `rotated` assembles the
// 45-degree-rotated decomposition from 1D integrals; `direct2d` integrates
// -u(x) u(y) K(x,y)^2 over the plane and adds int u^2.
IntegralResult var_exact_sine(double sigma, VarianceRoute route,
                              const QuadratureSpec& spec = QuadratureSpec::two_dimensional());

struct VarianceCrossCheck {
  IntegralResult rotated;
  IntegralResult direct2d;
  double discrepancy;
};

// Both routes; throws RouteDisagreement when they differ by more than
// ten times their combined error estimates.
VarianceCrossCheck var_exact_sine_checked(double sigma,
                                          const QuadratureSpec& spec = QuadratureSpec::two_dimensional());

// (1/2) int (u_sigma')^2 dx
IntegralResult energy_quadrature(double sigma, const QuadratureSpec& spec = {});

// 2R - int_{[-R,R]^2} K(x,y)^2 dx dy
IntegralResult number_variance_exact(double R, const QuadratureSpec& spec = QuadratureSpec::two_dimensional());

// Quadrature counterparts of the closed forms, used by the verification suite.
IntegralResult eq5_quadrature(double sigma, const QuadratureSpec& spec = {});
IntegralResult gaussian_cosine_quadrature(double a, double b, const QuadratureSpec& spec = {});
IntegralResult u_l2_quadrature(double sigma, const QuadratureSpec& spec = {});
IntegralResult term_I_quadrature(double sigma, const QuadratureSpec& spec = {});
IntegralResult energy_upper_bound_quadrature(double sigma, const QuadratureSpec& spec = {});

}  // namespace gapprobe
