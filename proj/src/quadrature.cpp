#include "gapprobe/quadrature.hpp"

#include <Eigen/Dense>

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "gapprobe/closedform.hpp"

namespace gapprobe {
namespace {

using std::numbers::pi;
using std::numbers::sqrt2;
using detail::kEps;

struct PanelResult {
  double value = 0.0;
  double error = 0.0;     // truncation estimate
  double abs_sum = 0.0;   // sum of |w f|, for the rounding bound
  std::int64_t evaluations = 0;
};

double checked(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) detail::throw_non_finite(x, std::numeric_limits<double>::quiet_NaN());
  return v;
}

struct SimpsonInterval {
  double a, b, fa, fm, fb, whole;
};

PanelResult simpson_panel(const std::function<double(double)>& f, double a, double b, double tol, int budget) {
  PanelResult r;
  const double len = b - a;
  constexpr int kInitial = 8;
  std::vector<SimpsonInterval> stack;
  stack.reserve(64);
  double prev_x = a;
  double prev_f = checked(f, a);
  r.evaluations = 1;
  for (int k = 1; k <= kInitial; ++k) {
    const double x = a + len * k / kInitial;
    const double m = 0.5 * (prev_x + x);
    const double fm = checked(f, m);
    const double fx = checked(f, x);
    r.evaluations += 2;
    stack.push_back({prev_x, x, prev_f, fm, fx, (x - prev_x) / 6.0 * (prev_f + 4.0 * fm + fx)});
    prev_x = x;
    prev_f = fx;
  }
  int intervals = kInitial;
  while (!stack.empty()) {
    const SimpsonInterval iv = stack.back();
    stack.pop_back();
    const double m = 0.5 * (iv.a + iv.b);
    const double lm = 0.5 * (iv.a + m);
    const double rm = 0.5 * (m + iv.b);
    const double flm = checked(f, lm);
    const double frm = checked(f, rm);
    r.evaluations += 2;
    const double h = iv.b - iv.a;
    const double left = h / 12.0 * (iv.fa + 4.0 * flm + iv.fm);
    const double right = h / 12.0 * (iv.fm + 4.0 * frm + iv.fb);
    const double diff = left + right - iv.whole;
    const double local_tol = tol * h / len;
    if (std::abs(diff) <= 15.0 * local_tol || intervals >= budget || h < 1e-13 * len) {
      r.value += left + right + diff / 15.0;
      r.error += std::abs(diff) / 15.0;
      r.abs_sum += h / 12.0 * (std::abs(iv.fa) + 4.0 * std::abs(flm) + 2.0 * std::abs(iv.fm) + 4.0 * std::abs(frm) +
                               std::abs(iv.fb));
      if (intervals >= budget && std::abs(diff) > 15.0 * local_tol) r.error += std::abs(diff);
      continue;
    }
    ++intervals;
    stack.push_back({iv.a, m, iv.fa, flm, iv.fm, left});
    stack.push_back({m, iv.b, iv.fm, frm, iv.fb, right});
  }
  return r;
}

PanelResult tanh_sinh_panel(const std::function<double(double)>& f, double a, double b, double tol, int budget) {
  constexpr double kTMax = 3.5;
  constexpr int kMaxLevel = 12;
  const double c = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  PanelResult r;
  auto node = [&](double t, double& abs_acc) {
    const double s = 0.5 * pi * std::sinh(t);
    const double ch = std::cosh(s);
    const double w = half * 0.5 * pi * std::cosh(t) / (ch * ch);
    const double x = c + half * std::tanh(s);
    const double v = checked(f, x);
    ++r.evaluations;
    abs_acc += std::abs(w * v);
    return w * v;
  };
  double h = 0.5;
  double sum = 0.0, abs_sum = 0.0;
  sum += node(0.0, abs_sum);
  for (int k = 1; k * h <= kTMax; ++k) {
    sum += node(k * h, abs_sum) + node(-k * h, abs_sum);
  }
  double estimate = h * sum;
  for (int level = 1; level <= kMaxLevel; ++level) {
    h *= 0.5;
    double added = 0.0;
    for (int k = 1; k * h <= kTMax; k += 2) {
      added += node(k * h, abs_sum) + node(-k * h, abs_sum);
    }
    sum += added;
    const double next = h * sum;
    const double diff = std::abs(next - estimate);
    estimate = next;
    r.value = estimate;
    r.error = diff;
    r.abs_sum = h * abs_sum;
    const double rounding = 4.0 * kEps * r.abs_sum;
    if (level >= 3 && diff <= std::max(tol, rounding)) return r;
    if (r.evaluations >= budget) break;
  }
  return r;
}

PanelResult gauss_hermite_line(const std::function<double(double)>& f, double width, double tol, int budget) {
  // int f = sqrt2 w sum_i W_i e^{t_i^2} f(sqrt2 w t_i)
  const double stretch = sqrt2 * width;
  auto apply = [&](int n, PanelResult& acc) {
    const HermiteRule& rule = gauss_hermite(n);
    double s = 0.0, abs_s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = rule.nodes[i];
      const double w = std::exp(rule.log_weights[i] + t * t) * stretch;
      const double v = checked(f, stretch * t);
      s += w * v;
      abs_s += std::abs(w * v);
    }
    acc.evaluations += n;
    acc.abs_sum = abs_s;
    return s;
  };
  PanelResult r;
  const int cap = std::min(budget, 1024);
  int n = 16;
  double prev = apply(n, r);
  while (2 * n <= cap) {
    n *= 2;
    const double next = apply(n, r);
    r.value = next;
    r.error = std::abs(next - prev);
    if (r.error <= std::max(tol, 4.0 * kEps * r.abs_sum)) return r;
    prev = next;
  }
  r.value = prev;
  if (r.error == 0.0) r.error = std::numeric_limits<double>::infinity();
  return r;
}

PanelResult run_panel(const std::function<double(double)>& f, double a, double b, double tol, const QuadratureSpec& spec) {
  switch (spec.rule) {
    case Rule::adaptive_simpson:
      return simpson_panel(f, a, b, tol, spec.max_subdivisions);
    case Rule::tanh_sinh:
      return tanh_sinh_panel(f, a, b, tol, spec.max_subdivisions);
    case Rule::gauss_hermite_mapped:
      break;
  }
  throw std::invalid_argument("gauss_hermite_mapped applies to whole-line Gaussian integrands only");
}

// Integrates [a, b] split into `count` equal panels, each to tol/count.
PanelResult panel_sum(const std::function<double(double)>& f, double a, double b, int count, double tol,
                      const QuadratureSpec& spec) {
  PanelResult total;
  const double width = (b - a) / count;
  for (int i = 0; i < count; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == count) ? b : a + (i + 1) * width;
    const PanelResult p = run_panel(f, lo, hi, tol / count, spec);
    total.value += p.value;
    total.error += p.error;
    total.abs_sum += p.abs_sum;
    total.evaluations += p.evaluations;
  }
  return total;
}

IntegralResult finish(const PanelResult& p, const QuadratureSpec& spec, const char* what) {
  IntegralResult out{p.value, p.error + 4.0 * kEps * p.abs_sum, p.evaluations};
  if (!(out.error_estimate <= spec.target(out.value))) {
    detail::throw_tolerance(what, out.error_estimate, spec.target(out.value));
  }
  return out;
}

// A cheap first pass sizes the absolute target for the accurate pass.
template <class Pass>
PanelResult two_pass(const QuadratureSpec& spec, Pass&& pass) {
  QuadratureSpec coarse = spec;
  coarse.abs_tol = 1e-6;
  const PanelResult rough = pass(1e-6, coarse);
  const double tol = 0.5 * std::max(spec.abs_tol, spec.rel_tol * std::abs(rough.value));
  PanelResult fine = pass(tol, spec);
  fine.evaluations += rough.evaluations;
  return fine;
}

IntegralResult integrate_gaussian_tail(const LineIntegrand& in, const QuadratureSpec& spec) {
  const double cut = kGaussianCutoff * in.scale;
  if (spec.rule == Rule::gauss_hermite_mapped) {
    const PanelResult p = two_pass(spec, [&](double tol, const QuadratureSpec& s) {
      return gauss_hermite_line(in.f, in.scale, tol, s.max_subdivisions);
    });
    return finish(p, spec, "integrate_1d(gauss_hermite_mapped)");
  }
  const double width = std::min(in.panel, in.scale);
  const int count = std::max(2, static_cast<int>(std::ceil(2.0 * cut / width)));
  const PanelResult p = two_pass(spec, [&](double tol, const QuadratureSpec& s) {
    return panel_sum(in.f, -cut, cut, count, tol, s);
  });
  return finish(p, spec, "integrate_1d");
}

IntegralResult integrate_periodic_tail(const LineIntegrand& in, const QuadratureSpec& spec) {
  if (spec.rule == Rule::gauss_hermite_mapped) {
    throw std::invalid_argument("gauss_hermite_mapped needs a Gaussian tail");
  }
  // Truncations at U_j = 32 * 2^j periods; the tail beyond a whole number of
  // periods has an asymptotic expansion in 1/U, which Richardson removes.
  constexpr int kLevels = 6;
  constexpr int kBasePeriods = 32;
  const double period = in.scale;
  const int per_period = std::max(1, static_cast<int>(std::ceil(period / in.panel)));
  const int total_panels = 2 * kBasePeriods * (1 << (kLevels - 1)) * per_period;

  auto pass = [&](double tol, const QuadratureSpec& s) {
    std::array<double, kLevels> partial{};
    PanelResult acc;
    const double panel_tol = tol / 64.0;
    // central block [-U_0, U_0], then the shells U_{j-1} < |x| < U_j
    const double u0 = kBasePeriods * period;
    const int central = 2 * kBasePeriods * per_period;
    PanelResult c = panel_sum(in.f, -u0, u0, central, panel_tol * central / total_panels, s);
    acc.value = c.value;
    acc.error = c.error;
    acc.abs_sum = c.abs_sum;
    acc.evaluations = c.evaluations;
    partial[0] = acc.value;
    for (int j = 1; j < kLevels; ++j) {
      const double lo = kBasePeriods * (1 << (j - 1)) * period;
      const double hi = 2.0 * lo;
      const int shell = kBasePeriods * (1 << (j - 1)) * per_period;
      const double shell_tol = panel_tol * shell / total_panels;
      const PanelResult right = panel_sum(in.f, lo, hi, shell, shell_tol, s);
      const PanelResult left = panel_sum(in.f, -hi, -lo, shell, shell_tol, s);
      acc.value += right.value + left.value;
      acc.error += right.error + left.error;
      acc.abs_sum += right.abs_sum + left.abs_sum;
      acc.evaluations += right.evaluations + left.evaluations;
      partial[j] = acc.value;
    }
    // Richardson table in h = 1/U with ratio 2
    std::array<std::array<double, kLevels>, kLevels> table{};
    for (int j = 0; j < kLevels; ++j) table[j][0] = partial[j];
    for (int l = 1; l < kLevels; ++l) {
      const double factor = std::ldexp(1.0, l) - 1.0;
      for (int j = l; j < kLevels; ++j) {
        table[j][l] = table[j][l - 1] + (table[j][l - 1] - table[j - 1][l - 1]) / factor;
      }
    }
    const int last = kLevels - 1;
    PanelResult out = acc;
    out.value = table[last][last];
    // extrapolation weights sum to at most ~3 in absolute value
    out.error = 3.0 * acc.error + std::abs(table[last][last] - table[last - 1][last - 1]);
    out.abs_sum = 3.0 * acc.abs_sum;
    return out;
  };
  const PanelResult p = two_pass(spec, pass);
  return finish(p, spec, "integrate_1d(periodic tail)");
}

const double kSqrtPi = std::sqrt(pi);
const double kSqrt2Pi = sqrt2 * pi;

double gaussian(double x, double sigma) {
  const double r = x / sigma;
  return std::exp(-0.5 * r * r);
}

QuadratureSpec component_spec(const QuadratureSpec& spec, double rel) {
  QuadratureSpec s = spec;
  s.rel_tol = std::max(rel, 4.0 * kEps);
  s.abs_tol = std::min(spec.abs_tol, 1e-15);
  return s;
}

void check_sigma(double sigma) {
  require_positive(sigma, "sigma");
  if (!std::isfinite(sigma)) throw std::invalid_argument("sigma must be finite");
}

}  // namespace

namespace detail {

void throw_non_finite(double x, double y) {
  std::ostringstream msg;
  msg << "integrand is not finite at x=" << x;
  if (!std::isnan(y)) msg << ", y=" << y;
  throw NumericError(ErrorKind::non_finite_integrand, msg.str());
}

void throw_tolerance(const char* what, double error, double target) {
  std::ostringstream msg;
  msg.precision(3);
  msg << what << ": error estimate " << error << " exceeds target " << target;
  throw NumericError(ErrorKind::tolerance_not_met, msg.str());
}

}  // namespace detail

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw std::invalid_argument("quadrature tolerances must be positive");
  if (max_subdivisions < 1) throw std::invalid_argument("max_subdivisions must be at least 1");
}

IntegralResult integrate_1d(const LineIntegrand& integrand, const QuadratureSpec& spec) {
  spec.validate();
  if (!integrand.f) throw std::invalid_argument("integrate_1d: empty integrand");
  require_positive(integrand.scale, "integrand scale");
  require_positive(integrand.panel, "integrand panel");
  switch (integrand.tail) {
    case Tail::gaussian:
      return integrate_gaussian_tail(integrand, spec);
    case Tail::periodic_inverse_square:
      return integrate_periodic_tail(integrand, spec);
  }
  throw std::invalid_argument("integrate_1d: unknown tail");
}

IntegralResult integrate_interval(const std::function<double(double)>& f, double a, double b, double panel,
                                  const QuadratureSpec& spec) {
  spec.validate();
  if (!(b > a)) throw std::invalid_argument("integrate_interval: need a < b");
  require_positive(panel, "panel");
  const int count = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
  const PanelResult p = two_pass(spec, [&](double tol, const QuadratureSpec& s) { return panel_sum(f, a, b, count, tol, s); });
  return finish(p, spec, "integrate_interval");
}

const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 256) throw std::invalid_argument("gauss_legendre: order out of range");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (slot) return *slot;
  auto rule = std::make_unique<GaussRule>();
  rule->nodes.resize(n);
  rule->weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule->nodes[i] = -x;
    rule->nodes[n - 1 - i] = x;
    rule->weights[i] = w;
    rule->weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule->nodes[n / 2] = 0.0;
  slot = std::move(rule);
  return *slot;
}

const HermiteRule& gauss_hermite(int n) {
  if (n < 1 || n > 1024) throw std::invalid_argument("gauss_hermite: order out of range");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<HermiteRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (slot) return *slot;
  // Golub-Welsch: Jacobi matrix with off-diagonal sqrt(k/2)
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericError(ErrorKind::eigen_failure, "Gauss-Hermite eigenproblem");
  auto rule = std::make_unique<HermiteRule>();
  rule->nodes.resize(n);
  rule->log_weights.resize(n);
  const double log_mu0 = 0.5 * std::log(pi);
  for (int i = 0; i < n; ++i) {
    rule->nodes[i] = solver.eigenvalues()[i];
    const double v0 = solver.eigenvectors()(0, i);
    rule->log_weights[i] = log_mu0 + 2.0 * std::log(std::abs(v0));
  }
  slot = std::move(rule);
  return *slot;
}

double sinc_squared(double c, double u) noexcept {
  const double t = c * u;
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return c * c / (pi * pi) * (1.0 - t2 / 3.0 + 2.0 * t2 * t2 / 45.0);
  }
  const double s = std::sin(t);
  return s * s / (pi * pi * u * u);
}

double sine_kernel_value(double t) noexcept {
  const double z = pi * t;
  if (std::abs(z) < 1e-4) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

IntegralResult J_integral(double sigma, const QuadratureSpec& spec) {
  check_sigma(sigma);
  LineIntegrand in{[sigma](double u) { return gaussian(u, sigma) * sinc_squared(kSqrt2Pi, u); }, Tail::gaussian, sigma,
                   0.5};
  return integrate_1d(in, spec);
}

IntegralResult energy_quadrature(double sigma, const QuadratureSpec& spec) {
  check_sigma(sigma);
  LineIntegrand in{[sigma](double x) {
                     const double r2 = (x / sigma) * (x / sigma);
                     const double d = std::exp(-0.5 * r2) * (1.0 - r2);
                     return 0.5 * d * d;
                   },
                   Tail::gaussian, sigma, 1.0};
  return integrate_1d(in, spec);
}

IntegralResult u_l2_quadrature(double sigma, const QuadratureSpec& spec) {
  check_sigma(sigma);
  LineIntegrand in{[sigma](double x) {
                     const double u = x * gaussian(x, sigma);
                     return u * u;
                   },
                   Tail::gaussian, sigma, 1.0};
  return integrate_1d(in, spec);
}

IntegralResult eq5_quadrature(double sigma, const QuadratureSpec& spec) {
  check_sigma(sigma);
  LineIntegrand in{[sigma](double u) {
                     const double s = std::sin(kSqrt2Pi * u);
                     return gaussian(u, sigma) * s * s / (pi * pi);
                   },
                   Tail::gaussian, sigma, 0.5};
  return integrate_1d(in, spec);
}

IntegralResult gaussian_cosine_quadrature(double a, double b, const QuadratureSpec& spec) {
  require_positive(b, "b");
  const double width = 1.0 / std::sqrt(2.0 * b);
  const double panel = (a > 0.0) ? std::min(1.0, pi / std::abs(a)) : 1.0;
  LineIntegrand in{[a, b](double u) { return std::exp(-b * u * u) * std::cos(a * u); }, Tail::gaussian, width, panel};
  return integrate_1d(in, spec);
}

IntegralResult term_I_quadrature(double sigma, const QuadratureSpec& spec) {
  check_sigma(sigma);
  // (1/4) int int e^{-(u^2+v^2)/2s^2} sin^2(sqrt2 pi u)/pi^2 du dv, by its product structure
  const QuadratureSpec inner = component_spec(spec, spec.rel_tol / 4.0);
  const IntegralResult gauss = integrate_1d({[sigma](double v) { return gaussian(v, sigma); }, Tail::gaussian, sigma, 1.0}, inner);
  const IntegralResult sine = eq5_quadrature(sigma, inner);
  IntegralResult out;
  out.value = 0.25 * gauss.value * sine.value;
  out.error_estimate = 0.25 * (std::abs(gauss.value) * sine.error_estimate + std::abs(sine.value) * gauss.error_estimate);
  out.evaluations = gauss.evaluations + sine.evaluations;
  if (out.error_estimate > spec.target(out.value)) detail::throw_tolerance("term_I_quadrature", out.error_estimate, spec.target(out.value));
  return out;
}

IntegralResult energy_upper_bound_quadrature(double sigma, const QuadratureSpec& spec) {
  check_sigma(sigma);
  LineIntegrand in{[sigma](double x) {
                     const double r2 = (x / sigma) * (x / sigma);
                     return std::exp(-r2) * (1.0 + r2 * r2);
                   },
                   Tail::gaussian, sigma, 1.0};
  return integrate_1d(in, spec);
}

namespace {

// sqrt(pi) s^3/2 + (I) - (sqrt(2 pi) s^3 / 4) J(s), every piece by quadrature.
IntegralResult var_rotated(double sigma, const QuadratureSpec& spec) {
  // Size component tolerances against the variance itself, which is much
  // smaller than the sigma^3 pieces that cancel.
  const double scale = u_l2_norm_sq(sigma);
  const double floor = var_lower_bound(sigma);
  const double rel = spec.target(floor) / (8.0 * scale);
  const QuadratureSpec inner = component_spec(spec, rel);

  const IntegralResult diag = u_l2_quadrature(sigma, inner);
  const IntegralResult gauss = integrate_1d({[sigma](double v) { return gaussian(v, sigma); }, Tail::gaussian, sigma, 1.0}, inner);
  // sin^2 = (1 - cos 2x)/2 splits (I)'s u-integral into a Gaussian and a damped cosine
  // the damped cosine can be far below its partner; judge it against that partner
  QuadratureSpec cos_spec = inner;
  cos_spec.abs_tol = std::max(inner.abs_tol, inner.rel_tol * gauss.value);
  const IntegralResult damped_cos = integrate_1d(
      {[sigma](double u) { return gaussian(u, sigma) * std::cos(2.0 * kSqrt2Pi * u); }, Tail::gaussian, sigma, 0.25},
      cos_spec);
  const IntegralResult second_moment = integrate_1d(
      {[sigma](double v) { return v * v * gaussian(v, sigma); }, Tail::gaussian, sigma, 1.0}, inner);
  const IntegralResult j = J_integral(sigma, inner);

  const double sine_part = (gauss.value - damped_cos.value) / (2.0 * pi * pi);
  const double sine_err = (gauss.error_estimate + damped_cos.error_estimate) / (2.0 * pi * pi);
  const double term1 = 0.25 * gauss.value * sine_part;
  const double term1_err = 0.25 * (gauss.value * sine_err + sine_part * gauss.error_estimate);
  const double term2 = 0.25 * second_moment.value * j.value;
  const double term2_err = 0.25 * (second_moment.value * j.error_estimate + j.value * second_moment.error_estimate);

  IntegralResult out;
  out.value = diag.value + term1 - term2;
  out.error_estimate = diag.error_estimate + term1_err + term2_err + 4.0 * kEps * (diag.value + term2);
  out.evaluations = diag.evaluations + gauss.evaluations + damped_cos.evaluations + second_moment.evaluations + j.evaluations;
  return out;
}

IntegralResult var_direct(double sigma, const QuadratureSpec& spec) {
  const double floor = var_lower_bound(sigma);
  const QuadratureSpec inner = component_spec(spec, spec.target(floor) / (4.0 * u_l2_norm_sq(sigma)));
  const IntegralResult diag = u_l2_quadrature(sigma, inner);
  const double cut = kGaussianCutoff * sigma;
  QuadratureSpec box = spec;
  box.abs_tol = 0.25 * spec.target(floor);
  box.rel_tol = 4.0 * kEps;
  box.max_subdivisions = std::max(spec.max_subdivisions, 4096);
  const IntegralResult corr = integrate_box(
      [sigma](double x, double y) {
        const double k = sine_kernel_value(x - y);
        return x * y * std::exp(-0.5 * (x * x + y * y) / (sigma * sigma)) * k * k;
      },
      -cut, cut, -cut, cut, std::min(1.0, sigma), box, /*symmetric=*/true);
  IntegralResult out;
  out.value = diag.value - corr.value;
  out.error_estimate = diag.error_estimate + corr.error_estimate;
  out.evaluations = diag.evaluations + corr.evaluations;
  return out;
}

}  // namespace

IntegralResult var_exact_sine(double sigma, VarianceRoute route, const QuadratureSpec& spec) {
  check_sigma(sigma);
  spec.validate();
  IntegralResult out = route == VarianceRoute::rotated ? var_rotated(sigma, spec) : var_direct(sigma, spec);
  if (!(out.error_estimate <= spec.target(out.value))) {
    detail::throw_tolerance("var_exact_sine", out.error_estimate, spec.target(out.value));
  }
  return out;
}

VarianceCrossCheck var_exact_sine_checked(double sigma, const QuadratureSpec& spec) {
  VarianceCrossCheck check{var_exact_sine(sigma, VarianceRoute::rotated, spec),
                           var_exact_sine(sigma, VarianceRoute::direct2d, spec), 0.0};
  check.discrepancy = std::abs(check.rotated.value - check.direct2d.value);
  const double allowed = 10.0 * (check.rotated.error_estimate + check.direct2d.error_estimate);
  if (check.discrepancy > allowed) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "sigma=" << sigma << ": rotated " << check.rotated.value << " vs direct2d " << check.direct2d.value;
    throw NumericError(ErrorKind::route_disagreement, msg.str());
  }
  return check;
}

IntegralResult number_variance_exact(double R, const QuadratureSpec& spec) {
  require_positive(R, "R");
  spec.validate();
  QuadratureSpec box = spec;
  // the count variance is increasing in R and exceeds min(2R, 1)/4
  box.abs_tol = spec.target(0.25 * std::min(2.0 * R, 1.0)) / 2.0;
  box.rel_tol = 4.0 * kEps;
  box.max_subdivisions = std::max(spec.max_subdivisions, 4096);
  const IntegralResult k2 = integrate_box(
      [](double x, double y) {
        const double k = sine_kernel_value(x - y);
        return k * k;
      },
      -R, R, -R, R, std::min(1.0, R), box, /*symmetric=*/true);
  IntegralResult out{2.0 * R - k2.value, k2.error_estimate + 4.0 * kEps * 2.0 * R, k2.evaluations};
  if (!(out.error_estimate <= spec.target(out.value))) {
    detail::throw_tolerance("number_variance_exact", out.error_estimate, spec.target(out.value));
  }
  return out;
}

}  // namespace gapprobe
