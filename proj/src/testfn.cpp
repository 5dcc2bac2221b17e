#include "gapprobe/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gapprobe/error.hpp"

namespace gapprobe {

TestFunction::TestFunction(double sigma) : sigma_(sigma) {
  require_positive(sigma, "sigma");
  if (!std::isfinite(sigma)) throw std::invalid_argument("sigma must be finite");
}

// exp underflows to 0 for |x| beyond ~38.6 sigma; that is the intended value.
double TestFunction::value(double x) const noexcept {
  const double r = x / sigma_;
  return x * std::exp(-0.5 * r * r);
}

double TestFunction::derivative(double x) const noexcept {
  const double r = x / sigma_;
  const double r2 = r * r;
  return std::exp(-0.5 * r2) * (1.0 - r2);
}

Configuration::Configuration(std::vector<double> points, double half_width)
    : points_(std::move(points)), half_width_(half_width) {
  if (!(half_width >= 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("configuration window half-width must be finite and non-negative");
  }
  for (double x : points_) {
    if (!std::isfinite(x) || std::abs(x) > half_width_) {
      throw std::invalid_argument("configuration point " + std::to_string(x) + " lies outside [-L, L]");
    }
  }
}

Configuration merge(const Configuration& a, const Configuration& b) {
  std::vector<double> pts(a.points().begin(), a.points().end());
  pts.insert(pts.end(), b.points().begin(), b.points().end());
  return Configuration(std::move(pts), std::max(a.half_width(), b.half_width()));
}

double eval_u(const TestFunction& f, double x) noexcept { return f.value(x); }

double eval_du(const TestFunction& f, double x) noexcept { return f.derivative(x); }

double square_field_1d(const TestFunction& f, const TestFunction& g, double x) noexcept {
  return f.derivative(x) * g.derivative(x);
}

double linear_statistic(const TestFunction& f, const Configuration& c) noexcept {
  return linear_statistic_of([&](double x) { return f.value(x); }, c.points());
}

}  // namespace gapprobe
