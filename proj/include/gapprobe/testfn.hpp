#pragma once

#include <span>
#include <vector>

namespace gapprobe {

// u_sigma(x) = x * exp(-x^2 / (2 sigma^2)): odd, maximal at x = sigma,
// with every derivative of Gaussian decay.
class TestFunction {
public:
  explicit TestFunction(double sigma);

  double sigma() const noexcept { return sigma_; }
  double value(double x) const noexcept;
  double derivative(double x) const noexcept;

private:
  double sigma_;
};

// A finite point set inside the window [-L, L]. Points keep their
// multiplicity and input order.
class Configuration {
public:
  Configuration() = default;
  Configuration(std::vector<double> points, double half_width);

  std::span<const double> points() const noexcept { return points_; }
  double half_width() const noexcept { return half_width_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

private:
  std::vector<double> points_;
  double half_width_ = 0.0;
};

// Union of two configurations; the window is the larger of the two.
Configuration merge(const Configuration& a, const Configuration& b);

double eval_u(const TestFunction& f, double x) noexcept;
double eval_du(const TestFunction& f, double x) noexcept;

// Gamma^R(f, g)(x) = f'(x) g'(x)
double square_field_1d(const TestFunction& f, const TestFunction& g, double x) noexcept;

// u*(gamma) = sum over points of u(x); 0 on the empty configuration.
double linear_statistic(const TestFunction& f, const Configuration& c) noexcept;

template <class F>
double linear_statistic_of(F&& f, std::span<const double> points) {
  double sum = 0.0;
  for (double x : points) sum += f(x);
  return sum;
}

}  // namespace gapprobe
