#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gapprobe/estimators.hpp"
#include "gapprobe/pointproc.hpp"
#include "gapprobe/quadrature.hpp"
#include "gapprobe/testfn.hpp"

namespace gapprobe {

// e^{-(x - center)^2 / (2 width^2)}
struct GaussianBump {
  double center = 0.0;
  double width = 1.0;

  double value(double x) const noexcept;
  double derivative(double x) const noexcept;
};

// Base functions of a cylinder function; derivatives are analytic.
using BaseFunction = std::variant<TestFunction, GaussianBump>;

double base_value(const BaseFunction& u, double x) noexcept;
double base_derivative(const BaseFunction& u, double x) noexcept;

// Outer map Phi: R^k -> R together with its gradient.
struct OuterMap {
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;

  static OuterMap coordinate(std::size_t index);
  static OuterMap constant(double c);
  // sum_i c_i v_i
  static OuterMap linear(std::vector<double> coefficients);
  // tanh(sum_i c_i v_i): bounded with bounded derivatives
  static OuterMap tanh_of_linear(std::vector<double> coefficients);
  // sin(sum_i c_i v_i)
  static OuterMap sin_of_linear(std::vector<double> coefficients);
};

// U = Phi(u_1^*, ..., u_k^*)
class CylinderFunction {
public:
  CylinderFunction(std::vector<BaseFunction> bases, OuterMap outer);

  // The linear statistic u_sigma^* itself.
  static CylinderFunction linear_statistic(const TestFunction& f);

  std::size_t arity() const noexcept { return bases_.size(); }
  const std::vector<BaseFunction>& bases() const noexcept { return bases_; }
  const OuterMap& outer() const noexcept { return outer_; }

  std::vector<double> statistics(const Configuration& c) const;

  // U + V and U - V act on the concatenated bases.
  friend CylinderFunction operator+(const CylinderFunction& a, const CylinderFunction& b);
  friend CylinderFunction operator-(const CylinderFunction& a, const CylinderFunction& b);

private:
  std::vector<BaseFunction> bases_;
  OuterMap outer_;
};

double eval_cylinder(const CylinderFunction& U, const Configuration& c);

// Gamma(U)(c) = sum_{i,j} d_i Phi d_j Phi sum_{x in c} u_i'(x) u_j'(x),
// accumulated per point as (sum_i d_i Phi u_i'(x))^2 so it is never negative.
double square_field_config(const CylinderFunction& U, const Configuration& c);

// Mean of Gamma(U)/2 over the batch.
EstimateWithCI mc_dirichlet_energy(const CylinderFunction& U, const SampleBatch& batch);

struct RayleighRow {
  double sigma = 0.0;
  double var_lb = 0.0;
  std::optional<double> var_exact;
  std::optional<EstimateWithCI> var_mc;
  double energy_exact = 0.0;
  double energy_ub = 0.0;
  std::optional<EstimateWithCI> energy_mc;
  double ratio_ub = 0.0;
  std::optional<double> ratio_exact;
  std::string failure;  // empty when the row completed

  bool ok() const noexcept { return failure.empty(); }
};

enum class SweepMode { analytic, analytic_plus_mc };

struct MonteCarloParams {
  double half_width = 48.0;
  int nodes = 0;  // 0 picks the minimum resolution ceil(8L)
  std::size_t replicas = 2000;
  std::uint64_t seed = 0;
};

// Upper bounds on the spectral gap from the family u_sigma^*. One sine_2
// batch serves every sigma (common random numbers). Failed rows are marked,
// not fatal.
std::vector<RayleighRow> rayleigh_sweep(std::span<const double> sigmas, SweepMode mode,
                                        const std::optional<MonteCarloParams>& mc = std::nullopt,
                                        const QuadratureSpec& spec = QuadratureSpec::two_dimensional(),
                                        unsigned threads = 1);

}  // namespace gapprobe
