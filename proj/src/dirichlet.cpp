#include "gapprobe/dirichlet.hpp"

#include <cmath>
#include <stdexcept>

#include "gapprobe/closedform.hpp"
#include "gapprobe/error.hpp"
#include "gapprobe/parallel.hpp"

namespace gapprobe {
namespace {

double dot(std::span<const double> c, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * v[i];
  return s;
}

void check_arity(std::span<const double> v, std::size_t k) {
  if (v.size() < k) throw std::invalid_argument("outer map evaluated with too few coordinates");
}

template <class Fn, class Dfn>
OuterMap composed(std::vector<double> c, Fn fn, Dfn dfn) {
  OuterMap m;
  m.value = [c, fn](std::span<const double> v) {
    check_arity(v, c.size());
    return fn(dot(c, v));
  };
  m.gradient = [c, dfn](std::span<const double> v, std::span<double> g) {
    check_arity(v, c.size());
    const double d = dfn(dot(c, v));
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = i < c.size() ? d * c[i] : 0.0;
  };
  return m;
}

// Phi_a(v_head) +/- Phi_b(v_tail)
OuterMap combine(const OuterMap& a, std::size_t ka, const OuterMap& b, std::size_t kb, double sign) {
  OuterMap m;
  m.value = [=](std::span<const double> v) { return a.value(v.first(ka)) + sign * b.value(v.subspan(ka, kb)); };
  m.gradient = [=](std::span<const double> v, std::span<double> g) {
    a.gradient(v.first(ka), g.first(ka));
    b.gradient(v.subspan(ka, kb), g.subspan(ka, kb));
    for (std::size_t i = ka; i < ka + kb; ++i) g[i] *= sign;
  };
  return m;
}

}  // namespace

double GaussianBump::value(double x) const noexcept {
  const double r = (x - center) / width;
  return std::exp(-0.5 * r * r);
}

double GaussianBump::derivative(double x) const noexcept {
  const double r = (x - center) / width;
  return -r / width * std::exp(-0.5 * r * r);
}

double base_value(const BaseFunction& u, double x) noexcept {
  return std::visit([x](const auto& f) { return f.value(x); }, u);
}

double base_derivative(const BaseFunction& u, double x) noexcept {
  return std::visit([x](const auto& f) { return f.derivative(x); }, u);
}

OuterMap OuterMap::coordinate(std::size_t index) {
  OuterMap m;
  m.value = [index](std::span<const double> v) {
    check_arity(v, index + 1);
    return v[index];
  };
  m.gradient = [index](std::span<const double>, std::span<double> g) {
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = (i == index) ? 1.0 : 0.0;
  };
  return m;
}

OuterMap OuterMap::constant(double c) {
  OuterMap m;
  m.value = [c](std::span<const double>) { return c; };
  m.gradient = [](std::span<const double>, std::span<double> g) {
    for (double& x : g) x = 0.0;
  };
  return m;
}

OuterMap OuterMap::linear(std::vector<double> coefficients) {
  return composed(std::move(coefficients), [](double s) { return s; }, [](double) { return 1.0; });
}

OuterMap OuterMap::tanh_of_linear(std::vector<double> coefficients) {
  return composed(
      std::move(coefficients), [](double s) { return std::tanh(s); },
      [](double s) {
        const double t = std::tanh(s);
        return 1.0 - t * t;
      });
}

OuterMap OuterMap::sin_of_linear(std::vector<double> coefficients) {
  return composed(std::move(coefficients), [](double s) { return std::sin(s); }, [](double s) { return std::cos(s); });
}

CylinderFunction::CylinderFunction(std::vector<BaseFunction> bases, OuterMap outer)
    : bases_(std::move(bases)), outer_(std::move(outer)) {
  if (bases_.empty()) throw std::invalid_argument("cylinder function needs at least one base function");
  if (!outer_.value || !outer_.gradient) throw std::invalid_argument("cylinder function needs Phi and its gradient");
}

CylinderFunction CylinderFunction::linear_statistic(const TestFunction& f) {
  return CylinderFunction({f}, OuterMap::coordinate(0));
}

std::vector<double> CylinderFunction::statistics(const Configuration& c) const {
  std::vector<double> v(bases_.size(), 0.0);
  for (std::size_t i = 0; i < bases_.size(); ++i) {
    v[i] = linear_statistic_of([&](double x) { return base_value(bases_[i], x); }, c.points());
  }
  return v;
}

CylinderFunction operator+(const CylinderFunction& a, const CylinderFunction& b) {
  std::vector<BaseFunction> bases = a.bases_;
  bases.insert(bases.end(), b.bases_.begin(), b.bases_.end());
  return CylinderFunction(std::move(bases), combine(a.outer_, a.arity(), b.outer_, b.arity(), 1.0));
}

CylinderFunction operator-(const CylinderFunction& a, const CylinderFunction& b) {
  std::vector<BaseFunction> bases = a.bases_;
  bases.insert(bases.end(), b.bases_.begin(), b.bases_.end());
  return CylinderFunction(std::move(bases), combine(a.outer_, a.arity(), b.outer_, b.arity(), -1.0));
}

double eval_cylinder(const CylinderFunction& U, const Configuration& c) {
  const std::vector<double> v = U.statistics(c);
  return U.outer().value(v);
}

double square_field_config(const CylinderFunction& U, const Configuration& c) {
  if (c.empty()) return 0.0;
  const std::vector<double> v = U.statistics(c);
  std::vector<double> grad(v.size());
  U.outer().gradient(v, grad);
  double total = 0.0;
  for (double x : c.points()) {
    double s = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i) {
      if (grad[i] != 0.0) s += grad[i] * base_derivative(U.bases()[i], x);
    }
    total += s * s;
  }
  return total;
}

EstimateWithCI mc_dirichlet_energy(const CylinderFunction& U, const SampleBatch& batch) {
  if (batch.configurations.empty()) throw std::invalid_argument("mc_dirichlet_energy: empty batch");
  std::vector<double> values(batch.configurations.size());
  for (std::size_t r = 0; r < values.size(); ++r) values[r] = 0.5 * square_field_config(U, batch.configurations[r]);
  return summarize(values);
}

std::vector<RayleighRow> rayleigh_sweep(std::span<const double> sigmas, SweepMode mode,
                                        const std::optional<MonteCarloParams>& mc, const QuadratureSpec& spec,
                                        unsigned threads) {
  if (sigmas.empty()) throw std::invalid_argument("rayleigh_sweep: empty sigma grid");
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    require_positive(sigmas[i], "sigma");
    if (i > 0 && !(sigmas[i] > sigmas[i - 1])) throw std::invalid_argument("rayleigh_sweep: sigmas must increase");
  }
  std::optional<SampleBatch> batch;
  if (mode == SweepMode::analytic_plus_mc) {
    const MonteCarloParams p = mc.value_or(MonteCarloParams{});
    const int nodes = p.nodes > 0 ? p.nodes : minimum_nodes(p.half_width);
    batch = sample_batch(nystrom_discretize(p.half_width, nodes), p.replicas, p.seed, threads);
  }

  std::vector<RayleighRow> rows(sigmas.size());
  parallel_for(sigmas.size(), threads, [&](std::size_t i) {
    const double sigma = sigmas[i];
    RayleighRow& row = rows[i];
    row.sigma = sigma;
    row.var_lb = var_lower_bound(sigma);
    row.energy_exact = energy_exact(sigma);
    row.energy_ub = energy_upper_bound(sigma);
    row.ratio_ub = row.energy_ub / row.var_lb;
    try {
      row.var_exact = var_exact_sine(sigma, VarianceRoute::rotated, spec).value;
      row.ratio_exact = row.energy_exact / *row.var_exact;
      if (batch) {
        const TestFunction f(sigma);
        row.var_mc = empirical_variance(f, *batch);
        row.energy_mc = mc_dirichlet_energy(CylinderFunction::linear_statistic(f), *batch);
      }
    } catch (const std::exception& e) {
      row.failure = e.what();
    }
  });
  return rows;
}

}  // namespace gapprobe
