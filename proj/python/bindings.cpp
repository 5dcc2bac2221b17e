#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gapprobe/cli.hpp"
#include "gapprobe/closedform.hpp"
#include "gapprobe/dyson.hpp"
#include "gapprobe/estimators.hpp"
#include "gapprobe/manifest.hpp"
#include "gapprobe/pointproc.hpp"
#include "gapprobe/quadrature.hpp"
#include "gapprobe/testfn.hpp"
#include "gapprobe/verification.hpp"

namespace py = pybind11;
using namespace gapprobe;

namespace {

VarianceRoute parse_route(const std::string& name) {
  if (name == "rotated") return VarianceRoute::rotated;
  if (name == "direct2d") return VarianceRoute::direct2d;
  throw std::invalid_argument("route must be 'rotated' or 'direct2d'");
}

py::dict integral(const IntegralResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["error_estimate"] = r.error_estimate;
  d["evaluations"] = r.evaluations;
  return d;
}

py::dict estimate(const EstimateWithCI& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["std_error"] = e.std_error;
  d["variance"] = e.variance;
  d["variance_std_error"] = e.variance_std_error;
  d["replicas"] = e.replicas;
  return d;
}

}  // namespace

PYBIND11_MODULE(_gapprobe, m) {
  m.doc() = "Numerical probes of the spectral gap of the sine_2 unlabelled dynamics";
  m.attr("__version__") = kToolkitVersion;

  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

  m.def("eval_u", [](double sigma, double x) { return eval_u(TestFunction(sigma), x); }, py::arg("sigma"), py::arg("x"));
  m.def("eval_du", [](double sigma, double x) { return eval_du(TestFunction(sigma), x); }, py::arg("sigma"), py::arg("x"));
  m.def(
      "linear_statistic",
      [](double sigma, std::vector<double> points, double half_width) {
        return linear_statistic(TestFunction(sigma), Configuration(std::move(points), half_width));
      },
      py::arg("sigma"), py::arg("points"), py::arg("half_width"));

  m.def("eq5", &eq5, py::arg("sigma"));
  m.def("gaussian_cosine_integral", &gaussian_cosine_integral, py::arg("a"), py::arg("b"));
  m.def("term_I", &term_I, py::arg("sigma"));
  m.def("u_l2_norm_sq", &u_l2_norm_sq, py::arg("sigma"));
  m.def("var_lower_bound", &var_lower_bound, py::arg("sigma"));
  m.def("energy_exact", &energy_exact, py::arg("sigma"));
  m.def("energy_upper_bound", &energy_upper_bound, py::arg("sigma"));
  m.def("rayleigh_upper_bound", &rayleigh_upper_bound, py::arg("sigma"));
  m.def("poisson_variance", &poisson_variance, py::arg("sigma"));
  m.def("gap_criterion_ratio", &gap_criterion_ratio, py::arg("sigma"), py::arg("variance"));

  m.def(
      "var_exact_sine",
      [](double sigma, const std::string& route) { return integral(var_exact_sine(sigma, parse_route(route))); },
      py::arg("sigma"), py::arg("route") = "rotated");
  m.def(
      "number_variance_exact", [](double R) { return integral(number_variance_exact(R)); }, py::arg("R"));
  m.def(
      "J_integral", [](double sigma) { return integral(J_integral(sigma)); }, py::arg("sigma"));

  m.def(
      "growth_exponent",
      [](std::vector<double> sigmas, std::vector<double> variances) {
        const PowerLawFit f = growth_exponent(sigmas, variances);
        return py::make_tuple(f.slope, f.intercept, f.r_squared);
      },
      py::arg("sigmas"), py::arg("variances"));

  m.def(
      "sample",
      [](const std::string& process, double L, int n, std::size_t replicas, std::uint64_t seed, unsigned threads) {
        const Process p = parse_process(process);
        const int nodes = (p == Process::sine2 && n <= 0) ? minimum_nodes(L) : n;
        SampleBatch b;
        {
          py::gil_scoped_release release;
          b = sample_batch(p, L, nodes, replicas, seed, threads);
        }
        std::vector<std::vector<double>> out;
        out.reserve(b.configurations.size());
        for (const auto& c : b.configurations) out.emplace_back(c.points().begin(), c.points().end());
        return out;
      },
      py::arg("process"), py::arg("L"), py::arg("n") = 0, py::arg("replicas") = 100, py::arg("seed") = 0,
      py::arg("threads") = 1);

  m.def("drift", [](std::vector<double> state, double beta) { return drift(state, beta); }, py::arg("state"),
        py::arg("beta") = 2.0);
  m.def(
      "simulate_dyson",
      [](int N, double T, double dt, std::uint64_t seed, std::uint64_t replica, double beta) {
        DysonConfig cfg;
        cfg.N = N;
        cfg.T = T;
        cfg.beta = beta;
        cfg.seed = seed;
        cfg.initial = unit_spacing_start(N);
        cfg.dt = dt > 0.0 ? dt : default_time_step(cfg.initial);
        const DysonPath p = simulate(cfg, NoiseOptions{replica, false});
        std::vector<std::vector<double>> states;
        for (std::size_t k = 0; k < p.times.size(); ++k) states.push_back(p.absolute_state(k));
        return py::make_tuple(p.times, states);
      },
      py::arg("N"), py::arg("T"), py::arg("dt") = 0.0, py::arg("seed") = 0, py::arg("replica") = 0,
      py::arg("beta") = 2.0);
  m.def(
      "com_variance",
      [](int N, double T, std::size_t replicas, std::uint64_t seed, double dt) {
        DysonConfig cfg;
        cfg.N = N;
        cfg.T = T;
        cfg.seed = seed;
        cfg.initial = unit_spacing_start(N);
        cfg.dt = dt > 0.0 ? dt : default_time_step(cfg.initial);
        ReplicaSummary s;
        {
          py::gil_scoped_release release;
          s = com_variance_check(cfg, replicas, 1);
        }
        return estimate(s.estimate);
      },
      py::arg("N"), py::arg("T"), py::arg("replicas"), py::arg("seed") = 0, py::arg("dt") = 0.0);

  m.def("verify", [] {
    py::list out;
    for (const Check& c : run_verification()) {
      py::dict d;
      d["name"] = c.name;
      d["closed_form"] = c.closed_form;
      d["quadrature"] = c.quadrature;
      d["rel_error"] = c.rel_error;
      d["passed"] = c.passed;
      out.append(d);
    }
    return out;
  });

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
