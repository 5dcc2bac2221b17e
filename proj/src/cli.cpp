#include "gapprobe/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "gapprobe/closedform.hpp"
#include "gapprobe/dirichlet.hpp"
#include "gapprobe/dyson.hpp"
#include "gapprobe/error.hpp"
#include "gapprobe/estimators.hpp"
#include "gapprobe/io.hpp"
#include "gapprobe/manifest.hpp"
#include "gapprobe/parallel.hpp"
#include "gapprobe/pointproc.hpp"
#include "gapprobe/svg.hpp"
#include "gapprobe/verification.hpp"

namespace gapprobe {
namespace {

namespace fs = std::filesystem;

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = default_threads();
  std::string out = "gap-probe-out";
  std::optional<double> tol_abs;
  std::optional<double> tol_rel;
  std::string format = "csv";
};

// Thrown for argument combinations CLI11 cannot express.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

QuadratureSpec make_spec(QuadratureSpec base, const Globals& g) {
  if (g.tol_abs) base.abs_tol = *g.tol_abs;
  if (g.tol_rel) base.rel_tol = *g.tol_rel;
  if (!(base.abs_tol > 0.0) || !(base.rel_tol > 0.0)) throw UsageError("tolerances must be positive");
  return base;
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo)) throw UsageError("need 0 < sigma-min < sigma-max");
  if (points < 2) throw UsageError("need at least 2 grid points");
  std::vector<double> g(static_cast<std::size_t>(points));
  // base 2 keeps power-of-two grids exact
  const double octaves = std::log2(hi / lo);
  for (int i = 0; i < points; ++i) g[i] = lo * std::exp2(octaves * i / (points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

// Collects outputs of one command and writes its manifest last.
class Run {
public:
  Run(const Globals& g, std::string command) : g_(g), format_(parse_format(g.format)) {
    manifest_.command = std::move(command);
    manifest_.seed = g.seed;
    manifest_.started = utc_timestamp();
    manifest_.parameters["format"] = g.format;
    manifest_.parameters["threads"] = g.threads;
    if (g.tol_abs) manifest_.parameters["tol_abs"] = *g.tol_abs;
    if (g.tol_rel) manifest_.parameters["tol_rel"] = *g.tol_rel;
    fs::create_directories(g.out);
  }

  void param(const std::string& key, nlohmann::json value) { manifest_.parameters[key] = std::move(value); }

  fs::path path(const std::string& name) const { return fs::path(g_.out) / name; }

  void text(const std::string& name, const std::string& content) {
    const fs::path p = path(name);
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << content;
    record(p);
  }

  void table(const std::string& stem, const Table& t) {
    std::ostringstream s;
    write_table(s, t, format_);
    text(stem + extension(format_), s.str());
  }

  void record(const fs::path& p) { manifest_.outputs.push_back(p.string()); }

  void finish() {
    manifest_.finished = utc_timestamp();
    std::ofstream f(path("manifest.json"), std::ios::binary);
    f << manifest_.serialize();
  }

private:
  const Globals& g_;
  TableFormat format_;
  RunManifest manifest_;
};

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  double tolerance = 1e-9;
  std::string inject_fault;
};

int cmd_verify(const Globals& g, const VerifyArgs& a, std::ostream& out) {
  VerifyOptions opt;
  opt.spec = make_spec(QuadratureSpec{}, g);
  opt.tolerance = a.tolerance;
  if (!a.inject_fault.empty()) opt.inject_fault = a.inject_fault;
  Run run(g, "verify");
  run.param("tolerance", a.tolerance);
  const std::vector<Check> checks = run_verification(opt);

  Table t{{"check", "closed_form", "quadrature", "quadrature_error", "scale", "rel_error", "tolerance", "status"}, {}};
  std::size_t failed = 0;
  char line[256];
  std::snprintf(line, sizeof line, "%-40s %-24s %-24s %-10s %s\n", "check", "closed_form", "quadrature", "rel_error",
                "status");
  out << line;
  for (const auto& c : checks) {
    failed += c.passed ? 0 : 1;
    const char* status = c.passed ? "pass" : "FAIL";
    t.add_row({c.name, c.closed_form, c.quadrature, c.quadrature_error, c.scale, c.rel_error, c.tolerance,
               std::string(c.passed ? "pass" : "fail")});
    std::snprintf(line, sizeof line, "%-40s %-24.17g %-24.17g %-10.2e %s\n", c.name.c_str(), c.closed_form, c.quadrature,
                  c.rel_error, status);
    out << line;
  }
  out << checks.size() - failed << "/" << checks.size() << " checks passed\n";
  run.table("verify", t);
  run.finish();
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

// -------------------------------------------------------------- rayleigh

struct RayleighArgs {
  double sigma_min = 1.0;
  double sigma_max = 1024.0;
  int points = 11;
  std::string mode = "analytic";
  std::size_t replicas = 2000;
  double half_width = 48.0;
  int nodes = 0;
};

int cmd_rayleigh(const Globals& g, const RayleighArgs& a, std::ostream& out, std::ostream& err) {
  const std::vector<double> sigmas = geometric_grid(a.sigma_min, a.sigma_max, a.points);
  SweepMode mode;
  if (a.mode == "analytic") {
    mode = SweepMode::analytic;
  } else if (a.mode == "analytic_plus_mc") {
    mode = SweepMode::analytic_plus_mc;
  } else {
    throw UsageError("--mode must be analytic or analytic_plus_mc");
  }
  const QuadratureSpec spec = make_spec(QuadratureSpec::two_dimensional(), g);
  Run run(g, "rayleigh");
  run.param("sigma_min", a.sigma_min);
  run.param("sigma_max", a.sigma_max);
  run.param("points", a.points);
  run.param("mode", a.mode);
  std::optional<MonteCarloParams> mc;
  if (mode == SweepMode::analytic_plus_mc) {
    mc = MonteCarloParams{a.half_width, a.nodes, a.replicas, g.seed};
    run.param("replicas", a.replicas);
    run.param("L", a.half_width);
    run.param("nodes", a.nodes > 0 ? a.nodes : minimum_nodes(a.half_width));
  }
  const auto rows = rayleigh_sweep(sigmas, mode, mc, spec, g.threads);

  Table t{{"sigma", "var_lb", "var_exact", "var_mc", "var_mc_se", "energy_exact", "energy_ub", "energy_mc", "energy_mc_se",
           "ratio_ub", "ratio_exact"},
          {}};
  PlotSeries ub{"ratio_ub", {}, {}}, ex{"ratio_exact", {}, {}};
  std::size_t failed = 0;
  for (const auto& r : rows) {
    t.add_row({r.sigma, r.var_lb, opt_cell(r.var_exact), r.var_mc ? Cell{r.var_mc->variance} : Cell{},
               r.var_mc ? Cell{r.var_mc->variance_std_error} : Cell{}, r.energy_exact, r.energy_ub,
               r.energy_mc ? Cell{r.energy_mc->mean} : Cell{}, r.energy_mc ? Cell{r.energy_mc->std_error} : Cell{},
               r.ratio_ub, opt_cell(r.ratio_exact)});
    ub.x.push_back(r.sigma);
    ub.y.push_back(r.ratio_ub);
    if (r.ratio_exact) {
      ex.x.push_back(r.sigma);
      ex.y.push_back(*r.ratio_exact);
    }
    if (!r.ok()) {
      ++failed;
      err << "row sigma=" << format_double(r.sigma) << " failed: " << r.failure << "\n";
    }
  }
  run.table("rayleigh", t);
  run.text("rayleigh.svg", render_loglog_svg({"Rayleigh quotient bounds", "sigma", "E/Var", {ub, ex}}));
  run.param("failed_rows", failed);
  run.finish();
  out << rows.size() - failed << "/" << rows.size() << " rows complete; ratio_ub(" << format_double(rows.back().sigma)
      << ") = " << format_double(rows.back().ratio_ub) << "\n";
  return failed == 0 ? kExitOk : kExitPartial;
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
  std::string process = "sine2";
  double half_width = 10.0;
  int nodes = 0;
  std::size_t replicas = 1000;
  std::string output;
};

int cmd_sample(const Globals& g, const SampleArgs& a, std::ostream& out) {
  const Process process = parse_process(a.process);
  require_positive(a.half_width, "L");
  const int nodes = process == Process::sine2 ? (a.nodes > 0 ? a.nodes : minimum_nodes(a.half_width)) : 0;
  Run run(g, "sample");
  run.param("process", a.process);
  run.param("L", a.half_width);
  run.param("n", nodes);
  run.param("replicas", a.replicas);
  const SampleBatch batch = sample_batch(process, a.half_width, nodes, a.replicas, g.seed, g.threads);
  const fs::path file = a.output.empty() ? run.path("samples.jsonl") : fs::path(a.output);
  {
    std::ofstream f(file, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + file.string());
    write_jsonl(f, batch);
  }
  run.record(file);
  const EstimateWithCI counts = count_statistics(batch, a.half_width);
  out << "process " << a.process << " L " << format_double(a.half_width) << " n " << nodes << " replicas " << a.replicas
      << "\n";
  out << "mean_count " << format_double(counts.mean) << " se " << format_double(counts.std_error) << "\n";
  out << "count_variance " << format_double(counts.variance) << " se " << format_double(counts.variance_std_error)
      << "\n";
  run.finish();
  return kExitOk;
}

// -------------------------------------------------------- hyperuniformity

struct HyperArgs {
  std::vector<double> sigmas{2.0, 4.0, 8.0, 16.0};
  std::vector<double> radii{1.0, 2.0, 5.0, 10.0};
  std::size_t replicas = 0;
  double half_width = 48.0;
};

int cmd_hyperuniformity(const Globals& g, const HyperArgs& a, std::ostream& out, std::ostream& err) {
  if (a.sigmas.size() < 3) throw UsageError("--sigmas needs at least 3 values for a growth fit");
  for (std::size_t i = 0; i < a.sigmas.size(); ++i) {
    if (!(a.sigmas[i] > 0.0) || (i > 0 && !(a.sigmas[i] > a.sigmas[i - 1]))) {
      throw UsageError("--sigmas must be positive and increasing");
    }
  }
  for (double r : a.radii) {
    if (!(r > 0.0)) throw UsageError("--radii must be positive");
  }
  const QuadratureSpec spec = make_spec(QuadratureSpec::two_dimensional(), g);
  Run run(g, "hyperuniformity");
  run.param("sigmas", a.sigmas);
  run.param("radii", a.radii);
  run.param("replicas", a.replicas);
  run.param("L", a.half_width);

  std::optional<SampleBatch> sine_batch, poisson_batch;
  if (a.replicas > 0) {
    sine_batch = sample_batch(Process::sine2, a.half_width, minimum_nodes(a.half_width), a.replicas, g.seed, g.threads);
    const double poisson_L = kGaussianCutoff * a.sigmas.back();
    poisson_batch = sample_batch(Process::poisson, poisson_L, 0, a.replicas, g.seed, g.threads);
    run.param("poisson_L", poisson_L);
  }

  const std::size_t m = a.sigmas.size();
  std::vector<std::optional<IntegralResult>> quad(m);
  std::vector<std::string> failures(m);
  parallel_for(m, g.threads, [&](std::size_t i) {
    try {
      quad[i] = var_exact_sine(a.sigmas[i], VarianceRoute::rotated, spec);
    } catch (const NumericError& e) {
      failures[i] = e.what();
    }
  });

  Table t{{"sigma", "var_sine_quad", "var_sine_quad_err", "var_sine_mc", "var_sine_mc_se", "var_poisson",
           "var_poisson_mc", "var_poisson_mc_se", "criterion_sine", "criterion_poisson"},
          {}};
  std::vector<double> ok_sigma, ok_var, poisson_var, mc_sigma, mc_sine, mc_poisson;
  PlotSeries s_quad{"sine2 (quadrature)", {}, {}}, s_pois{"Poisson", {}, {}}, s_mc{"sine2 (MC)", {}, {}};
  std::size_t failed = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double s = a.sigmas[i];
    const TestFunction f(s);
    const double pv = poisson_variance(s);
    std::optional<EstimateWithCI> sine_mc, pois_mc;
    if (sine_batch && sine_batch->half_width >= kGaussianCutoff * s) sine_mc = empirical_variance(f, *sine_batch);
    if (poisson_batch) pois_mc = empirical_variance(f, *poisson_batch);
    if (!quad[i]) {
      ++failed;
      err << "sigma=" << format_double(s) << " failed: " << failures[i] << "\n";
    }
    t.add_row({s, quad[i] ? Cell{quad[i]->value} : Cell{}, quad[i] ? Cell{quad[i]->error_estimate} : Cell{},
               sine_mc ? Cell{sine_mc->variance} : Cell{}, sine_mc ? Cell{sine_mc->variance_std_error} : Cell{}, pv,
               pois_mc ? Cell{pois_mc->variance} : Cell{}, pois_mc ? Cell{pois_mc->variance_std_error} : Cell{},
               quad[i] ? Cell{gap_criterion_ratio(s, quad[i]->value)} : Cell{}, gap_criterion_ratio(s, pv)});
    poisson_var.push_back(pv);
    s_pois.x.push_back(s);
    s_pois.y.push_back(pv);
    if (quad[i]) {
      ok_sigma.push_back(s);
      ok_var.push_back(quad[i]->value);
      s_quad.x.push_back(s);
      s_quad.y.push_back(quad[i]->value);
    }
    if (sine_mc) {
      mc_sigma.push_back(s);
      mc_sine.push_back(sine_mc->variance);
      s_mc.x.push_back(s);
      s_mc.y.push_back(sine_mc->variance);
    }
    if (pois_mc) mc_poisson.push_back(pois_mc->variance);
  }
  run.table("hyperuniformity", t);

  Table fits{{"series", "slope", "intercept", "r_squared", "points"}, {}};
  auto add_fit = [&](const std::string& name, const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 3) return;
    const PowerLawFit fit = growth_exponent(x, y);
    fits.add_row({name, fit.slope, fit.intercept, fit.r_squared, static_cast<double>(x.size())});
    out << "growth exponent " << name << " " << fmt("%.6f", fit.slope) << "\n";
  };
  add_fit("sine2_quadrature", ok_sigma, ok_var);
  add_fit("poisson_analytic", a.sigmas, poisson_var);
  add_fit("sine2_mc", mc_sigma, mc_sine);
  if (poisson_batch) add_fit("poisson_mc", a.sigmas, mc_poisson);
  run.table("exponents", fits);

  if (!a.radii.empty()) {
    Table nv{{"R", "count_var_sine_exact", "count_var_sine_err", "count_var_sine_mc", "count_var_sine_mc_se",
              "count_var_poisson"},
             {}};
    for (double R : a.radii) {
      std::optional<IntegralResult> exact;
      try {
        exact = number_variance_exact(R, spec);
      } catch (const NumericError& e) {
        ++failed;
        err << "R=" << format_double(R) << " failed: " << e.what() << "\n";
      }
      std::optional<EstimateWithCI> mc;
      if (sine_batch && R <= sine_batch->half_width) mc = count_statistics(*sine_batch, R);
      nv.add_row({R, exact ? Cell{exact->value} : Cell{}, exact ? Cell{exact->error_estimate} : Cell{},
                  mc ? Cell{mc->variance} : Cell{}, mc ? Cell{mc->variance_std_error} : Cell{}, 2.0 * R});
    }
    run.table("number_variance", nv);
  }

  std::vector<PlotSeries> series{s_quad, s_pois};
  if (!s_mc.x.empty()) series.push_back(s_mc);
  run.text("hyperuniformity.svg", render_loglog_svg({"Variance growth of u_sigma*", "sigma", "Var", series}));
  run.finish();
  return failed == 0 ? kExitOk : kExitPartial;
}

// ----------------------------------------------------------------- dyson

struct DysonArgs {
  int N = 4;
  double beta = 2.0;
  double T = 1.0;
  double dt = 0.0;
  std::string scheme = "capped";
  std::size_t replicas = 1000;
  bool com_check = false;
  std::vector<double> probe_sigmas;
  int lag_points = 9;
  bool record_path = false;
};

int cmd_dyson(const Globals& g, const DysonArgs& a, std::ostream& out) {
  DysonConfig cfg;
  cfg.N = a.N;
  cfg.beta = a.beta;
  cfg.T = a.T;
  cfg.seed = g.seed;
  if (a.scheme == "capped") {
    cfg.scheme = DysonScheme::euler_maruyama_capped;
  } else if (a.scheme == "halving") {
    cfg.scheme = DysonScheme::adaptive_halving;
  } else {
    throw UsageError("--scheme must be capped or halving");
  }
  if (a.N < 1) throw UsageError("--N must be at least 1");
  cfg.initial = unit_spacing_start(a.N);
  cfg.dt = a.dt > 0.0 ? a.dt : default_time_step(cfg.initial);
  cfg.validate();
  if (!a.com_check && a.probe_sigmas.empty() && !a.record_path) {
    throw UsageError("nothing to do: pass --com-check, --probe-sigma or --record-path");
  }

  Run run(g, "dyson");
  run.param("N", a.N);
  run.param("beta", a.beta);
  run.param("T", a.T);
  run.param("dt", cfg.dt);
  run.param("scheme", a.scheme);
  run.param("replicas", a.replicas);
  constexpr double kMaxFailureFraction = 0.01;

  if (a.record_path) {
    const DysonPath path = simulate(cfg, NoiseOptions{}, {}, std::max(1, static_cast<int>(std::lround(0.01 / cfg.dt))));
    Table t{{"t"}, {}};
    for (int i = 0; i < a.N; ++i) t.columns.push_back("x" + std::to_string(i));
    for (std::size_t k = 0; k < path.times.size(); ++k) {
      std::vector<Cell> row{path.times[k]};
      for (double x : path.absolute_state(k)) row.emplace_back(x);
      t.add_row(std::move(row));
    }
    run.table("path", t);
    out << "path: " << path.times.size() << " records, min gap " << format_double(path.min_gap_seen) << "\n";
  }

  if (a.com_check) {
    const ReplicaSummary s = com_variance_check(cfg, a.replicas, g.threads, kMaxFailureFraction);
    const double expected = cfg.T / cfg.N;
    Table t{{"N", "T", "dt", "replicas", "failures", "com_variance", "com_variance_se", "expected"}, {}};
    t.add_row({static_cast<double>(cfg.N), cfg.T, cfg.dt, static_cast<double>(a.replicas), static_cast<double>(s.failures),
               s.estimate.variance, s.estimate.variance_std_error, expected});
    run.table("com", t);
    out << "com_variance " << format_double(s.estimate.variance) << " ci95 [" << format_double(s.estimate.variance - 1.96 * s.estimate.variance_std_error)
        << ", " << format_double(s.estimate.variance + 1.96 * s.estimate.variance_std_error) << "] expected "
        << format_double(expected) << "\n";
  }

  if (!a.probe_sigmas.empty()) {
    if (a.lag_points < 2) throw UsageError("--lag-points must be at least 2");
    std::vector<double> lags(static_cast<std::size_t>(a.lag_points));
    for (int k = 0; k < a.lag_points; ++k) lags[k] = cfg.T * k / (a.lag_points - 1);
    std::vector<TestFunction> fs;
    for (double s : a.probe_sigmas) fs.emplace_back(s);
    run.param("probe_sigmas", a.probe_sigmas);
    run.param("burn_in", kBurnIn);
    const auto results = relaxation_probes(cfg, fs, a.replicas, lags, g.threads, kMaxFailureFraction);
    Table t{{"sigma", "lag", "autocorrelation", "std_error"}, {}};
    for (std::size_t j = 0; j < fs.size(); ++j) {
      for (const auto& p : results[j].points) t.add_row({a.probe_sigmas[j], p.lag, p.value, p.std_error});
      out << "sigma " << format_double(a.probe_sigmas[j]) << ": autocorrelation at lag " << format_double(results[j].points.back().lag)
          << " = " << format_double(results[j].points.back().value) << "\n";
    }
    run.table("autocorrelation", t);
  }
  run.finish();
  return kExitOk;
}

int exit_code_for(const NumericError& e) {
  switch (e.kind()) {
    case ErrorKind::step_floor_reached:
    case ErrorKind::coincident_particles:
      return kExitSimulation;
    default:
      return kExitNumerical;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical probes of the spectral gap of the sine_2 unlabelled dynamics", "gap-probe"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Base seed for every random stream")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (results do not depend on it)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--tol-abs", g.tol_abs, "Absolute quadrature tolerance override");
  app.add_option("--tol-rel", g.tol_rel, "Relative quadrature tolerance override");
  app.add_option("--format", g.format, "Table format")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check every closed form against independent quadrature");
  verify->add_option("--tolerance", va.tolerance, "Allowed relative discrepancy")->capture_default_str();
  verify->add_option("--inject-fault", va.inject_fault, "Perturb closed forms whose check name has this prefix")
      ->group("");

  RayleighArgs ra;
  auto* rayleigh = app.add_subcommand("rayleigh", "Sweep sigma and tabulate Rayleigh-quotient bounds");
  rayleigh->add_option("--sigma-min", ra.sigma_min, "Smallest sigma")->capture_default_str();
  rayleigh->add_option("--sigma-max", ra.sigma_max, "Largest sigma")->capture_default_str();
  rayleigh->add_option("--points", ra.points, "Geometric grid size (>= 2)")->capture_default_str();
  rayleigh->add_option("--mode", ra.mode, "analytic or analytic_plus_mc")->capture_default_str();
  rayleigh->add_option("--replicas", ra.replicas, "Monte Carlo replicas")->capture_default_str();
  rayleigh->add_option("--L", ra.half_width, "Monte Carlo window half-width")->capture_default_str();
  rayleigh->add_option("--nodes", ra.nodes, "Nystrom nodes (0: ceil(8L))")->capture_default_str();

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Sample configurations in [-L, L] as JSON lines");
  sample->add_option("--process", sa.process, "sine2 or poisson")->capture_default_str();
  sample->add_option("--L", sa.half_width, "Window half-width")->capture_default_str();
  sample->add_option("--n", sa.nodes, "Nystrom nodes for sine2 (0: ceil(8L))")->capture_default_str();
  sample->add_option("--replicas", sa.replicas, "Number of configurations")->capture_default_str();
  sample->add_option("--output", sa.output, "Output file (default <out>/samples.jsonl)");

  HyperArgs ha;
  auto* hyper = app.add_subcommand("hyperuniformity", "Compare variance growth of sine_2 and Poisson");
  hyper->add_option("--sigmas", ha.sigmas, "Increasing sigma grid (>= 3 values)")->capture_default_str()->delimiter(',');
  hyper->add_option("--radii", ha.radii, "Radii for the count variance table")->capture_default_str()->delimiter(',');
  hyper->add_option("--replicas", ha.replicas, "Monte Carlo replicas (0 disables Monte Carlo)")->capture_default_str();
  hyper->add_option("--L", ha.half_width, "sine_2 Monte Carlo window half-width")->capture_default_str();

  DysonArgs da;
  auto* dyson = app.add_subcommand("dyson", "Simulate finite-N Dyson Brownian motion");
  dyson->add_option("--N", da.N, "Number of particles")->capture_default_str();
  dyson->add_option("--beta", da.beta, "Inverse temperature")->capture_default_str();
  dyson->add_option("--T", da.T, "Time horizon (lag range for probes)")->capture_default_str();
  dyson->add_option("--dt", da.dt, "Base step (0: 1e-3 times the squared initial gap)")->capture_default_str();
  dyson->add_option("--scheme", da.scheme, "capped or halving")->capture_default_str();
  dyson->add_option("--replicas", da.replicas, "Independent replicas")->capture_default_str();
  dyson->add_flag("--com-check", da.com_check, "Estimate the centre-of-mass variance at T");
  dyson->add_option("--probe-sigma", da.probe_sigmas, "Test-function widths for relaxation probes")->delimiter(',');
  dyson->add_option("--lag-points", da.lag_points, "Equally spaced lags in [0, T]")->capture_default_str();
  dyson->add_flag("--record-path", da.record_path, "Write one trajectory sampled every 0.01 time units");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(g, va, out);
    if (rayleigh->parsed()) return cmd_rayleigh(g, ra, out, err);
    if (sample->parsed()) return cmd_sample(g, sa, out);
    if (hyper->parsed()) return cmd_hyperuniformity(g, ha, out, err);
    if (dyson->parsed()) return cmd_dyson(g, da, out);
  } catch (const NumericError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace gapprobe
