// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Optional arguments select criteria by number, e.g. `acceptance_tests 3 7`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gapprobe/cli.hpp"
#include "gapprobe/closedform.hpp"
#include "gapprobe/dirichlet.hpp"
#include "gapprobe/dyson.hpp"
#include "gapprobe/estimators.hpp"
#include "gapprobe/manifest.hpp"
#include "gapprobe/parallel.hpp"
#include "gapprobe/pointproc.hpp"
#include "gapprobe/quadrature.hpp"
#include "gapprobe/verification.hpp"

using namespace gapprobe;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

// Accumulates the sub-checks of one criterion.
struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("FAILED " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string f(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

unsigned threads() { return default_threads(); }

// |x - target| within k standard errors
bool within(double x, double target, double se, double k = 3.0) { return std::abs(x - target) <= k * se; }

// -------------------------------------------------------------------- 1
void closed_form_suite(Outcome& o) {
  const std::vector<Check> checks = run_verification({});
  double worst = 0.0;
  for (const auto& c : checks) {
    o.expect(c.rel_error <= 1e-9, c.name + f(" rel error %.3g", c.rel_error));
    worst = std::max(worst, c.rel_error);
  }
  o.note(f("%.0f checks, worst rel error %.2e", static_cast<double>(checks.size()), worst));
}

// -------------------------------------------------------------------- 2
void sinc_constants(Outcome& o) {
  const IntegralResult a =
      integrate_1d({[](double u) { return pi * pi * sinc_squared(1.0, u); }, Tail::periodic_inverse_square, pi, 0.5});
  const IntegralResult b = integrate_1d({[](double u) { return sinc_squared(std::numbers::sqrt2 * pi, u); },
                                         Tail::periodic_inverse_square, 1.0 / std::numbers::sqrt2, 0.25});
  const double ea = std::abs(a.value - pi) / pi, eb = std::abs(b.value - std::numbers::sqrt2) / std::numbers::sqrt2;
  o.expect(ea <= 1e-9, f("int sin^2 u/u^2 = %.17g", a.value));
  o.expect(eb <= 1e-9, f("int sin^2(sqrt2 pi u)/(pi^2 u^2) = %.17g", b.value));
  o.note(f("rel errors %.2e, %.2e", ea, eb));
}

// -------------------------------------------------------------------- 3
void variance_bound(Outcome& o) {
  double worst = 0.0;
  for (double s : verification_sigmas()) {
    const VarianceCrossCheck v = var_exact_sine_checked(s);
    const double lb = var_lower_bound(s);
    o.expect(v.rotated.value >= lb && v.direct2d.value >= lb, f("var_exact(%g) >= var_lb", s));
    const double rel = v.discrepancy / std::abs(v.rotated.value);
    o.expect(rel <= 1e-6, f("routes agree at sigma=%g (rel %.2e)", s, rel));
    worst = std::max(worst, rel);
  }
  o.note(f("worst route discrepancy %.2e", worst));
}

// -------------------------------------------------------------------- 4
void rayleigh_decay(Outcome& o) {
  std::vector<double> s, r;
  for (double x = 1.0; x <= 1024.0; x *= 2.0) {
    s.push_back(x);
    r.push_back(energy_upper_bound(x) / var_lower_bound(x));
  }
  for (std::size_t i = 1; i < r.size(); ++i) o.expect(r[i] < r[i - 1], f("strict decrease at sigma=%g", s[i]));
  const PowerLawFit fit = growth_exponent(s, r);
  o.expect(std::abs(fit.slope + 1.0) <= 1e-3, f("slope %.6f", fit.slope));
  o.expect(r.back() < 0.04, f("ratio(1024) = %.6f", r.back()));
  o.note(f("slope %.9f, ratio(1024) %.6f", fit.slope, r.back()));
}

// -------------------------------------------------------------------- 5
void poisson_remark(Outcome& o) {
  const std::vector<double> sigmas{1.0, 2.0, 4.0, 8.0};
  std::vector<double> analytic, mc;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    const double s = sigmas[i];
    analytic.push_back(poisson_variance(s));
    const SampleBatch b = sample_batch(Process::poisson, kGaussianCutoff * s, 0, 10000, 500 + i, threads());
    const EstimateWithCI v = empirical_variance(TestFunction(s), b);
    mc.push_back(v.variance);
    if (s <= 2.0) {
      o.expect(within(v.variance, analytic.back(), v.variance_std_error),
               f("sigma=%g: MC %.6g vs %.6g (se %.3g)", s, v.variance, analytic.back(), v.variance_std_error));
    }
    o.note(f("sigma=%g MC %.5g analytic %.5g se %.3g", s, v.variance, analytic.back(), v.variance_std_error));
  }
  const PowerLawFit exact = growth_exponent(sigmas, analytic);
  const PowerLawFit noisy = growth_exponent(sigmas, mc);
  o.expect(std::abs(exact.slope - 3.0) <= 1e-12, f("analytic exponent %.15f", exact.slope));
  o.expect(std::abs(noisy.slope - 3.0) <= 0.1, f("MC exponent %.4f", noisy.slope));
  o.note(f("exponents: analytic %.15f, MC %.4f", exact.slope, noisy.slope));
}

// -------------------------------------------------------------------- 6
void sampler_calibration(Outcome& o) {
  const double L = 15.0;
  const DiscretizedKernel k = nystrom_discretize(L, 512);
  const SampleBatch b = sample_batch(k, 10000, 600, threads());
  const EstimateWithCI all = count_statistics(b, L);
  o.expect(within(all.mean, 2.0 * L, all.std_error), f("mean count %.6f vs %g (se %.3g)", all.mean, 2.0 * L, all.std_error));
  const EstimateWithCI five = count_statistics(b, 5.0);
  const double nv = number_variance_exact(5.0).value;
  o.expect(within(five.variance, nv, five.variance_std_error),
           f("count variance on [-5,5] %.6f vs %.6f (se %.3g)", five.variance, nv, five.variance_std_error));
  const EstimateWithCI u = empirical_variance(TestFunction(1.0), b);
  const double ve = var_exact_sine(1.0, VarianceRoute::rotated).value;
  o.expect(within(u.variance, ve, u.variance_std_error),
           f("Var(u_1*) %.6f vs %.6f (se %.3g)", u.variance, ve, u.variance_std_error));
  o.note(f("mean count %.4f, count var %.4f (exact %.4f), Var(u_1*) %.4f", all.mean, five.variance, nv, u.variance));
}

// -------------------------------------------------------------------- 7
void hyperuniformity(Outcome& o) {
  const std::vector<double> sigmas{2.0, 4.0, 8.0, 16.0};
  std::vector<double> sine, poisson;
  for (double s : sigmas) {
    sine.push_back(var_exact_sine(s, VarianceRoute::rotated).value);
    poisson.push_back(poisson_variance(s));
  }
  const double es = growth_exponent(sigmas, sine).slope, ep = growth_exponent(sigmas, poisson).slope;
  o.expect(es >= 1.8 && es <= 2.2, f("sine2 exponent %.6f", es));
  o.expect(std::abs(ep - 3.0) <= 1e-6, f("Poisson exponent %.9f", ep));
  for (std::size_t i = 1; i < sigmas.size(); ++i) {
    o.expect(gap_criterion_ratio(sigmas[i], sine[i]) < gap_criterion_ratio(sigmas[i - 1], sine[i - 1]),
             f("sine2 criterion decreasing at %g", sigmas[i]));
    o.expect(gap_criterion_ratio(sigmas[i], poisson[i]) < gap_criterion_ratio(sigmas[i - 1], poisson[i - 1]),
             f("Poisson criterion decreasing at %g", sigmas[i]));
  }
  o.note(f("exponents: sine2 %.6f, Poisson %.9f", es, ep));
}

// -------------------------------------------------------------------- 8
double directional(const CylinderFunction& U, const std::vector<double>& grad, double x) {
  double s = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) s += grad[i] * base_derivative(U.bases()[i], x);
  return s;
}

void dirichlet_suite(Outcome& o) {
  const struct {
    double sigma, L;
  } cases[] = {{1.0, 15.0}, {2.0, 24.0}};
  std::size_t configs = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    const double s = cases[c].sigma;
    const SampleBatch b = sample_batch(Process::sine2, cases[c].L, minimum_nodes(cases[c].L), 10000, 800 + c, threads());
    const TestFunction fn(s);
    const CylinderFunction U = CylinderFunction::linear_statistic(fn);
    bool exact = true;
    for (const auto& cfg : b.configurations) {
      double direct = 0.0;
      for (double x : cfg.points()) direct += fn.derivative(x) * fn.derivative(x);
      const double ulp = std::nextafter(direct, INFINITY) - direct;
      exact = exact && std::abs(square_field_config(U, cfg) - direct) <= static_cast<double>(cfg.size()) * ulp;
      ++configs;
    }
    o.expect(exact, f("square field equals sum of (u')^2 for sigma=%g", s));
    const EstimateWithCI e = mc_dirichlet_energy(U, b);
    o.expect(within(e.mean, energy_exact(s), e.std_error),
             f("sigma=%g: MC energy %.6f vs %.6f (se %.3g)", s, e.mean, energy_exact(s), e.std_error));
    o.note(f("sigma=%g MC energy %.5f exact %.5f se %.3g", s, e.mean, energy_exact(s), e.std_error));
  }

  // polarization on random cylinder functions over sampled configurations
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> w(0.3, 3.0), ctr(-5.0, 5.0), coef(-1.5, 1.5);
  auto random_cylinder = [&] {
    std::vector<BaseFunction> bases{TestFunction(w(rng)), GaussianBump{ctr(rng), w(rng)}};
    std::vector<double> cf{coef(rng), coef(rng)};
    return (rng() % 2) ? CylinderFunction(bases, OuterMap::tanh_of_linear(cf))
                       : CylinderFunction(bases, OuterMap::sin_of_linear(cf));
  };
  const SampleBatch b = sample_batch(Process::sine2, 10.0, minimum_nodes(10.0), 200, 890, threads());
  double worst = 0.0;
  for (const auto& cfg : b.configurations) {
    const CylinderFunction U = random_cylinder(), V = random_cylinder();
    std::vector<double> gu(2), gv(2);
    U.outer().gradient(U.statistics(cfg), gu);
    V.outer().gradient(V.statistics(cfg), gv);
    double cross = 0.0;
    for (double x : cfg.points()) cross += directional(U, gu, x) * directional(V, gv, x);
    const double polar = (square_field_config(U + V, cfg) - square_field_config(U - V, cfg)) / 4.0;
    const double scale = square_field_config(U, cfg) + square_field_config(V, cfg) + 1e-300;
    worst = std::max(worst, std::abs(polar - cross) / scale);
  }
  o.expect(worst <= 1e-12, f("polarization residual %.2e", worst));
  o.note(f("%.0f configurations checked, polarization residual %.2e", static_cast<double>(configs), worst));
}

// -------------------------------------------------------------------- 9
void dyson_suite(Outcome& o) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> gap(0.2, 2.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + t % 127;
    std::vector<double> x(static_cast<std::size_t>(n));
    double p = 0.0;
    for (double& v : x) v = p += gap(rng);
    double sum = 0.0;
    for (double d : drift(x, 2.0)) sum += d;
    worst = std::max(worst, std::abs(sum));
  }
  o.expect(worst <= 1e-12, f("drift sum %.2e", worst));
  o.note(f("max |sum of drifts| %.2e", worst));

  for (int N : {1, 4, 16}) {
    DysonConfig cfg;
    cfg.N = N;
    cfg.T = 1.0;
    cfg.initial = unit_spacing_start(N);
    cfg.dt = default_time_step(cfg.initial);
    cfg.seed = 900 + static_cast<std::uint64_t>(N);
    const ReplicaSummary r = com_variance_check(cfg, 10000, threads());
    const double expect = 1.0 / N;
    o.expect(within(r.estimate.variance, expect, r.estimate.variance_std_error),
             f("N=%g: COM variance %.5f vs %.5f (se %.3g)", N, r.estimate.variance, expect, r.estimate.variance_std_error));
    o.note(f("N=%g COM variance %.5f expected %.5f se %.3g", N, r.estimate.variance, expect, r.estimate.variance_std_error));
  }

  std::size_t ordered = 0;
  const std::size_t runs = 1000;
  for (std::size_t r = 0; r < runs; ++r) {
    DysonConfig cfg;
    cfg.N = 8;
    cfg.T = 1.0;
    cfg.initial = unit_spacing_start(8);
    cfg.dt = 5e-3;
    cfg.seed = 950;
    cfg.scheme = (r % 2) ? DysonScheme::adaptive_halving : DysonScheme::euler_maruyama_capped;
    bool ok = true;
    (void)simulate(cfg, {r, false}, [&](const StepRecord& s) {
      for (std::size_t i = 1; i < s.state_before.size(); ++i) ok = ok && s.state_before[i] > s.state_before[i - 1];
    }, 1 << 30);
    const DysonPath p = simulate_checkpoints(cfg, std::vector<double>{1.0}, {r, false});
    for (std::size_t i = 1; i < 8; ++i) ok = ok && p.states[0][i] > p.states[0][i - 1];
    ordered += ok ? 1 : 0;
  }
  o.expect(ordered == runs, f("ordered runs %.0f of %.0f", static_cast<double>(ordered), static_cast<double>(runs)));

  bool translation = true, mirror = true;
  for (std::uint64_t r = 0; r < 20; ++r) {
    DysonConfig cfg;
    cfg.N = 7;
    cfg.T = 0.5;
    cfg.initial = {-3.0, -1.5, -0.25, 0.5, 1.0, 2.75, 4.0};
    cfg.dt = 2e-3;
    cfg.seed = 970;
    const DysonPath a = simulate(cfg, {r, false});
    DysonConfig moved = cfg;
    for (double& x : moved.initial) x += 12.5;
    const DysonPath b = simulate(moved, {r, false});
    translation = translation && b.states == a.states && b.origin == a.origin + 12.5;
    DysonConfig flipped = cfg;
    flipped.initial.assign(cfg.initial.rbegin(), cfg.initial.rend());
    for (double& x : flipped.initial) x = -x;
    const DysonPath m = simulate(flipped, {r, true});
    bool same = m.origin == -a.origin;
    for (std::size_t k = 0; k < a.states.size(); ++k) {
      for (std::size_t i = 0; i < 7; ++i) same = same && m.states[k][i] == -a.states[k][6 - i];
    }
    mirror = mirror && same;
  }
  o.expect(translation, "translation equivariance exact");
  o.expect(mirror, "mirror symmetry exact");
  o.note(f("ordering %.0f/%.0f runs; translation and mirror checked on 20 seeds", static_cast<double>(ordered),
           static_cast<double>(runs)));
}

// ------------------------------------------------------------------- 10
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// data files (everything but the manifest, which carries timestamps) and stdout
std::string fingerprint(const std::vector<std::string>& args, const fs::path& dir, int& code) {
  fs::remove_all(dir);
  std::vector<std::string> full{"--out", dir.string()};
  full.insert(full.end(), args.begin(), args.end());
  std::ostringstream out, err;
  code = run_cli(full, out, err);
  std::string fp = "stdout:" + out.str();
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    if (p.filename() == "manifest.json") continue;
    fp += "\n" + p.filename().string() + ":" + slurp(p);
  }
  return fp;
}

void determinism(Outcome& o) {
  const std::vector<std::vector<std::string>> commands{
      {"--seed", "7", "sample", "--process", "sine2", "--L", "8", "--replicas", "300"},
      {"--seed", "7", "sample", "--process", "poisson", "--L", "8", "--replicas", "300"},
      {"--seed", "3", "rayleigh", "--sigma-min", "1", "--sigma-max", "2", "--points", "2", "--mode",
       "analytic_plus_mc", "--replicas", "300", "--L", "24"},
      {"--seed", "5", "hyperuniformity", "--sigmas", "1,2,4", "--radii", "1,2", "--replicas", "200", "--L", "24"},
      {"--seed", "11", "dyson", "--N", "4", "--T", "0.5", "--dt", "0.005", "--replicas", "200", "--com-check",
       "--probe-sigma", "1,2", "--lag-points", "3", "--record-path"},
      {"--seed", "11", "--format", "json", "dyson", "--N", "3", "--T", "0.25", "--dt", "0.005", "--replicas", "150",
       "--com-check"},
  };
  const fs::path root = fs::path("acceptance_determinism");
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::vector<std::string> fps;
    for (const char* th : {"1", "1", "3"}) {
      std::vector<std::string> args{"--threads", th};
      args.insert(args.end(), commands[c].begin(), commands[c].end());
      int code = -1;
      fps.push_back(fingerprint(args, root / ("run" + std::to_string(fps.size())), code));
      o.expect(code == 0, "command " + std::to_string(c) + " exit code " + std::to_string(code));
    }
    o.expect(fps[0] == fps[1], "command " + std::to_string(c) + " reproducible across runs");
    o.expect(fps[0] == fps[2], "command " + std::to_string(c) + " identical for 1 and 3 threads");
  }
  o.note(f("%.0f commands x 3 runs compared byte for byte", static_cast<double>(commands.size())));
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "closed forms agree with independent quadrature", 10, closed_form_suite},
      {2, "sinc-squared constants", 10, sinc_constants},
      {3, "exact variance dominates the lower bound; routes agree", 60, variance_bound},
      {4, "Rayleigh bound decays like 1/sigma", 5, rayleigh_decay},
      {5, "Poisson variance and growth exponent", 120, poisson_remark},
      {6, "sine2 sampler calibration", 600, sampler_calibration},
      {7, "hyperuniformity contrast", 120, hyperuniformity},
      {8, "square field, Dirichlet energy, polarization", 300, dirichlet_suite},
      {9, "Dyson structural suite", 600, dyson_suite},
      {10, "determinism across runs and thread counts", 600, determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.expect(secs < c.budget_seconds, f("runtime %.1fs over budget %.0fs", secs, c.budget_seconds));
    std::printf("%s criterion %d: %s (%.2fs)\n", o.ok ? "PASS" : "FAIL", c.id, c.title, secs);
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    failures += o.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
