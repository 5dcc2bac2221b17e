#include "gapprobe/dyson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "gapprobe/error.hpp"
#include "gapprobe/parallel.hpp"
#include "gapprobe/rng.hpp"

namespace gapprobe {
namespace {

constexpr int kMaxHalvings = 40;
// a capped move stays just under half the nearest gap, so two neighbours
// moving towards each other can never meet
constexpr double kCapFraction = 0.5 * (1.0 - 0x1p-20);

bool strictly_increasing(std::span<const double> x) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) return false;
  }
  return true;
}

double min_gap(std::span<const double> x) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < x.size(); ++i) g = std::min(g, x[i] - x[i - 1]);
  return g;
}

std::string describe_state(double time, std::span<const double> state, double origin) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "t=" << time << " state=[";
  for (std::size_t i = 0; i < state.size(); ++i) msg << (i ? "," : "") << origin + state[i];
  msg << "]";
  return msg.str();
}

class Integrator {
public:
  Integrator(const DysonConfig& cfg, const NoiseOptions& noise, const StepObserver& observer)
      : cfg_(cfg), observer_(observer), n_(static_cast<std::size_t>(cfg.N)) {
    const std::uint64_t replica_seed = derive_seed(cfg.seed, noise.replica);
    streams_.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t source = noise.mirror ? n_ - 1 - i : i;
      streams_.emplace_back(derive_seed(replica_seed, source));
    }
    normals_.assign(n_, std::normal_distribution<double>(0.0, 1.0));
    sign_ = noise.mirror ? -1.0 : 1.0;
    origin_ = 0.5 * (cfg.initial.front() + cfg.initial.back());
    state_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) state_[i] = cfg.initial[i] - origin_;
    if (!strictly_increasing(state_)) {
      throw NumericError(ErrorKind::coincident_particles, "initial state is not strictly increasing in the integration frame");
    }
    min_gap_ = min_gap(state_);
    proposal_.resize(n_);
    displacement_.resize(n_);
    noise_.resize(n_);
  }

  void advance(double h) { attempt(h, 0); }

  double time() const { return time_; }
  double origin() const { return origin_; }
  const std::vector<double>& state() const { return state_; }
  double min_gap_seen() const { return min_gap_; }
  std::int64_t halvings() const { return halvings_; }
  std::int64_t caps() const { return caps_; }

  // land exactly on `t` (used for checkpoints and the final time)
  void snap_time(double t) { time_ = t; }

private:
  void attempt(double h, int depth) {
    const double root = std::sqrt(h);
    for (std::size_t i = 0; i < n_; ++i) noise_[i] = sign_ * root * normals_[i](streams_[i]);
    const std::vector<double> force = drift(state_, cfg_.beta);
    bool capped = false;
    for (std::size_t i = 0; i < n_; ++i) {
      double d = force[i] * h + noise_[i];
      if (cfg_.scheme == DysonScheme::euler_maruyama_capped && n_ > 1) {
        double gap = std::numeric_limits<double>::infinity();
        if (i > 0) gap = std::min(gap, state_[i] - state_[i - 1]);
        if (i + 1 < n_) gap = std::min(gap, state_[i + 1] - state_[i]);
        const double cap = kCapFraction * gap;
        if (std::abs(d) > cap) {
          d = std::copysign(cap, d);
          capped = true;
          ++caps_;
        }
      }
      displacement_[i] = d;
      proposal_[i] = state_[i] + d;
    }
    if (!strictly_increasing(proposal_)) {
      if (cfg_.scheme == DysonScheme::euler_maruyama_capped) {
        throw NumericError(ErrorKind::coincident_particles, "capped step lost ordering to rounding at " +
                                                                describe_state(time_, state_, origin_));
      }
      if (depth >= kMaxHalvings) {
        throw NumericError(ErrorKind::step_floor_reached,
                           "40 halvings could not preserve ordering at " + describe_state(time_, state_, origin_));
      }
      ++halvings_;
      attempt(0.5 * h, depth + 1);
      attempt(0.5 * h, depth + 1);
      return;
    }
    if (observer_) observer_(StepRecord{time_, h, state_, displacement_, noise_, capped});
    state_.swap(proposal_);
    time_ += h;
    if (n_ > 1) min_gap_ = std::min(min_gap_, min_gap(state_));
  }

  const DysonConfig& cfg_;
  const StepObserver& observer_;
  std::size_t n_;
  std::vector<Engine> streams_;
  std::vector<std::normal_distribution<double>> normals_;
  double sign_ = 1.0;
  double origin_ = 0.0;
  double time_ = 0.0;
  std::vector<double> state_, proposal_, displacement_, noise_;
  double min_gap_ = std::numeric_limits<double>::infinity();
  std::int64_t halvings_ = 0;
  std::int64_t caps_ = 0;
};

DysonPath start_path(const Integrator& integ) {
  DysonPath path;
  path.origin = integ.origin();
  path.times.push_back(0.0);
  path.states.push_back(integ.state());
  return path;
}

void finish_path(DysonPath& path, const Integrator& integ) {
  path.min_gap_seen = integ.min_gap_seen();
  path.step_halvings = integ.halvings();
  path.cap_activations = integ.caps();
}

// number of sub-steps of length <= dt covering `span`
std::int64_t steps_for(double span, double dt) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(span / dt - 1e-9)));
}

}  // namespace

void DysonConfig::validate() const {
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  require_positive(beta, "beta");
  require_positive(dt, "dt");
  require_positive(T, "T");
  if (!(dt < T)) throw std::invalid_argument("dt must be smaller than T");
  if (initial.size() != static_cast<std::size_t>(N)) throw std::invalid_argument("initial state must have N entries");
  for (double x : initial) {
    if (!std::isfinite(x)) throw std::invalid_argument("initial state must be finite");
  }
  if (!strictly_increasing(initial)) {
    throw NumericError(ErrorKind::coincident_particles, "initial state must be strictly increasing");
  }
}

std::vector<double> unit_spacing_start(int N) {
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  std::vector<double> x(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) x[i] = (i + 1) - 0.5 * (N + 1);
  return x;
}

double default_time_step(std::span<const double> initial) {
  if (initial.size() < 2) return 1e-3;
  const double g = min_gap(initial);
  if (!(g > 0.0)) throw NumericError(ErrorKind::coincident_particles, "initial state must be strictly increasing");
  return 1e-3 * g * g;
}

std::vector<double> DysonPath::absolute_state(std::size_t k) const {
  std::vector<double> x(states[k].size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = origin + states[k][i];
  return x;
}

std::vector<double> drift(std::span<const double> state, double beta) {
  const std::size_t n = state.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (state[i] == state[i - 1]) {
      throw NumericError(ErrorKind::coincident_particles, "particles " + std::to_string(i - 1) + " and " +
                                                              std::to_string(i) + " coincide");
    }
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t d = 1; d <= i || i + d < n; ++d) {
      const double left = d <= i ? 1.0 / (state[i] - state[i - d]) : 0.0;
      const double right = i + d < n ? 1.0 / (state[i] - state[i + d]) : 0.0;
      sum += left + right;
    }
    out[i] = 0.5 * beta * sum;
  }
  return out;
}

DysonPath simulate(const DysonConfig& cfg, const NoiseOptions& noise, const StepObserver& observer, int record_stride) {
  cfg.validate();
  if (record_stride < 1) throw std::invalid_argument("record_stride must be at least 1");
  Integrator integ(cfg, noise, observer);
  DysonPath path = start_path(integ);
  const std::int64_t steps = steps_for(cfg.T, cfg.dt);
  for (std::int64_t k = 0; k < steps; ++k) {
    const double t_next = (k + 1 == steps) ? cfg.T : static_cast<double>(k + 1) * cfg.dt;
    integ.advance(t_next - integ.time());
    integ.snap_time(t_next);
    if ((k + 1) % record_stride == 0 || k + 1 == steps) {
      path.times.push_back(t_next);
      path.states.push_back(integ.state());
    }
  }
  finish_path(path, integ);
  return path;
}

DysonPath simulate_checkpoints(const DysonConfig& cfg, std::span<const double> checkpoints, const NoiseOptions& noise) {
  cfg.validate();
  Integrator integ(cfg, noise, {});
  DysonPath path;
  path.origin = integ.origin();
  double t = 0.0;
  for (double target : checkpoints) {
    if (target < t) throw std::invalid_argument("checkpoints must be non-decreasing and non-negative");
    if (target > t) {
      const std::int64_t m = steps_for(target - t, cfg.dt);
      const double h = (target - t) / static_cast<double>(m);
      for (std::int64_t k = 0; k < m; ++k) integ.advance(h);
      integ.snap_time(target);
      t = target;
    }
    path.times.push_back(t);
    path.states.push_back(integ.state());
  }
  finish_path(path, integ);
  return path;
}

ReplicaSummary com_variance_check(const DysonConfig& cfg, std::size_t replicas, unsigned threads,
                                  double max_failure_fraction) {
  cfg.validate();
  if (replicas < 100) throw std::invalid_argument("com_variance_check needs at least 100 replicas");
  std::vector<std::optional<double>> com(replicas);
  const double horizon[] = {cfg.T};
  parallel_for(replicas, threads, [&](std::size_t r) {
    try {
      const DysonPath path = simulate_checkpoints(cfg, horizon, NoiseOptions{r, false});
      double s = 0.0;
      for (double x : path.states.back()) s += x;
      com[r] = path.origin + s / cfg.N;
    } catch (const NumericError& e) {
      if (e.kind() != ErrorKind::step_floor_reached) throw;
    }
  });
  std::vector<double> values;
  values.reserve(replicas);
  for (const auto& c : com) {
    if (c) values.push_back(*c);
  }
  ReplicaSummary out;
  out.failures = replicas - values.size();
  if (static_cast<double>(out.failures) > max_failure_fraction * static_cast<double>(replicas)) {
    throw NumericError(ErrorKind::step_floor_reached,
                       std::to_string(out.failures) + " of " + std::to_string(replicas) + " replicas hit the step floor");
  }
  out.estimate = summarize(values);
  return out;
}

std::vector<RelaxationResult> relaxation_probes(const DysonConfig& cfg, std::span<const TestFunction> fs,
                                                std::size_t replicas, std::span<const double> lags, unsigned threads,
                                                double max_failure_fraction) {
  if (fs.empty()) throw std::invalid_argument("relaxation_probe: no test functions");
  if (lags.empty()) throw std::invalid_argument("relaxation_probe: empty lag grid");
  DysonConfig run = cfg;
  run.initial = unit_spacing_start(cfg.N);
  for (double lag : lags) {
    if (!(lag >= 0.0) || lag > cfg.T) throw std::invalid_argument("lags must lie in [0, T]");
  }
  run.T = kBurnIn + cfg.T;
  run.validate();

  std::vector<double> checkpoints{kBurnIn};
  for (double lag : lags) checkpoints.push_back(kBurnIn + lag);
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  auto slot_of = [&](double t) {
    return static_cast<std::size_t>(std::lower_bound(checkpoints.begin(), checkpoints.end(), t) - checkpoints.begin());
  };

  // observables[r][f][checkpoint]
  std::vector<std::optional<std::vector<std::vector<double>>>> observables(replicas);
  parallel_for(replicas, threads, [&](std::size_t r) {
    try {
      const DysonPath path = simulate_checkpoints(run, checkpoints, NoiseOptions{r, false});
      std::vector<std::vector<double>> obs(fs.size(), std::vector<double>(checkpoints.size()));
      for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        const std::vector<double> x = path.absolute_state(k);
        for (std::size_t j = 0; j < fs.size(); ++j) {
          obs[j][k] = linear_statistic_of([&](double p) { return fs[j].value(p); }, x);
        }
      }
      observables[r] = std::move(obs);
    } catch (const NumericError& e) {
      if (e.kind() != ErrorKind::step_floor_reached) throw;
    }
  });

  std::size_t failures = 0;
  for (const auto& o : observables) failures += o ? 0 : 1;
  if (static_cast<double>(failures) > max_failure_fraction * static_cast<double>(replicas)) {
    throw NumericError(ErrorKind::step_floor_reached,
                       std::to_string(failures) + " of " + std::to_string(replicas) + " replicas hit the step floor");
  }

  std::vector<RelaxationResult> results(fs.size());
  const std::size_t base = slot_of(kBurnIn);
  for (std::size_t j = 0; j < fs.size(); ++j) {
    results[j].failures = failures;
    std::vector<double> a, b;
    for (double lag : lags) {
      const std::size_t slot = slot_of(kBurnIn + lag);
      a.clear();
      b.clear();
      for (const auto& o : observables) {
        if (!o) continue;
        a.push_back((*o)[j][base]);
        b.push_back((*o)[j][slot]);
      }
      const CorrelationEstimate c = correlation_jackknife(a, b);
      results[j].points.push_back({lag, c.value, c.std_error});
    }
  }
  return results;
}

RelaxationResult relaxation_probe(const DysonConfig& cfg, const TestFunction& f, std::size_t replicas,
                                  std::span<const double> lags, unsigned threads, double max_failure_fraction) {
  const TestFunction fs[] = {f};
  return relaxation_probes(cfg, fs, replicas, lags, threads, max_failure_fraction).front();
}

}  // namespace gapprobe
