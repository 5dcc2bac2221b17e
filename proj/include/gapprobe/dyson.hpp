#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gapprobe/estimators.hpp"
#include "gapprobe/testfn.hpp"

namespace gapprobe {

enum class DysonScheme { euler_maruyama_capped, adaptive_halving };

// Finite-N truncation of dX^i = (beta/2) sum_{j != i} dt / (X^i - X^j) + dB^i.
struct DysonConfig {
  int N = 1;
  double beta = 2.0;
  double dt = 1e-3;
  double T = 1.0;
  DysonScheme scheme = DysonScheme::euler_maruyama_capped;
  std::vector<double> initial;  // strictly increasing, size N
  std::uint64_t seed = 0;

  void validate() const;
};

// x_i = i - (N+1)/2 for i = 1..N: unit spacing, matching intensity 1.
std::vector<double> unit_spacing_start(int N);

// 1e-3 * (smallest initial gap)^2; 1e-3 for a single particle.
double default_time_step(std::span<const double> initial);

// States are stored relative to `origin`, the midpoint of the initial
// configuration; position(k, i) = origin + states[k][i]. Integrating in this
// frame makes translations of the start exact.
struct DysonPath {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  double origin = 0.0;
  double min_gap_seen = 0.0;
  std::int64_t step_halvings = 0;
  std::int64_t cap_activations = 0;

  double position(std::size_t k, std::size_t i) const { return origin + states[k][i]; }
  std::vector<double> absolute_state(std::size_t k) const;
};

// (beta/2) sum_{j != i} 1/(x_i - x_j). Terms are paired by distance
// (i-d, i+d) so a mirrored state yields the exactly negated drift.
std::vector<double> drift(std::span<const double> state, double beta);

// Noise stream layout: particle i of replica r draws from
// derive_seed(derive_seed(seed, r), i). `mirror` feeds particle i the negated
// stream of particle N-1-i, which is how mirror symmetry is tested.
struct NoiseOptions {
  std::uint64_t replica = 0;
  bool mirror = false;
};

// Accepted step from `time` of length `dt`: noise holds sqrt(dt) * xi.
struct StepRecord {
  double time;
  double dt;
  std::span<const double> state_before;
  std::span<const double> displacement;
  std::span<const double> noise;
  bool capped;
};
using StepObserver = std::function<void(const StepRecord&)>;

// Records every base step (stride 1) plus the final time T.
DysonPath simulate(const DysonConfig& cfg, const NoiseOptions& noise = {}, const StepObserver& observer = {},
                   int record_stride = 1);

// Integrates to each checkpoint exactly and records only those times.
DysonPath simulate_checkpoints(const DysonConfig& cfg, std::span<const double> checkpoints,
                               const NoiseOptions& noise = {});

struct ReplicaSummary {
  EstimateWithCI estimate;
  std::size_t failures = 0;
};

// Sample variance of the centre of mass at T; expected T/N. Replicas that
// hit StepFloorReached are dropped and counted; more than
// max_failure_fraction of them rethrows.
ReplicaSummary com_variance_check(const DysonConfig& cfg, std::size_t replicas, unsigned threads = 1,
                                  double max_failure_fraction = 0.0);

constexpr double kBurnIn = 2.0;

struct AutocorrelationPoint {
  double lag = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

struct RelaxationResult {
  std::vector<AutocorrelationPoint> points;
  std::size_t failures = 0;
};

// Ensemble correlation of u_sigma^*(X_{t0}) with u_sigma^*(X_{t0+lag}),
// t0 = kBurnIn, started from unit spacing (cfg.initial is ignored).
// Lags must lie in [0, cfg.T].
RelaxationResult relaxation_probe(const DysonConfig& cfg, const TestFunction& f, std::size_t replicas,
                                  std::span<const double> lags, unsigned threads = 1,
                                  double max_failure_fraction = 0.0);

// Several probes sharing the same paths (one simulation per replica).
std::vector<RelaxationResult> relaxation_probes(const DysonConfig& cfg, std::span<const TestFunction> fs,
                                                std::size_t replicas, std::span<const double> lags,
                                                unsigned threads = 1, double max_failure_fraction = 0.0);

}  // namespace gapprobe
