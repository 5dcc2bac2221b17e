#include "gapprobe/pointproc.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "gapprobe/error.hpp"
#include "gapprobe/parallel.hpp"
#include "gapprobe/quadrature.hpp"
#include "gapprobe/rng.hpp"

namespace gapprobe {
namespace {

constexpr double kNegativeDensityFloor = -1e-9;

std::string format17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double sine_K(double x, double y) noexcept { return sine_kernel_value(x - y); }

double rho2(double x, double y) noexcept {
  const double k = sine_K(x, y);
  return 1.0 - k * k;
}

Eigen::MatrixXd DiscretizedKernel::eigenfunction_values() const {
  Eigen::MatrixXd phi = eigenvectors_;
  for (int i = 0; i < phi.rows(); ++i) phi.row(i) /= std::sqrt(weights_[i]);
  return phi;
}

int minimum_nodes(double L) { return static_cast<int>(std::ceil(8.0 * L)); }

DiscretizedKernel nystrom_discretize(double L, int n) {
  require_positive(L, "L");
  if (n < minimum_nodes(L)) {
    throw NumericError(ErrorKind::insufficient_resolution,
                       "n=" + std::to_string(n) + " is below ceil(8L)=" + std::to_string(minimum_nodes(L)));
  }
  DiscretizedKernel k;
  k.half_width_ = L;
  const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * L - 1e-9)));
  const double width = 2.0 * L / panels;
  k.nodes_.reserve(n);
  k.weights_.reserve(n);
  for (int p = 0; p < panels; ++p) {
    const int order = n / panels + (p < n % panels ? 1 : 0);
    const GaussRule& rule = gauss_legendre(order);
    const double lo = -L + p * width;
    for (int i = 0; i < order; ++i) {
      k.nodes_.push_back(lo + 0.5 * width * (rule.nodes[i] + 1.0));
      k.weights_.push_back(0.5 * width * rule.weights[i]);
    }
  }
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    const double wi = std::sqrt(k.weights_[i]);
    for (int j = 0; j <= i; ++j) {
      const double v = wi * sine_K(k.nodes_[i], k.nodes_[j]) * std::sqrt(k.weights_[j]);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericError(ErrorKind::eigen_failure, "symmetric eigensolver did not converge");
  }
  // Eigen orders ascending; store descending
  k.eigenvalues_ = solver.eigenvalues().reverse();
  k.eigenvectors_ = solver.eigenvectors().rowwise().reverse();
  for (int i = 0; i < n; ++i) {
    const double raw = k.eigenvalues_[i];
    const double clipped = std::clamp(raw, 0.0, 1.0);
    k.clip_magnitude_ = std::max(k.clip_magnitude_, std::abs(raw - clipped));
    k.eigenvalues_[i] = clipped;
  }
  return k;
}

std::string to_string(Process p) { return p == Process::sine2 ? "sine2" : "poisson"; }

Process parse_process(const std::string& name) {
  if (name == "sine2") return Process::sine2;
  if (name == "poisson") return Process::poisson;
  throw std::invalid_argument("unknown process '" + name + "' (expected sine2 or poisson)");
}

Configuration sample_dpp(const DiscretizedKernel& kernel, std::uint64_t seed, std::uint64_t replica) {
  Engine rng = make_engine(seed, replica);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::VectorXd& lambda = kernel.eigenvalues();
  const int n = kernel.node_count();

  std::vector<int> selected;
  for (int k = 0; k < n; ++k) {
    if (unit(rng) < lambda[k]) selected.push_back(k);
  }
  const int rank = static_cast<int>(selected.size());
  std::vector<double> points;
  points.reserve(rank);
  if (rank == 0) return Configuration({}, kernel.half_width());

  // rows of the selected eigenvectors are feature vectors; the projection
  // kernel is their Gram matrix
  Eigen::MatrixXd features(n, rank);
  for (int c = 0; c < rank; ++c) features.col(c) = kernel.eigenvectors().col(selected[c]);
  Eigen::VectorXd residual = features.rowwise().squaredNorm();
  Eigen::MatrixXd basis(rank, rank);

  for (int step = 0; step < rank; ++step) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      if (residual[i] < kNegativeDensityFloor) {
        throw NumericError(ErrorKind::numerical_degeneracy,
                           "conditional density " + format17(residual[i]) + " at node " + std::to_string(i));
      }
      residual[i] = std::max(residual[i], 0.0);
      total += residual[i];
    }
    if (!(total > 0.0)) throw NumericError(ErrorKind::numerical_degeneracy, "conditional density vanished");
    const double target = unit(rng) * total;
    int chosen = n - 1;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += residual[i];
      if (target < acc) {
        chosen = i;
        break;
      }
    }
    while (residual[chosen] == 0.0 && chosen > 0) --chosen;
    points.push_back(kernel.nodes()[chosen]);

    // new orthonormal direction: chosen feature minus its projection on the basis so far
    Eigen::VectorXd e = features.row(chosen).transpose();
    for (int s = 0; s < step; ++s) e -= basis.col(s).dot(e) * basis.col(s);
    const double norm = e.norm();
    if (!(norm > 0.0)) throw NumericError(ErrorKind::numerical_degeneracy, "Gram-Schmidt produced a null direction");
    basis.col(step) = e / norm;
    residual -= (features * basis.col(step)).cwiseAbs2();
    residual[chosen] = 0.0;
  }
  std::sort(points.begin(), points.end());
  return Configuration(std::move(points), kernel.half_width());
}

Configuration sample_poisson(double L, std::uint64_t seed, std::uint64_t replica) {
  require_positive(L, "L");
  Engine rng = make_engine(seed, replica);
  std::poisson_distribution<long> count(2.0 * L);
  std::uniform_real_distribution<double> position(-L, L);
  const long m = count(rng);
  std::vector<double> points(static_cast<std::size_t>(m));
  for (double& x : points) x = position(rng);
  std::sort(points.begin(), points.end());
  return Configuration(std::move(points), L);
}

SampleBatch sample_batch(const DiscretizedKernel& kernel, std::size_t replicas, std::uint64_t seed, unsigned threads) {
  SampleBatch batch;
  batch.seed = seed;
  batch.half_width = kernel.half_width();
  batch.node_count = kernel.node_count();
  batch.process = Process::sine2;
  batch.configurations.resize(replicas);
  parallel_for(replicas, threads, [&](std::size_t r) { batch.configurations[r] = sample_dpp(kernel, seed, r); });
  return batch;
}

SampleBatch sample_batch(Process process, double L, int n, std::size_t replicas, std::uint64_t seed,
                         unsigned threads) {
  if (process == Process::sine2) return sample_batch(nystrom_discretize(L, n), replicas, seed, threads);
  SampleBatch batch;
  batch.seed = seed;
  batch.half_width = L;
  batch.node_count = 0;
  batch.process = Process::poisson;
  batch.configurations.resize(replicas);
  parallel_for(replicas, threads, [&](std::size_t r) { batch.configurations[r] = sample_poisson(L, seed, r); });
  return batch;
}

EstimateWithCI empirical_variance(const TestFunction& f, const SampleBatch& batch) {
  if (batch.configurations.empty()) throw std::invalid_argument("empirical_variance: empty batch");
  if (batch.half_width < kGaussianCutoff * f.sigma()) {
    throw NumericError(ErrorKind::window_too_small, "window L=" + format17(batch.half_width) + " is below 12 sigma=" +
                                                        format17(kGaussianCutoff * f.sigma()));
  }
  std::vector<double> stats(batch.configurations.size());
  for (std::size_t r = 0; r < stats.size(); ++r) stats[r] = linear_statistic(f, batch.configurations[r]);
  return summarize(stats);
}

EstimateWithCI count_statistics(const SampleBatch& batch, double R) {
  if (batch.configurations.empty()) throw std::invalid_argument("count_statistics: empty batch");
  std::vector<double> counts(batch.configurations.size());
  for (std::size_t r = 0; r < counts.size(); ++r) {
    std::size_t c = 0;
    for (double x : batch.configurations[r].points()) c += (std::abs(x) <= R) ? 1 : 0;
    counts[r] = static_cast<double>(c);
  }
  return summarize(counts);
}

void write_jsonl(std::ostream& out, const SampleBatch& batch) {
  out << "{\"L\":" << format17(batch.half_width) << ",\"n\":" << batch.node_count << ",\"process\":\""
      << to_string(batch.process) << "\",\"seed\":" << batch.seed << "}\n";
  for (std::size_t r = 0; r < batch.configurations.size(); ++r) {
    out << "{\"points\":[";
    const auto pts = batch.configurations[r].points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) out << ',';
      out << format17(pts[i]);
    }
    out << "],\"seed_index\":" << r << "}\n";
  }
}

SampleBatch read_jsonl(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_jsonl: missing header line");
  const auto header = nlohmann::json::parse(line);
  SampleBatch batch;
  batch.half_width = header.at("L").get<double>();
  batch.node_count = header.at("n").get<int>();
  batch.process = parse_process(header.at("process").get<std::string>());
  batch.seed = header.at("seed").get<std::uint64_t>();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto row = nlohmann::json::parse(line);
    const auto index = row.at("seed_index").get<std::size_t>();
    if (index != batch.configurations.size()) throw std::invalid_argument("read_jsonl: seed_index out of order");
    batch.configurations.emplace_back(row.at("points").get<std::vector<double>>(), batch.half_width);
  }
  return batch;
}

}  // namespace gapprobe
