#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gapprobe/estimators.hpp"
#include "gapprobe/testfn.hpp"

namespace gapprobe {

// K(x, y) = sin(pi (x - y)) / (pi (x - y)), with K(x, x) = 1.
double sine_K(double x, double y) noexcept;

// rho^(2)(x, y) = 1 - K(x, y)^2
double rho2(double x, double y) noexcept;

// Nystrom eigensystem of the sine kernel restricted to [-L, L].
//
// Nodes are composite Gauss-Legendre with ceil(2L) equal panels, so integer
// window edges fall on panel boundaries. The symmetric matrix
// M_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j) is diagonalised; on the nodes it is
// the marginal kernel of a discrete DPP whose correlation functions are the
// quadrature images of the continuum ones.
class DiscretizedKernel {
public:
  double half_width() const noexcept { return half_width_; }
  int node_count() const noexcept { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  // descending, clipped to [0, 1]
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  // orthonormal (Euclidean) eigenvectors of M, one column per eigenvalue
  const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }
  // phi_k(x_i) = V_ik / sqrt(w_i): orthonormal in the weighted inner product
  Eigen::MatrixXd eigenfunction_values() const;
  // largest distance an eigenvalue was moved by clipping
  double clip_magnitude() const noexcept { return clip_magnitude_; }
  double trace() const noexcept { return eigenvalues_.sum(); }

  friend DiscretizedKernel nystrom_discretize(double L, int n);

private:
  double half_width_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  double clip_magnitude_ = 0.0;
};

int minimum_nodes(double L);

// Throws InsufficientResolution when n < ceil(8L).
DiscretizedKernel nystrom_discretize(double L, int n);

enum class Process { sine2, poisson };

std::string to_string(Process p);
Process parse_process(const std::string& name);

// Spectral (HKPV) sample on the nodes: Bernoulli selection of eigenvectors in
// descending-eigenvalue order, then sequential projection sampling with
// Gram-Schmidt downdating. Points come back sorted.
Configuration sample_dpp(const DiscretizedKernel& kernel, std::uint64_t seed, std::uint64_t replica = 0);

// Poisson(2L) points, i.i.d. uniform on [-L, L], sorted.
Configuration sample_poisson(double L, std::uint64_t seed, std::uint64_t replica = 0);

struct SampleBatch {
  std::vector<Configuration> configurations;
  std::uint64_t seed = 0;
  double half_width = 0.0;
  int node_count = 0;  // 0 for Poisson
  Process process = Process::sine2;
};

// Replica r draws from the stream derive_seed(seed, r); the batch is
// identical for every thread count.
SampleBatch sample_batch(Process process, double L, int n, std::size_t replicas, std::uint64_t seed,
                         unsigned threads);
SampleBatch sample_batch(const DiscretizedKernel& kernel, std::size_t replicas, std::uint64_t seed, unsigned threads);

// Sample variance of u_sigma^* with jackknife error. Requires L >= 12 sigma.
EstimateWithCI empirical_variance(const TestFunction& f, const SampleBatch& batch);

// Mean and variance of the number of points in [-R, R].
EstimateWithCI count_statistics(const SampleBatch& batch, double R);

// JSON-lines: a header {"L","n","process","seed"} then one
// {"points":[...],"seed_index":i} per configuration, numbers at 17 digits.
void write_jsonl(std::ostream& out, const SampleBatch& batch);
SampleBatch read_jsonl(std::istream& in);

}  // namespace gapprobe
