#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <sstream>

#include "gapprobe/error.hpp"
#include "gapprobe/pointproc.hpp"
#include "gapprobe/quadrature.hpp"
#include "oracle_values.hpp"

using namespace gapprobe;

TEST_SUITE("pointproc") {
  TEST_CASE("kernel facts") {
    CHECK(sine_K(0.3, 0.3) == 1.0);
    CHECK(rho2(0.3, 0.3) == 0.0);
    CHECK(sine_K(0.0, 2.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(sine_K(0.1, 0.7) == sine_K(0.7, 0.1));
    CHECK(rho2(0.0, 0.5) == doctest::Approx(1.0 - 4.0 / ((std::numbers::pi * std::numbers::pi))).epsilon(1e-15));
  }

  TEST_CASE("Nystrom discretization: trace, spectrum, orthonormality") {
    const DiscretizedKernel k = nystrom_discretize(5.0, 80);
    CHECK(k.node_count() == 80);
    CHECK(k.trace() == doctest::Approx(10.0).epsilon(1e-10));
    for (int i = 0; i + 1 < k.node_count(); ++i) CHECK(k.eigenvalues()[i] >= k.eigenvalues()[i + 1]);
    CHECK(k.eigenvalues()[0] <= 1.0);
    CHECK(k.eigenvalues()[k.node_count() - 1] >= 0.0);
    CHECK(k.clip_magnitude() < 1e-12);
    const Eigen::MatrixXd gram = k.eigenvectors().transpose() * k.eigenvectors();
    CHECK((gram - Eigen::MatrixXd::Identity(80, 80)).cwiseAbs().maxCoeff() < 1e-12);
    double wsum = 0.0;
    for (double w : k.weights()) wsum += w;
    CHECK(wsum == doctest::Approx(10.0).epsilon(1e-13));
    // weighted orthonormality of the eigenfunctions
    const Eigen::MatrixXd phi = k.eigenfunction_values();
    double ip = 0.0;
    for (int i = 0; i < 80; ++i) ip += k.weights()[i] * phi(i, 0) * phi(i, 0);
    CHECK(ip == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("under-resolved discretization is refused") {
    try {
      (void)nystrom_discretize(10.0, 79);
      FAIL("expected InsufficientResolution");
    } catch (const NumericError& e) {
      CHECK(e.kind() == ErrorKind::insufficient_resolution);
    }
    CHECK(minimum_nodes(10.0) == 80);
    CHECK_THROWS_AS(nystrom_discretize(0.0, 10), std::invalid_argument);
  }

  TEST_CASE("samples are sorted, distinct, inside the window and reproducible") {
    const DiscretizedKernel k = nystrom_discretize(6.0, 96);
    for (std::uint64_t r = 0; r < 50; ++r) {
      const Configuration c = sample_dpp(k, 42, r);
      const auto p = c.points();
      for (std::size_t i = 0; i + 1 < p.size(); ++i) CHECK(p[i] < p[i + 1]);
      for (double x : p) CHECK(std::abs(x) <= 6.0);
      const Configuration again = sample_dpp(k, 42, r);
      CHECK(std::equal(p.begin(), p.end(), again.points().begin(), again.points().end()));
    }
  }

  TEST_CASE("batches do not depend on the thread count") {
    const DiscretizedKernel k = nystrom_discretize(4.0, 64);
    const SampleBatch a = sample_batch(k, 64, 9, 1), b = sample_batch(k, 64, 9, 3);
    std::ostringstream sa, sb;
    write_jsonl(sa, a);
    write_jsonl(sb, b);
    CHECK(sa.str() == sb.str());
  }

  TEST_CASE("sine2 calibration at modest size") {
    const SampleBatch b = sample_batch(Process::sine2, 8.0, 64, 3000, 1, 1);
    const EstimateWithCI all = count_statistics(b, 8.0);
    CHECK(std::abs(all.mean - 16.0) < 4.0 * all.std_error + 1e-9);
    const EstimateWithCI inner = count_statistics(b, 2.0);
    CHECK(std::abs(inner.variance - oracle::kCountRows[1].variance) < 4.0 * inner.variance_std_error);
  }

  TEST_CASE("Poisson counts have variance equal to the mean") {
    const SampleBatch b = sample_batch(Process::poisson, 10.0, 0, 4000, 7, 1);
    const EstimateWithCI c = count_statistics(b, 10.0);
    CHECK(std::abs(c.mean - 20.0) < 4.0 * c.std_error);
    CHECK(std::abs(c.variance - 20.0) < 4.0 * c.variance_std_error);
  }

  TEST_CASE("empirical variance refuses windows below 12 sigma") {
    const SampleBatch b = sample_batch(Process::poisson, 10.0, 0, 10, 1, 1);
    try {
      (void)empirical_variance(TestFunction(1.0), b);
      FAIL("expected WindowTooSmall");
    } catch (const NumericError& e) {
      CHECK(e.kind() == ErrorKind::window_too_small);
    }
  }

  TEST_CASE("JSON lines round trip") {
    const SampleBatch b = sample_batch(Process::sine2, 3.0, 24, 20, 5, 1);
    std::stringstream s;
    write_jsonl(s, b);
    const SampleBatch back = read_jsonl(s);
    CHECK(back.half_width == 3.0);
    CHECK(back.node_count == 24);
    CHECK(back.seed == 5);
    CHECK(back.process == Process::sine2);
    REQUIRE(back.configurations.size() == 20);
    for (std::size_t r = 0; r < 20; ++r) {
      const auto p = b.configurations[r].points(), q = back.configurations[r].points();
      CHECK(std::equal(p.begin(), p.end(), q.begin(), q.end()));
    }
    CHECK_THROWS_AS(parse_process("gue"), std::invalid_argument);
  }
}
