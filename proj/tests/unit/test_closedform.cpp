#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "gapprobe/closedform.hpp"
#include "oracle_values.hpp"

using namespace gapprobe;

TEST_SUITE("closedform") {
  TEST_CASE("closed forms match the oracle on the sigma grid") {
    for (const auto& row : oracle::kSigmaRows) {
      CAPTURE(row.sigma);
      CHECK(eq5(row.sigma) == doctest::Approx(row.eq5).epsilon(1e-14));
      CHECK(term_I(row.sigma) == doctest::Approx(row.term_I).epsilon(1e-14));
      CHECK(u_l2_norm_sq(row.sigma) == doctest::Approx(row.u_l2).epsilon(1e-14));
      CHECK(energy_exact(row.sigma) == doctest::Approx(row.energy).epsilon(1e-14));
      CHECK(energy_upper_bound(row.sigma) == doctest::Approx(row.energy_ub).epsilon(1e-14));
    }
  }

  TEST_CASE("gaussian cosine integral matches the oracle") {
    for (const auto& row : oracle::kCosRows) {
      CAPTURE(row.a);
      CHECK(gaussian_cosine_integral(row.a, row.b) == doctest::Approx(row.value).epsilon(1e-13));
    }
  }

  TEST_CASE("derived quantities are consistent") {
    const double pi = std::numbers::pi;
    for (double s : {0.1, 1.0, 7.0, 1024.0}) {
      CAPTURE(s);
      CHECK(var_lower_bound(s) == doctest::Approx(term_I(s)).epsilon(1e-15));
      CHECK(term_II_lower_bound(s) == doctest::Approx(-u_l2_norm_sq(s)).epsilon(1e-15));
      CHECK(poisson_variance(s) == doctest::Approx(u_l2_norm_sq(s)).epsilon(1e-15));
      CHECK(rayleigh_upper_bound(s) == doctest::Approx(energy_upper_bound(s) / var_lower_bound(s)).epsilon(1e-14));
      CHECK(energy_exact(s) < energy_upper_bound(s));
      CHECK(gap_criterion_ratio(s, poisson_variance(s)) == doctest::Approx(2.0 / (std::sqrt(pi) * s * s)).epsilon(1e-14));
    }
  }

  TEST_CASE("rayleigh bound decays like 7 pi^{3/2} / sigma") {
    const double c = 7.0 * std::pow(std::numbers::pi, 1.5);
    for (double s = 1.0; s <= 1024.0; s *= 2.0) {
      CHECK(rayleigh_upper_bound(s) * s == doctest::Approx(c).epsilon(1e-12));
      CHECK(rayleigh_upper_bound(2.0 * s) < rayleigh_upper_bound(s));
    }
  }

  TEST_CASE("small sigma stays accurate") {
    // expm1 keeps relative accuracy when 4 pi^2 sigma^2 is tiny
    const double s = 1e-6;
    const double pi = std::numbers::pi;
    CHECK(term_I(s) == doctest::Approx(pi * s * s * s * s).epsilon(1e-9));
  }

  TEST_CASE("report bundles the scalar functions") {
    const ClosedFormReport r = closed_form_report(2.0);
    CHECK(r.sigma == 2.0);
    CHECK(r.eq5 == eq5(2.0));
    CHECK(r.var_lb == var_lower_bound(2.0));
    CHECK(r.rayleigh_ub == rayleigh_upper_bound(2.0));
  }

  TEST_CASE("non-positive parameters throw") {
    CHECK_THROWS_AS(eq5(0.0), std::invalid_argument);
    CHECK_THROWS_AS(energy_exact(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_cosine_integral(1.0, 0.0), std::invalid_argument);
  }
}
