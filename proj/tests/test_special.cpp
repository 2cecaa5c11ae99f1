#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hazd/special.hpp"

using namespace hazd;

TEST_CASE("gamma_p matches exponential and chi-square identities") {
  // P(1, x) = 1 - e^{-x}
  CHECK(gamma_p(1.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(gamma_p(1.0, 0.0) == doctest::Approx(0.0));
  // P(1/2, x) = erf(sqrt(x))
  CHECK(gamma_p(0.5, 2.0) ==
        doctest::Approx(std::erf(std::sqrt(2.0))).epsilon(1e-13));
  // large-shape regime (continued fraction branch)
  CHECK(gamma_p(100.0, 100.0) == doctest::Approx(0.5132987982791487).epsilon(1e-12));
  CHECK(gamma_p(5.0, 100.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gamma_p rejects bad arguments") {
  CHECK_THROWS_AS(gamma_p(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(gamma_p(1.0, -1.0), std::domain_error);
}

TEST_CASE("log_binom") {
  CHECK(log_binom(5, 2) == doctest::Approx(std::log(10.0)).epsilon(1e-14));
  CHECK(log_binom(200, 0) == doctest::Approx(0.0));
  CHECK(log_binom(200, 200) == doctest::Approx(0.0));
  CHECK(log_binom(200, 100) == doctest::Approx(135.7532360812785).epsilon(1e-12));
}

TEST_CASE("normal_cdf") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-12));
  CHECK(normal_cdf(-1.96) == doctest::Approx(0.0249978951482205).epsilon(1e-12));
  CHECK(normal_cdf(-40.0) == doctest::Approx(0.0));
}
