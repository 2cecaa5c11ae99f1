#include <doctest.h>

#include <cmath>
#include <vector>

#include "hazd/quadrature.hpp"

using namespace hazd;

TEST_CASE("adaptive GK15 on smooth integrands") {
  CHECK(integrate_value([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_value([](double x) { return std::exp(-x); }, 0.0, 50.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // sharply peaked Gaussian
  const double s = 1e-3;
  CHECK(integrate_value(
            [&](double x) {
              return std::exp(-0.5 * (x - 0.3) * (x - 0.3) / (s * s)) /
                     (s * std::sqrt(2.0 * M_PI));
            },
            0.0, 1.0, 1e-12, 1e-11) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("integrate reports an error estimate") {
  const QuadResult r = integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(r.error < 1e-10);
}

TEST_CASE("gauss_legendre exact for polynomials up to degree 2n-1") {
  std::vector<double> x(8), w(8);
  gauss_legendre(8, -1.0, 3.0, x.data(), w.data());
  double s = 0.0;
  for (int i = 0; i < 8; ++i) s += w[i] * std::pow(x[i], 15);  // degree 15
  const double exact = (std::pow(3.0, 16) - 1.0) / 16.0;
  CHECK(s == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("integrate_triangle over y <= z") {
  // int_0^1 dy int_y^1 dz y z = 1/8
  const double v = integrate_triangle(
      [](double y, double z) { return y * z; }, 0.0, 1.0, 1.0, 32);
  CHECK(v == doctest::Approx(0.125).epsilon(1e-12));
  // int_0^2 dy int_y^2 dz exp(-(y+z))
  const double w = integrate_triangle(
      [](double y, double z) { return std::exp(-y - z); }, 0.0, 2.0, 2.0, 64);
  const double exact = 0.5 * (1.0 - std::exp(-2.0)) * (1.0 - std::exp(-2.0));
  CHECK(w == doctest::Approx(exact).epsilon(1e-12));
}
