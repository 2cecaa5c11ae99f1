#include <doctest.h>

#include <cmath>
#include <random>

#include "hazd/kernels.hpp"
#include "hazd/quadrature.hpp"

using namespace hazd;

TEST_CASE("gamma_shape branches") {
  const GammaShape in = gamma_shape(0.4, 0.1);
  CHECK(in.rho == doctest::Approx(4.0));
  CHECK(in.regime == GammaRegime::Interior);
  const GammaShape b0 = gamma_shape(0.0, 0.1);
  CHECK(b0.rho == doctest::Approx(1.0));
  CHECK(b0.regime == GammaRegime::Boundary);
  const GammaShape b1 = gamma_shape(0.1, 0.1);
  CHECK(b1.rho == doctest::Approx(1.25));
  CHECK(b1.regime == GammaRegime::Boundary);
  // continuity at t = 2b
  CHECK(gamma_shape(0.2 - 1e-12, 0.1).rho == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(gamma_shape(0.2, 0.1).rho == doctest::Approx(2.0));
  CHECK_THROWS_AS(gamma_shape(-0.1, 0.1), std::domain_error);
  CHECK_THROWS_AS(gamma_shape(0.1, 0.0), std::domain_error);
}

TEST_CASE("density point values") {
  const AssociatedKernel g = AssociatedKernel::gamma();
  // rho = 1 at t = 0 reduces to Exp(1/b)
  CHECK(density(g, 0.0, 0.5, 0.0) == doctest::Approx(2.0));
  // Gamma(4, 0.25) pdf at 1: e^{-4} / (0.25^4 Gamma(4))
  const double expect = std::exp(-4.0) / (std::pow(0.25, 4) * 6.0);
  CHECK(density(g, 1.0, 0.25, 1.0) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(density(g, 1.0, 0.25, -0.5) == 0.0);

  const AssociatedKernel n = AssociatedKernel::gaussian();
  CHECK(density(n, 0.7, 0.1, 0.7) ==
        doctest::Approx(1.0 / (0.1 * std::sqrt(2.0 * M_PI))).epsilon(1e-14));
}

TEST_CASE("moments closed forms") {
  const AssociatedKernel g = AssociatedKernel::gamma();
  const KernelMoments interior = moments(g, 1.0, 0.1);
  CHECK(interior.lambda_bias == doctest::Approx(0.0));
  CHECK(interior.variance_z == doctest::Approx(0.1).epsilon(1e-14));
  const KernelMoments boundary = moments(g, 0.0, 0.1);
  CHECK(boundary.lambda_bias == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(boundary.variance_z == doctest::Approx(0.01).epsilon(1e-14));
  // small-b asymptotic alpha ~ 1/(2 sqrt(pi t b))
  const KernelMoments small = moments(g, 1.0, 0.01);
  CHECK(small.alpha ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(M_PI * 0.01))).epsilon(0.02));

  const AssociatedKernel n = AssociatedKernel::gaussian();
  const KernelMoments gm = moments(n, 2.0, 0.3);
  CHECK(gm.lambda_bias == doctest::Approx(0.0));
  CHECK(gm.variance_z == doctest::Approx(0.09).epsilon(1e-14));
  CHECK(gm.alpha ==
        doctest::Approx(1.0 / (2.0 * 0.3 * std::sqrt(M_PI))).epsilon(1e-12));
  CHECK(gm.sup_density ==
        doctest::Approx(1.0 / (0.3 * std::sqrt(2.0 * M_PI))).epsilon(1e-12));

  CHECK_THROWS_AS(moments(g, 1.0, 1.5), std::domain_error);
}

TEST_CASE("gamma closed forms agree with quadrature") {
  const AssociatedKernel g = AssociatedKernel::gamma();
  for (double t : {0.0, 0.05, 0.3, 1.0, 4.0}) {
    for (double b : {0.02, 0.1, 0.4, 1.0}) {
      const KernelMoments closed = moments(g, t, b);
      const KernelMoments quad = moments_quadrature(g, t, b);
      CAPTURE(t);
      CAPTURE(b);
      CHECK(std::abs(quad.lambda_bias - closed.lambda_bias) <=
            1e-8 * (1.0 + std::abs(closed.lambda_bias)));
      CHECK(std::abs(quad.variance_z - closed.variance_z) <=
            1e-8 * (1.0 + closed.variance_z));
      CHECK(quad.alpha == doctest::Approx(closed.alpha).epsilon(1e-8));
      CHECK(quad.beta == doctest::Approx(closed.beta).epsilon(1e-8));
    }
  }
}

TEST_CASE("normalization across random (t, b)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> tb(0.0, 5.0), bb(1e-3, 1.0);
  for (const AssociatedKernel kernel :
       {AssociatedKernel::gamma(), AssociatedKernel::gaussian(),
        AssociatedKernel::lognormal()}) {
    for (int rep = 0; rep < 20; ++rep) {
      double t = tb(rng);
      if (kernel.family == KernelFamily::Lognormal && t < 0.05) t += 0.05;
      const double b = bb(rng);
      // for unbounded support keep the bracket a few hundred sd wide so the
      // first quadrature panel still sees the peak
      const double lo = kernel.support_lower() < 0.0
                            ? t - 60.0 * b
                            : std::max(kernel.support_lower(), t - 60.0);
      const double hi = tail_quantile(kernel, t, b, 1.0 - 1e-12);
      const double mode = kernel_mode(kernel, t, b);
      double mass;
      if (mode > lo && mode < hi) {
        mass = integrate_value(
                   [&](double y) { return density(kernel, t, b, y); }, lo, mode,
                   1e-12, 1e-10) +
               integrate_value(
                   [&](double y) { return density(kernel, t, b, y); }, mode, hi,
                   1e-12, 1e-10);
      } else {
        mass = integrate_value(
            [&](double y) { return density(kernel, t, b, y); }, lo, hi, 1e-12,
            1e-10);
      }
      CAPTURE(static_cast<int>(kernel.family));
      CAPTURE(t);
      CAPTURE(b);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("kernel_cdf and tail_quantile") {
  const AssociatedKernel g = AssociatedKernel::gamma();
  CHECK(kernel_cdf(g, 0.0, 0.5, 0.0) == doctest::Approx(0.0));
  CHECK(kernel_cdf(g, 0.0, 0.5, 1e4) == doctest::Approx(1.0));
  // Exp(2) median
  CHECK(kernel_cdf(g, 0.0, 0.5, 0.5 * std::log(2.0)) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(tail_quantile(g, 0.0, 1.0, 1.0 - std::exp(-1.0)) ==
        doctest::Approx(1.0).epsilon(1e-9));
  const AssociatedKernel n = AssociatedKernel::gaussian();
  CHECK(tail_quantile(n, 0.0, 1.0, 0.5) == doctest::Approx(0.0).epsilon(1e-9));
  // round trip against the cdf
  const double q = tail_quantile(g, 1.0, 0.25, 0.5);
  CHECK(kernel_cdf(g, 1.0, 0.25, q) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("asymptotic alpha and beta ratios at b = 1e-4") {
  const AssociatedKernel g = AssociatedKernel::gamma();
  const double t = 1.0, b = 1e-4;
  const KernelMoments mo = moments(g, t, b);
  CHECK(mo.alpha * 2.0 * std::sqrt(M_PI * t * b) ==
        doctest::Approx(1.0).epsilon(0.05));
  CHECK(mo.beta * 2.0 * M_PI * std::sqrt(3.0) * t * b ==
        doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("sup density stays below Cs b^{-1/2} in the interior") {
  const AssociatedKernel g = AssociatedKernel::gamma();
  for (double t : {0.1, 1.0, 10.0}) {
    double prev = -1.0;
    for (double b = t / 2.0; b > 1e-5; b /= 4.0) {
      const double scaled = moments(g, t, std::min(b, 1.0)).sup_density *
                            std::sqrt(std::min(b, 1.0));
      CHECK(scaled < 2.0);  // bounded envelope
      if (prev >= 0.0) CHECK(scaled <= prev * 1.05);  // no blow-up as b drops
      prev = scaled;
    }
  }
}

TEST_CASE("Markov tail bound with fitted constants") {
  const AssociatedKernel g = AssociatedKernel::gamma();
  const double t = 1.0;
  // fit C1^2 + C2 on a coarse grid: |Lambda| <= C1 sqrt(b), Var <= C2 b
  double c1 = 0.0, c2 = 0.0;
  for (double b : {0.5, 0.25, 0.1, 0.05}) {
    const KernelMoments mo = moments(g, t, b);
    c1 = std::max(c1, std::abs(mo.lambda_bias) / std::sqrt(b));
    c2 = std::max(c2, mo.variance_z / b);
  }
  for (double b : {0.4, 0.2, 0.08, 0.02}) {
    for (double lam : {0.5, 1.0, 2.0}) {
      const double tail = 1.0 - kernel_cdf(g, t, b, t + lam) +
                          (t - lam > 0.0 ? kernel_cdf(g, t, b, t - lam) : 0.0);
      const double bound = (c1 * c1 + c2) * b / (lam * lam);
      CHECK(tail <= bound * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("scale equivariance") {
  const AssociatedKernel g = AssociatedKernel::gamma();
  const AssociatedKernel n = AssociatedKernel::gaussian();
  for (double c : {0.5, 2.0, 7.0}) {
    CHECK(density(g, c * 1.2, c * 0.3, c * 1.1) ==
          doctest::Approx(density(g, 1.2, 0.3, 1.1) / c).epsilon(1e-12));
    CHECK(density(n, c * 1.2, c * 0.3, c * 1.1) ==
          doctest::Approx(density(n, 1.2, 0.3, 1.1) / c).epsilon(1e-12));
  }
}

TEST_CASE("kernel moments invariants") {
  for (const AssociatedKernel kernel :
       {AssociatedKernel::gamma(), AssociatedKernel::gaussian()}) {
    for (double t : {0.0, 0.5, 3.0}) {
      for (double b : {0.05, 0.3, 1.0}) {
        const KernelMoments mo = moments(kernel, t, b);
        CHECK(mo.variance_z >= 0.0);
        CHECK(mo.alpha > 0.0);
        CHECK(mo.beta > 0.0);
        CHECK(mo.sup_density > 0.0);
        CHECK(mo.alpha <= mo.sup_density * (1.0 + 1e-9));
        CHECK(mo.beta <= mo.sup_density * mo.sup_density * (1.0 + 1e-9));
      }
    }
  }
}
