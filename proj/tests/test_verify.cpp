#include <doctest.h>

#include <cmath>

#include "hazd/quadrature.hpp"
#include "hazd/verify.hpp"

using namespace hazd;

namespace {

const HazardModel& demo_model() {
  static const HazardModel m = HazardModel::const_exp(7e-3, 3e-2, 7e-2);
  return m;
}

}  // namespace

TEST_CASE("oracle expectation identities") {
  const AssociatedKernel g = AssociatedKernel::gamma();
  const HazardModel& m = demo_model();
  const double t = 1.0, b = 0.2;
  // m = 1: integral of kappa f
  const double direct = integrate_value(
      [&](double y) { return density(g, t, b, y) * m.pdf(y); }, 0.0,
      tail_quantile(g, t, b, 1.0 - 1e-12), 1e-12, 1e-11);
  CHECK(oracle_expectation(m, g, b, t, 1) ==
        doctest::Approx(direct).epsilon(1e-9));
  // monotone nondecreasing in m, converging to integral of kappa k
  double prev = 0.0;
  for (std::size_t mm : {1, 2, 5, 20, 100, 1000}) {
    const double v = oracle_expectation(m, g, b, t, mm);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  const double limit = integrate_value(
      [&](double y) { return density(g, t, b, y) * m.hazard(y); }, 0.0,
      tail_quantile(g, t, b, 1.0 - 1e-12), 1e-12, 1e-11);
  CHECK(oracle_expectation(m, g, b, t, 100000) ==
        doctest::Approx(limit).epsilon(1e-6));
  // concentration: b -> 0 recovers k(t)
  CHECK(oracle_expectation(m, g, 1e-3, 1.0, 1000000) ==
        doctest::Approx(m.hazard(1.0)).epsilon(1e-3));
}

TEST_CASE("half-mass boundary bias of the symmetric kernel") {
  const AssociatedKernel n = AssociatedKernel::gaussian();
  const HazardModel flat = HazardModel::constant(0.3);
  const double v = oracle_expectation(flat, n, 1e-3, 0.0, 2000000);
  CHECK(v == doctest::Approx(0.15).epsilon(1e-2));
}

TEST_CASE("exact variance reduces to the two-quadrature formula at m = 1") {
  const AssociatedKernel g = AssociatedKernel::gamma();
  const HazardModel& m = demo_model();
  const double t = 1.0, b = 0.2;
  const double hi = tail_quantile(g, t, b, 1.0 - 1e-12);
  const double e2 = integrate_value(
      [&](double y) {
        const double k = density(g, t, b, y);
        return k * k * m.pdf(y);
      },
      0.0, hi, 1e-13, 1e-11);
  const double e1 = integrate_value(
      [&](double y) { return density(g, t, b, y) * m.pdf(y); }, 0.0, hi, 1e-13,
      1e-11);
  CHECK(oracle_variance_exact(m, g, b, t, 1) ==
        doctest::Approx(e2 - e1 * e1).epsilon(1e-9));
  CHECK_THROWS_AS(oracle_variance_exact(m, g, b, t, 500), std::domain_error);
}

TEST_CASE("exact variance approaches the asymptotic equivalent") {
  const AssociatedKernel g = AssociatedKernel::gamma();
  const HazardModel& m = demo_model();
  const double exact = oracle_variance_exact(m, g, 0.2, 1.0, 200);
  const double equiv = variance_equivalent(m, g, 0.2, 1.0, 200);
  CHECK(exact / equiv == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("bias expansion") {
  const AssociatedKernel g = AssociatedKernel::gamma();
  const HazardModel& m = demo_model();
  // interior reduction to (1/2) t k'' b
  for (double b : {0.05, 0.2}) {
    for (double t : {1.0, 3.0}) {
      CHECK(bias_expansion(m, g, b, t) ==
            doctest::Approx(0.5 * t * m.hazard_d2(t) * b).epsilon(1e-12));
    }
  }
  const HazardModel flat = HazardModel::constant(0.4);
  CHECK(bias_expansion(flat, g, 0.1, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("assumption report for the Gamma kernel") {
  AssumptionProbe probe;
  probe.t_grid = {0.0, 0.1, 1.0, 10.0};
  probe.b_grid = {1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.35, 0.5};
  probe.model = &demo_model();
  const AssumptionReport report =
      check_assumptions(AssociatedKernel::gamma(), probe);
  REQUIRE(report.checks.size() == 10);
  for (const auto& c : report.checks) {
    CAPTURE(c.id);
    CAPTURE(c.note);
    CHECK(c.pass);
  }
  CHECK(report.all_pass());
  // deterministic: identical probe, identical serialized report
  const AssumptionReport again =
      check_assumptions(AssociatedKernel::gamma(), probe);
  CHECK(report.to_json() == again.to_json());
  // fitted B(t) strictly positive (strong compatibility)
  for (const auto& c : report.checks) {
    if (c.id != "A8") continue;
    for (const auto& [name, value] : c.fitted_constants)
      if (name.rfind("B(", 0) == 0) CHECK(value > 0.0);
  }
}

TEST_CASE("Gaussian kernel triggers the support warning") {
  AssumptionProbe probe;
  probe.t_grid = {0.0, 0.1, 1.0, 10.0};
  probe.b_grid = {1e-3, 1e-2, 0.1, 0.3};
  probe.model = &demo_model();
  const AssumptionReport report =
      check_assumptions(AssociatedKernel::gaussian(), probe);
  bool warned = false;
  for (const auto& c : report.checks) {
    if (c.id == "Def2.1") {
      warned = !c.note.empty() && !c.pass;
    }
  }
  CHECK(warned);
  CHECK_FALSE(report.all_pass());
}

TEST_CASE("degenerate probe marks constants unfitted") {
  AssumptionProbe probe;
  probe.t_grid = {1.0};
  probe.b_grid = {0.1};
  const AssumptionReport report =
      check_assumptions(AssociatedKernel::gamma(), probe);
  bool unfitted = false;
  for (const auto& c : report.checks)
    if (!c.note.empty() && !c.pass) unfitted = true;
  CHECK(unfitted);
}
