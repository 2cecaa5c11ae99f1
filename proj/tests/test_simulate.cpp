#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hazd/simulate.hpp"

using namespace hazd;

TEST_CASE("stream seeds are deterministic and spread out") {
  CHECK(stream_seed(42, 0) == stream_seed(42, 0));
  CHECK(stream_seed(42, 0) != stream_seed(42, 1));
  CHECK(stream_seed(42, 0) != stream_seed(43, 0));
}

TEST_CASE("constant-hazard sampler has the exponential law") {
  const double a = 0.25;
  const HazardModel m = HazardModel::constant(a);
  const std::size_t n = 20000;
  const EventSample s = sample_event_times(m, n, 17);
  double mean = 0.0;
  for (double t : s.times) mean += t;
  mean /= static_cast<double>(n);
  CHECK(std::abs(mean - 1.0 / a) <= 3.0 * (1.0 / a) / std::sqrt(double(n)));
  CHECK(std::is_sorted(s.times.begin(), s.times.end()));
}

TEST_CASE("sampler KS statistic against the exact cdf") {
  for (const HazardModel& m :
       {HazardModel::const_exp(7e-3, 3e-2, 7e-2), HazardModel::abs_linear(0.01),
        HazardModel::bump_mixture(1e-2, {{50.0, 10.0, 1.0}}),
        HazardModel::constant(0.1),
        HazardModel::tabulated({0.0, 10.0, 20.0}, {0.05, 0.2, 0.05})}) {
    const std::size_t n = 100000;
    const EventSample s = sample_event_times(m, n, 23);
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = m.cdf(s.times[i]);
      ks = std::max(ks, std::abs(f - double(i) / double(n)));
      ks = std::max(ks, std::abs(double(i + 1) / double(n) - f));
    }
    CHECK(ks < 1.63 / std::sqrt(double(n)));  // 1% critical value
  }
}

TEST_CASE("identical seeds give identical samples") {
  const HazardModel m = HazardModel::const_exp(7e-3, 3e-2, 7e-2);
  const EventSample a = sample_event_times(m, 500, 99);
  const EventSample b = sample_event_times(m, 500, 99);
  CHECK(a.times == b.times);
}

TEST_CASE("mise on exact and offset curves") {
  const HazardModel m = HazardModel::constant(2.0);
  EstimateCurve c;
  for (int i = 0; i <= 100; ++i) {
    c.grid.push_back(double(i) / 100.0);
    c.values.push_back(2.0);
    c.bandwidths.push_back(0.1);
  }
  CHECK(mise(c, m, 0.0, 1.0) == doctest::Approx(0.0));
  for (double& v : c.values) v = 3.0;  // k + 1
  CHECK(mise(c, m, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  // additivity at an interior grid point
  CHECK(mise(c, m, 0.0, 0.37) + mise(c, m, 0.37, 1.0) ==
        doctest::Approx(mise(c, m, 0.0, 1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(mise(c, m, 0.0, 2.0), std::domain_error);
}

TEST_CASE("run_table bookkeeping and determinism across thread counts") {
  TableScenario sc{HazardModel::const_exp(7e-3, 3e-2, 7e-2)};
  sc.grid_points = 64;
  const std::vector<TableMethod> methods{TableMethod::FixedBandwidth};
  sc.fixed_bandwidth = 0.6;
  const McReport serial = run_table(sc, methods, {100}, 4, 77, 1);
  const McReport parallel = run_table(sc, methods, {100}, 4, 77, 4);
  REQUIRE(serial.rows.size() == 1);
  CHECK(serial.rows[0].mise_mean == parallel.rows[0].mise_mean);
  CHECK(serial.rows[0].mise_sd == parallel.rows[0].mise_sd);
  CHECK(serial.rows[0].mse0_mean == parallel.rows[0].mse0_mean);
  CHECK(serial.rows[0].mse0_sd == parallel.rows[0].mse0_sd);
  CHECK(serial.master_seed == 77);
  CHECK(serial.rows[0].mise_sd >= 0.0);
  CHECK(std::isfinite(serial.rows[0].mise_sd));
  CHECK_THROWS_AS(run_table(sc, methods, {100}, 1, 77, 1), std::domain_error);
}

TEST_CASE("rate regression is negative for a consistent method") {
  const HazardModel m = HazardModel::constant(0.05);
  const double slope = rate_regression(
      m, AssociatedKernel::gamma(), {200, 400, 800},
      [](std::size_t mm) { return std::pow(double(mm), -0.4); }, 5, 13, 0.0,
      50.0);
  CHECK(slope < 0.0);
}

TEST_CASE("normality experiment rejects degenerate reps") {
  const HazardModel m = HazardModel::constant(0.05);
  CHECK_THROWS_AS(
      normality_experiment(m, AssociatedKernel::gamma(), 1.0, 50, 0.2, 1, 3),
      std::domain_error);
}

TEST_CASE("method name round trip") {
  for (TableMethod method :
       {TableMethod::GammaGlobalMinimax, TableMethod::GammaLocalMinimax,
        TableMethod::GammaCv, TableMethod::GaussianCv,
        TableMethod::GaussianFixed, TableMethod::LognormalRatio,
        TableMethod::NearestNeighbor, TableMethod::FixedBandwidth}) {
    CHECK(parse_method(method_name(method)) == method);
  }
  CHECK_THROWS_AS(parse_method("nope"), std::domain_error);
}
