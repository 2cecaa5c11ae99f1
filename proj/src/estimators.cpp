#include "hazd/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hazd {

EventSample::EventSample(std::vector<double> ts) : times(std::move(ts)) {
  if (times.empty()) throw std::domain_error("EventSample: empty sample");
  std::sort(times.begin(), times.end());
  for (double t : times) {
    if (!std::isfinite(t) || t <= 0.0)
      throw std::domain_error("EventSample: times must be finite and > 0");
  }
}

double nelson_aalen(const EventSample& sample, double t) {
  const std::size_t m = sample.m();
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (sample.times[i] > t) break;
    s += 1.0 / static_cast<double>(m - i);
  }
  return s;
}

double hazard_estimate(const EventSample& sample, const AssociatedKernel& kernel,
                       double b, double t) {
  const std::size_t m = sample.m();
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    s += density(kernel, t, b, sample.times[i]) / static_cast<double>(m - i);
  }
  return s;
}

double empirical_survival_strict(const EventSample& sample, double x) {
  const auto below =
      std::lower_bound(sample.times.begin(), sample.times.end(), x) -
      sample.times.begin();
  return 1.0 - static_cast<double>(below) / static_cast<double>(sample.m());
}

double hazard_estimate_reweighted(const EventSample& sample,
                                  const AssociatedKernel& kernel, double b,
                                  double t) {
  const std::size_t m = sample.m();
  const double inv_m = 1.0 / static_cast<double>(m);
  double s = 0.0;
  std::size_t i = 0;
  while (i < m) {
    // ties share the strict-inequality survival of their first occurrence,
    // but Nelson-Aalen ranks run consecutively; replicate the rank weights
    std::size_t j = i;
    while (j < m && sample.times[j] == sample.times[i]) ++j;
    for (std::size_t r = i; r < j; ++r) {
      const double surv = static_cast<double>(m - r) * inv_m;
      s += density(kernel, t, b, sample.times[r]) / surv;
    }
    i = j;
  }
  return s * inv_m;
}

double intermediate_estimate(const EventSample& sample, const HazardModel& truth,
                             const AssociatedKernel& kernel, double b,
                             double t) {
  const std::size_t m = sample.m();
  double s = 0.0;
  for (double tau : sample.times) {
    const double surv = std::exp(-truth.cumulative_hazard(tau));
    if (surv <= 0.0)
      throw std::domain_error("intermediate_estimate: F(tau) = 1");
    s += density(kernel, t, b, tau) / surv;
  }
  return s / static_cast<double>(m);
}

double ratio_estimate(const EventSample& sample, const AssociatedKernel& kernel,
                      double b, double t) {
  const std::size_t m = sample.m();
  double num = 0.0;
  for (double tau : sample.times) num += density(kernel, t, b, tau);
  num /= static_cast<double>(m);
  const double surv =
      std::max(empirical_survival_strict(sample, t), 1.0 / static_cast<double>(m));
  return num / surv;
}

EstimateCurve estimate_curve(const EventSample& sample,
                             const AssociatedKernel& kernel, double b,
                             const std::vector<double>& grid) {
  EstimateCurve c;
  c.grid = grid;
  c.kernel = kernel;
  c.method = EstimateMethod::FixedBandwidth;
  c.values.resize(grid.size());
  c.bandwidths.assign(grid.size(), b);
  for (std::size_t g = 0; g < grid.size(); ++g)
    c.values[g] = hazard_estimate(sample, kernel, b, grid[g]);
  return c;
}

}  // namespace hazd
