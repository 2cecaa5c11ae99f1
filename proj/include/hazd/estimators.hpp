#pragma once

#include <string>
#include <vector>

#include "hazd/hazard_model.hpp"
#include "hazd/kernels.hpp"

namespace hazd {

// Sorted event times tau_(1) <= ... <= tau_(m).
struct EventSample {
  std::vector<double> times;

  EventSample() = default;
  explicit EventSample(std::vector<double> ts);

  std::size_t m() const { return times.size(); }
};

enum class EstimateMethod {
  FixedBandwidth,
  GlLocal,
  GlGlobal,
  CrossValidation,
  NearestNeighbor,
  Ratio,
};

struct EstimateCurve {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> bandwidths;  // one per grid point
  AssociatedKernel kernel;
  EstimateMethod method = EstimateMethod::FixedBandwidth;
};

double nelson_aalen(const EventSample& sample, double t);

// Smoothed estimator: sum_i kappa_{t,b}(tau_(i)) / (m - i + 1).
double hazard_estimate(const EventSample& sample, const AssociatedKernel& kernel,
                       double b, double t);

// 1 - (1/m) #{i : tau_i < x}, strict inequality.
double empirical_survival_strict(const EventSample& sample, double x);

// (1/m) sum_i kappa_{t,b}(tau_i) / (1 - Fhat_m(tau_i)); identical to
// hazard_estimate on tie-free samples.
double hazard_estimate_reweighted(const EventSample& sample,
                                  const AssociatedKernel& kernel, double b,
                                  double t);

// k~_b(t) = (1/m) sum_i kappa_{t,b}(tau_i) / (1 - F(tau_i)) with the exact F.
double intermediate_estimate(const EventSample& sample, const HazardModel& truth,
                             const AssociatedKernel& kernel, double b, double t);

// Density-over-survival baseline with a 1/m survival floor.
double ratio_estimate(const EventSample& sample, const AssociatedKernel& kernel,
                      double b, double t);

EstimateCurve estimate_curve(const EventSample& sample,
                             const AssociatedKernel& kernel, double b,
                             const std::vector<double>& grid);

}  // namespace hazd
