#pragma once

#include <cstddef>
#include <vector>

#include "hazd/estimators.hpp"
#include "hazd/kernels.hpp"

namespace hazd {

struct BandwidthGrid {
  std::vector<double> values;  // ascending, unique
  std::size_t m = 0;           // sample size the grid targets
  double s_sum = 0.0;          // S(B_m) = sum 1/(m b^gamma)
};

struct PenaltyConfig {
  double kappa0 = 0.03;
  double kappa1 = 20.0;   // practical constant; distinct from kappa1_theory
  double epsilon = 0.5;
  double k_sup = 1.0;     // plug-in for ||k||_inf
  double gamma_exponent = 0.5;
};

enum class SelectionMethod { GlLocal, GlGlobal, CrossValidation };

struct SelectionRecord {
  double b;
  double a_term;
  double v_term;
  double criterion;
};

struct SelectionTrace {
  std::vector<SelectionRecord> records;
  double chosen = 0.0;
  SelectionMethod method = SelectionMethod::GlLocal;
};

// Section-5 bandwidth sets. The printed local set's seed point
// 400(log m / m)^2 fails its own sqrt(b) filter for moderate m; by default
// the seed is kept regardless (exempt_seed), with the literal intersection
// available behind the flag.
BandwidthGrid grid_local(std::size_t m, double gamma_exponent = 0.5,
                         bool exempt_seed = true);
BandwidthGrid grid_global(std::size_t m, double gamma_exponent = 0.5);

double penalty_local(double b, const PenaltyConfig& cfg, std::size_t m);
double penalty_global(double b, const PenaltyConfig& cfg, std::size_t m);

// Pilot plug-in for ||k||_inf: estimate with the largest grid bandwidth and
// take the max over the estimation grid.
double k_sup_plugin(const EventSample& sample, const AssociatedKernel& kernel,
                    const BandwidthGrid& grid,
                    const std::vector<double>& estimation_grid);

std::pair<double, SelectionTrace> select_local(const EventSample& sample,
                                               const AssociatedKernel& kernel,
                                               const BandwidthGrid& grid,
                                               const PenaltyConfig& cfg,
                                               double t);

std::pair<double, SelectionTrace> select_global(
    const EventSample& sample, const AssociatedKernel& kernel,
    const BandwidthGrid& grid, const PenaltyConfig& cfg,
    const std::vector<double>& estimation_grid);

std::pair<double, SelectionTrace> select_cv(
    const EventSample& sample, const AssociatedKernel& kernel,
    const BandwidthGrid& grid, const std::vector<double>& estimation_grid);

// Distance from t to its k-th nearest sample point, floored at 1e-6.
double knn_bandwidth(const EventSample& sample, std::size_t k_neighbors,
                     double t);

}  // namespace hazd
