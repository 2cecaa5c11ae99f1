#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hazd/bandwidth.hpp"
#include "hazd/estimators.hpp"
#include "hazd/hazard_model.hpp"
#include "hazd/kernels.hpp"

namespace hazd {

// Counter-based stream: rep index r of master seed s always yields the same
// generator state, independent of scheduling.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index);

// Number of worker threads: HAZD_THREADS env var if set, else OpenMP default.
int worker_threads();

// Deterministic parallel loop; thread count 1 runs the plain serial loop.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body);

EventSample sample_event_times(const HazardModel& model, std::size_t m,
                               std::uint64_t seed);

// Trapezoid integral of (khat - k)^2 over [t1, t2]; grid must span it.
double mise(const EstimateCurve& curve, const HazardModel& model, double t1,
            double t2);

enum class TableMethod {
  GammaGlobalMinimax,
  GammaLocalMinimax,
  GammaCv,
  GaussianCv,
  GaussianFixed,
  LognormalRatio,
  NearestNeighbor,
  FixedBandwidth,
};

std::string method_name(TableMethod method);
TableMethod parse_method(const std::string& name);

struct TableScenario {
  HazardModel model;
  double t_lo = 0.0;
  double t_hi = 600.0;
  std::size_t grid_points = 512;
  double fixed_bandwidth = 0.5;   // FixedBandwidth / GaussianFixed
  std::size_t k_neighbors = 60;   // NearestNeighbor
};

struct MethodRow {
  std::string method;
  std::size_t m = 0;
  double mise_mean = 0.0;
  double mise_sd = 0.0;
  double mse0_mean = 0.0;
  double mse0_sd = 0.0;
};

struct McReport {
  std::string scenario;
  std::vector<MethodRow> rows;
  std::size_t replications = 0;
  std::uint64_t master_seed = 0;
  double wall_time_s = 0.0;
};

McReport run_table(const TableScenario& scenario,
                   const std::vector<TableMethod>& methods,
                   const std::vector<std::size_t>& m_list, std::size_t reps,
                   std::uint64_t master_seed, int threads = 0);

// Least-squares slope of log mean MISE against log m, b = bandwidth_rule(m).
double rate_regression(const HazardModel& model, const AssociatedKernel& kernel,
                       const std::vector<std::size_t>& m_list,
                       const std::function<double(std::size_t)>& bandwidth_rule,
                       std::size_t reps, std::uint64_t seed, double t_lo = 0.0,
                       double t_hi = 600.0, int threads = 0);

// KS distance of standardized khat_m(t) replicates to the standard normal.
double normality_experiment(const HazardModel& model,
                            const AssociatedKernel& kernel, double t,
                            std::size_t m, double b, std::size_t reps,
                            std::uint64_t seed, int threads = 0);

}  // namespace hazd
