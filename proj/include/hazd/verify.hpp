#pragma once

#include <map>
#include <string>
#include <vector>

#include "hazd/hazard_model.hpp"
#include "hazd/kernels.hpp"

namespace hazd {

struct AssumptionCheck {
  std::string id;  // Def2.1, A2(i), A2(ii), A3, A4, A5, A6, A7, A8, A9
  std::map<std::string, double> fitted_constants;
  bool pass = false;
  double worst_ratio = 0.0;
  std::string note;  // warnings (e.g. support mismatch), unfitted markers
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool all_pass() const;
  std::string to_json() const;
};

struct OracleValues {
  double exact_mean = 0.0;
  double exact_variance = 0.0;
  double bias_expansion = 0.0;
  double variance_equivalent = 0.0;
};

struct AssumptionProbe {
  std::vector<double> t_grid;
  std::vector<double> b_grid;  // subset of (0, 1]
  const HazardModel* model = nullptr;  // for compatibility checks (A4/A8)
  double lambda = 6.0;                 // compatibility offset, > 2e
  double eta = 1.0;
};

// E[k_m(t)] = integral of (1 - F(y)^m) kappa_{t,b}(y) k(y) dy.
double oracle_expectation(const HazardModel& model,
                          const AssociatedKernel& kernel, double b, double t,
                          std::size_t m);

// Exact finite-sample variance; m <= 200 for stable binomial sums.
double oracle_variance_exact(const HazardModel& model,
                             const AssociatedKernel& kernel, double b, double t,
                             std::size_t m);

// Leading bias term k'(t) Lambda + (1/2) k''(t) (Lambda^2 + Var).
double bias_expansion(const HazardModel& model, const AssociatedKernel& kernel,
                      double b, double t);

// Asymptotic variance equivalent alpha_b(t)/m * k(t)/(1 - F(t)).
double variance_equivalent(const HazardModel& model,
                           const AssociatedKernel& kernel, double b, double t,
                           std::size_t m);

AssumptionReport check_assumptions(const AssociatedKernel& kernel,
                                   const AssumptionProbe& probe);

}  // namespace hazd
