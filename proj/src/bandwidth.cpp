#include "hazd/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace hazd {

namespace {

BandwidthGrid finalize_grid(std::set<double> vals, std::size_t m,
                            double gamma_exponent) {
  if (vals.empty())
    throw std::runtime_error(
        "bandwidth grid is empty after filtering; widen the construction");
  BandwidthGrid g;
  g.values.assign(vals.begin(), vals.end());
  if (g.values.size() > m) g.values.resize(m);
  g.m = m;
  for (double b : g.values)
    g.s_sum += 1.0 / (static_cast<double>(m) * std::pow(b, gamma_exponent));
  return g;
}

double trapezoid(const std::vector<double>& grid,
                 const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    s += 0.5 * (f[i] + f[i - 1]) * (grid[i] - grid[i - 1]);
  return s;
}

}  // namespace

BandwidthGrid grid_local(std::size_t m, double gamma_exponent,
                         bool exempt_seed) {
  if (m < 8) throw std::domain_error("grid_local: m must be >= 8");
  const double lm = std::log(static_cast<double>(m));
  const double md = static_cast<double>(m);
  const double filter = std::min(1.0, 6.0 / lm);  // on sqrt(b)
  std::set<double> vals;
  const double seed = 400.0 * (lm / md) * (lm / md);
  if (seed <= 1.0 && (exempt_seed || std::sqrt(seed) >= filter))
    vals.insert(seed);
  const long imax = static_cast<long>(std::floor(10.0 * lm));
  for (long i = 1; i <= imax; i += 4) {  // (i-1) = 0 mod 4
    const double b = static_cast<double>(i) * lm * lm / md;
    if (b <= 1.0 && std::sqrt(b) >= filter) vals.insert(b);
  }
  return finalize_grid(std::move(vals), m, gamma_exponent);
}

BandwidthGrid grid_global(std::size_t m, double gamma_exponent) {
  if (m < 8) throw std::domain_error("grid_global: m must be >= 8");
  const double md = static_cast<double>(m);
  const double filter = std::min(1.0, 6.0 / std::log(md));
  const double denom = std::pow(md, 2.0 / 3.0);
  const long imax = static_cast<long>(std::floor(10.0 * std::sqrt(md)));
  std::set<double> vals;
  for (long i = 10; i <= imax; i += 10) {
    const double b = static_cast<double>(i) / denom;
    if (b <= 1.0 && std::sqrt(b) >= filter) vals.insert(b);
  }
  return finalize_grid(std::move(vals), m, gamma_exponent);
}

double penalty_local(double b, const PenaltyConfig& cfg, std::size_t m) {
  const double md = static_cast<double>(m);
  return cfg.kappa0 * std::log(md) * cfg.k_sup /
         (md * std::pow(b, cfg.gamma_exponent));
}

double penalty_global(double b, const PenaltyConfig& cfg, std::size_t m) {
  const double pre = cfg.kappa1 * (1.0 + cfg.epsilon) * (1.0 + cfg.epsilon);
  return pre * cfg.k_sup / (static_cast<double>(m) * std::sqrt(b));
}

double k_sup_plugin(const EventSample& sample, const AssociatedKernel& kernel,
                    const BandwidthGrid& grid,
                    const std::vector<double>& estimation_grid) {
  const double b_pilot = grid.values.back();
  double sup = 0.0;
  for (double t : estimation_grid)
    sup = std::max(sup, hazard_estimate(sample, kernel, b_pilot, t));
  return sup;
}

std::pair<double, SelectionTrace> select_local(const EventSample& sample,
                                               const AssociatedKernel& kernel,
                                               const BandwidthGrid& grid,
                                               const PenaltyConfig& cfg,
                                               double t) {
  const std::size_t n = grid.values.size();
  std::vector<double> khat(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    khat[i] = hazard_estimate(sample, kernel, grid.values[i], t);
    v[i] = penalty_local(grid.values[i], cfg, sample.m());
  }
  SelectionTrace trace;
  trace.method = SelectionMethod::GlLocal;
  std::size_t best = 0;
  double best_crit = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t up = std::max(i, j);  // b' v b on an ascending grid
      const double d = khat[j] - khat[up];
      a = std::max(a, d * d - v[j]);
    }
    const double crit = a + v[i];
    trace.records.push_back({grid.values[i], a, v[i], crit});
    if (i == 0 || crit <= best_crit) {  // ties resolve to the largest b
      best = i;
      best_crit = crit;
    }
  }
  trace.chosen = grid.values[best];
  return {trace.chosen, trace};
}

std::pair<double, SelectionTrace> select_global(
    const EventSample& sample, const AssociatedKernel& kernel,
    const BandwidthGrid& grid, const PenaltyConfig& cfg,
    const std::vector<double>& estimation_grid) {
  if (estimation_grid.size() < 2)
    throw std::domain_error("select_global: need >= 2 estimation points");
  const std::size_t n = grid.values.size();
  const std::size_t ng = estimation_grid.size();
  std::vector<std::vector<double>> khat(n, std::vector<double>(ng));
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t g = 0; g < ng; ++g)
      khat[i][g] =
          hazard_estimate(sample, kernel, grid.values[i], estimation_grid[g]);
    v[i] = penalty_global(grid.values[i], cfg, sample.m());
  }
  SelectionTrace trace;
  trace.method = SelectionMethod::GlGlobal;
  std::vector<double> sq(ng);
  std::size_t best = 0;
  double best_crit = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t up = std::max(i, j);
      for (std::size_t g = 0; g < ng; ++g) {
        const double d = khat[j][g] - khat[up][g];
        sq[g] = d * d;
      }
      a = std::max(a, trapezoid(estimation_grid, sq) - v[j]);
    }
    const double crit = a + v[i];
    trace.records.push_back({grid.values[i], a, v[i], crit});
    if (i == 0 || crit <= best_crit) {
      best = i;
      best_crit = crit;
    }
  }
  trace.chosen = grid.values[best];
  return {trace.chosen, trace};
}

std::pair<double, SelectionTrace> select_cv(
    const EventSample& sample, const AssociatedKernel& kernel,
    const BandwidthGrid& grid, const std::vector<double>& estimation_grid) {
  const std::size_t m = sample.m();
  if (m < 3) throw std::domain_error("select_cv: need m >= 3");
  const std::size_t n = grid.values.size();
  const std::size_t ng = estimation_grid.size();
  SelectionTrace trace;
  trace.method = SelectionMethod::CrossValidation;
  std::vector<double> sq(ng);
  std::size_t best = 0;
  double best_crit = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = grid.values[i];
    for (std::size_t g = 0; g < ng; ++g) {
      const double k = hazard_estimate(sample, kernel, b, estimation_grid[g]);
      sq[g] = k * k;
    }
    const double l2 = trapezoid(estimation_grid, sq);
    // leave-one-out: dropping tau_(i) shifts the ranks of later observations
    double loo = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double t = sample.times[r];
      double s = 0.0;
      for (std::size_t j = 0; j < r; ++j)
        s += density(kernel, t, b, sample.times[j]) /
             static_cast<double>(m - j - 1);
      for (std::size_t j = r + 1; j < m; ++j)
        s += density(kernel, t, b, sample.times[j]) /
             static_cast<double>(m - j);
      loo += s / static_cast<double>(m - r);
    }
    const double crit = l2 - 2.0 * loo;
    trace.records.push_back({b, l2, -2.0 * loo, crit});
    if (i == 0 || crit <= best_crit) {
      best = i;
      best_crit = crit;
    }
  }
  trace.chosen = grid.values[best];
  return {trace.chosen, trace};
}

double knn_bandwidth(const EventSample& sample, std::size_t k_neighbors,
                     double t) {
  if (k_neighbors < 1 || k_neighbors > sample.m())
    throw std::domain_error("knn_bandwidth: k_neighbors out of range");
  std::vector<double> d(sample.m());
  for (std::size_t i = 0; i < sample.m(); ++i)
    d[i] = std::abs(sample.times[i] - t);
  std::nth_element(d.begin(), d.begin() + (k_neighbors - 1), d.end());
  return std::max(d[k_neighbors - 1], 1e-6);
}

}  // namespace hazd
