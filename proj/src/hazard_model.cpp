#include "hazd/hazard_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hazd/special.hpp"

namespace hazd {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014327;

double bump_pdf(const Bump& g, double t) {
  const double z = (t - g.center) / g.sd;
  return g.weight * kInvSqrt2Pi / g.sd * std::exp(-0.5 * z * z);
}
}  // namespace

HazardModel::HazardModel(HazardFamily f, double tmax)
    : family_(f), t_max_(tmax) {}

void HazardModel::validate_nonnegative() {
  const int n = 4096;
  double sup = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = t_max_ * i / n;
    const double k = hazard(t);
    if (k < 0.0)
      throw std::domain_error("HazardModel: hazard is negative on [0, t_max]");
    sup = std::max(sup, k);
  }
  sup_hazard_ = sup;
}

HazardModel HazardModel::const_exp(double a, double c, double d) {
  HazardModel m(HazardFamily::ConstExp, 600.0);
  m.a = a;
  m.c = c;
  m.d = d;
  m.validate_nonnegative();
  return m;
}

HazardModel HazardModel::abs_linear(double beta) {
  HazardModel m(HazardFamily::AbsLinear, 600.0);
  m.beta = beta;
  m.validate_nonnegative();
  return m;
}

HazardModel HazardModel::bump_mixture(double a, std::vector<Bump> bumps) {
  HazardModel m(HazardFamily::BumpMixture, 600.0);
  m.a = a;
  m.bumps = std::move(bumps);
  for (const Bump& g : m.bumps) {
    if (g.sd <= 0.0) throw std::domain_error("bump_mixture: sd must be > 0");
  }
  m.validate_nonnegative();
  return m;
}

HazardModel HazardModel::constant(double a) {
  HazardModel m(HazardFamily::Constant, 600.0);
  m.a = a;
  m.validate_nonnegative();
  return m;
}

HazardModel HazardModel::tabulated(std::vector<double> grid,
                                   std::vector<double> values) {
  if (grid.size() < 2 || grid.size() != values.size())
    throw std::domain_error("tabulated: need matching grid/values, size >= 2");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::domain_error("tabulated: grid must be ascending");
  HazardModel m(HazardFamily::Tabulated, grid.back());
  m.tab_grid = std::move(grid);
  m.tab_values = std::move(values);
  m.validate_nonnegative();
  return m;
}

double HazardModel::hazard(double t) const {
  switch (family_) {
    case HazardFamily::ConstExp:
      return a + c * std::exp(-d * t);
    case HazardFamily::AbsLinear:
      return beta * std::abs(t / 3.0 - 30.0);
    case HazardFamily::BumpMixture: {
      double k = a;
      for (const Bump& g : bumps) k += bump_pdf(g, t);
      return k;
    }
    case HazardFamily::Constant:
      return a;
    case HazardFamily::Tabulated: {
      if (t <= tab_grid.front()) return tab_values.front();
      if (t >= tab_grid.back()) return tab_values.back();
      const auto it = std::upper_bound(tab_grid.begin(), tab_grid.end(), t);
      const size_t i = static_cast<size_t>(it - tab_grid.begin());
      const double w = (t - tab_grid[i - 1]) / (tab_grid[i] - tab_grid[i - 1]);
      return (1.0 - w) * tab_values[i - 1] + w * tab_values[i];
    }
  }
  return 0.0;
}

double HazardModel::hazard_d1(double t) const {
  switch (family_) {
    case HazardFamily::ConstExp:
      return -c * d * std::exp(-d * t);
    case HazardFamily::AbsLinear:
      return t < 90.0 ? -beta / 3.0 : beta / 3.0;
    case HazardFamily::BumpMixture: {
      double s = 0.0;
      for (const Bump& g : bumps)
        s += bump_pdf(g, t) * (-(t - g.center) / (g.sd * g.sd));
      return s;
    }
    case HazardFamily::Constant:
      return 0.0;
    case HazardFamily::Tabulated: {
      if (t <= tab_grid.front() || t >= tab_grid.back()) return 0.0;
      const auto it = std::upper_bound(tab_grid.begin(), tab_grid.end(), t);
      const size_t i = static_cast<size_t>(it - tab_grid.begin());
      return (tab_values[i] - tab_values[i - 1]) /
             (tab_grid[i] - tab_grid[i - 1]);
    }
  }
  return 0.0;
}

double HazardModel::hazard_d2(double t) const {
  switch (family_) {
    case HazardFamily::ConstExp:
      return c * d * d * std::exp(-d * t);
    case HazardFamily::BumpMixture: {
      double s = 0.0;
      for (const Bump& g : bumps) {
        const double v = g.sd * g.sd;
        const double z2 = (t - g.center) * (t - g.center) / v;
        s += bump_pdf(g, t) * (z2 - 1.0) / v;
      }
      return s;
    }
    case HazardFamily::AbsLinear:
    case HazardFamily::Constant:
    case HazardFamily::Tabulated:
      return 0.0;
  }
  return 0.0;
}

double HazardModel::cumulative_hazard(double t) const {
  if (t < 0.0)
    throw std::domain_error("cumulative_hazard: t must be nonnegative");
  switch (family_) {
    case HazardFamily::ConstExp:
      return a * t + c / d * (1.0 - std::exp(-d * t));
    case HazardFamily::AbsLinear: {
      // |t/3 - 30| crosses zero at t = 90
      if (t <= 90.0) return beta * (30.0 * t - t * t / 6.0);
      return beta * 1350.0 + beta * (t * t / 6.0 - 30.0 * t + 1350.0);
    }
    case HazardFamily::BumpMixture: {
      double s = a * t;
      for (const Bump& g : bumps) {
        s += g.weight * (normal_cdf((t - g.center) / g.sd) -
                         normal_cdf(-g.center / g.sd));
      }
      return s;
    }
    case HazardFamily::Constant:
      return a * t;
    case HazardFamily::Tabulated: {
      double acc = 0.0;
      double prev_t = 0.0;
      double prev_k = hazard(0.0);
      for (size_t i = 0; i < tab_grid.size(); ++i) {
        const double gi = tab_grid[i];
        if (gi <= 0.0) continue;
        const double seg_end = std::min(gi, t);
        if (seg_end > prev_t) {
          const double k_end = hazard(seg_end);
          acc += 0.5 * (prev_k + k_end) * (seg_end - prev_t);
          prev_t = seg_end;
          prev_k = k_end;
        }
        if (gi >= t) break;
      }
      if (t > prev_t) acc += tab_values.back() * (t - prev_t);
      return acc;
    }
  }
  return 0.0;
}

double HazardModel::cdf(double t) const {
  return -std::expm1(-cumulative_hazard(t));
}

double HazardModel::pdf(double t) const {
  return hazard(t) * std::exp(-cumulative_hazard(t));
}

double HazardModel::inverse_cumulative(double e) const {
  if (e < 0.0)
    throw std::domain_error("inverse_cumulative: e must be nonnegative");
  if (e == 0.0) return 0.0;
  if (family_ == HazardFamily::Constant) return e / a;
  double lo = 0.0;
  double hi = 1.0;
  int iters = 0;
  while (cumulative_hazard(hi) < e) {
    lo = hi;
    hi *= 2.0;
    if (++iters > 400)
      throw std::runtime_error("inverse_cumulative: bracket failure at e=" +
                               std::to_string(e));
  }
  // Newton with bisection fallback
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double g = cumulative_hazard(x) - e;
    if (g > 0.0)
      hi = x;
    else
      lo = x;
    const double k = hazard(x);
    double next = k > 0.0 ? x - g / k : 0.5 * (lo + hi);
    if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-12 * std::max(1.0, std::abs(x))) {
      return next;
    }
    x = next;
  }
  return x;
}

}  // namespace hazd
