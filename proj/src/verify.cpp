#include "hazd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "hazd/quadrature.hpp"
#include "hazd/special.hpp"

namespace hazd {

namespace {

// survival of the event-time law, extended by 1 below the origin
double survival(const HazardModel& model, double y) {
  if (y <= 0.0) return 1.0;
  return std::exp(-model.cumulative_hazard(y));
}

double cdf_pow(const HazardModel& model, double y, std::size_t m) {
  if (y <= 0.0) return 0.0;
  const double a = model.cumulative_hazard(y);
  if (a == 0.0) return 0.0;
  const double log_f = std::log1p(-std::exp(-a));  // log F(y)
  return std::exp(static_cast<double>(m) * log_f);
}

// I_m(y) = sum_{i=0}^{m-1} C(m,i) F^i (1-F)^{m-i} / (m-i), log-sum-exp
double binomial_risk_sum(const HazardModel& model, double y, std::size_t m) {
  const double a = y > 0.0 ? model.cumulative_hazard(y) : 0.0;
  const double log_s = -a;  // log(1-F)
  if (a == 0.0) return std::exp(static_cast<double>(m) * log_s) /
                       static_cast<double>(m);
  const double log_f = std::log1p(-std::exp(-a));
  const std::size_t mm = m;
  double max_l = -std::numeric_limits<double>::infinity();
  std::vector<double> ls(mm);
  for (std::size_t i = 0; i < mm; ++i) {
    ls[i] = log_binom(static_cast<long>(mm), static_cast<long>(i)) +
            static_cast<double>(i) * log_f +
            static_cast<double>(mm - i) * log_s -
            std::log(static_cast<double>(mm - i));
    max_l = std::max(max_l, ls[i]);
  }
  if (!std::isfinite(max_l)) return 0.0;
  double s = 0.0;
  for (double l : ls) s += std::exp(l - max_l);
  return std::exp(max_l) * s;
}

// adaptive quadrature split at the kernel mode
double integrate_mode_split(const std::function<double(double)>& f, double lo,
                            double mode, double hi, double abs_tol,
                            double rel_tol) {
  if (mode > lo && mode < hi)
    return integrate_value(f, lo, mode, abs_tol, rel_tol) +
           integrate_value(f, mode, hi, abs_tol, rel_tol);
  return integrate_value(f, lo, hi, abs_tol, rel_tol);
}

}  // namespace

double oracle_expectation(const HazardModel& model,
                          const AssociatedKernel& kernel, double b, double t,
                          std::size_t m) {
  if (m < 1) throw std::domain_error("oracle_expectation: m must be >= 1");
  const double lo = std::max(0.0, kernel.support_lower());
  const double hi = tail_quantile(kernel, t, b, 1.0 - 1e-12);
  const auto f = [&](double y) {
    return (1.0 - cdf_pow(model, y, m)) * density(kernel, t, b, y) *
           model.hazard(y);
  };
  return integrate_mode_split(f, lo, kernel_mode(kernel, t, b), hi, 1e-13,
                              1e-12);
}

double oracle_variance_exact(const HazardModel& model,
                             const AssociatedKernel& kernel, double b, double t,
                             std::size_t m) {
  if (m < 1 || m > 200)
    throw std::domain_error("oracle_variance_exact: m must be in [1, 200]");
  const double md = static_cast<double>(m);
  const double lo = std::max(0.0, kernel.support_lower());
  const double hi12 = tail_quantile(kernel, t, b, 1.0 - 1e-12);
  const auto f1 = [&](double y) {
    const double kap = density(kernel, t, b, y);
    return kap * kap * model.hazard(y) * binomial_risk_sum(model, y, m);
  };
  const double term1 =
      integrate_mode_split(f1, lo, kernel_mode(kernel, t, b), hi12, 1e-13,
                           1e-11);

  const double hi10 = tail_quantile(kernel, t, b, 1.0 - 1e-10);
  const auto f2 = [&](double y, double z) {
    const double fy = 1.0 - survival(model, y);
    const double fz = 1.0 - survival(model, z);
    const double fym = cdf_pow(model, y, m);
    const double fzm = cdf_pow(model, z, m);
    double ratio;  // (F(z)^m - F(y)^m) / (F(z) - F(y)), stable near y = z
    if (fz - fy > 1e-9) {
      ratio = (fzm - fym) / (fz - fy);
    } else {
      ratio = md * std::pow(0.5 * (fy + fz), md - 1.0);
    }
    const double core = fzm - fym * fzm - (1.0 - fy) * ratio;
    if (!std::isfinite(core))
      throw std::runtime_error(
          "oracle_variance_exact: non-finite integrand at y=" +
          std::to_string(y));
    return core * density(kernel, t, b, y) * density(kernel, t, b, z) *
           model.hazard(y) * model.hazard(z);
  };
  const double term2 = 2.0 * integrate_triangle(f2, lo, hi10, hi10, 64);
  return term1 + term2;
}

double bias_expansion(const HazardModel& model, const AssociatedKernel& kernel,
                      double b, double t) {
  const KernelMoments mo = moments(kernel, t, b);
  const double lam = mo.lambda_bias;
  return model.hazard_d1(t) * lam +
         0.5 * model.hazard_d2(t) * (lam * lam + mo.variance_z);
}

double variance_equivalent(const HazardModel& model,
                           const AssociatedKernel& kernel, double b, double t,
                           std::size_t m) {
  const KernelMoments mo = moments(kernel, t, b);
  return mo.alpha / static_cast<double>(m) * model.hazard(t) /
         survival(model, t);
}

bool AssumptionReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const AssumptionCheck& c) { return c.pass; });
}

std::string AssumptionReport::to_json() const {
  nlohmann::json root = nlohmann::json::array();
  for (const AssumptionCheck& c : checks) {
    nlohmann::json j;
    j["id"] = c.id;
    j["pass"] = c.pass;
    j["worst_ratio"] = c.worst_ratio;
    j["note"] = c.note;
    j["fitted_constants"] = c.fitted_constants;
    root.push_back(j);
  }
  return root.dump(2);
}

namespace {

// bound exponents are stated per b^gamma; the Gaussian family keeps that
// convention via sd = sqrt(b) (Var(Z) = b)
double effective_scale(const AssociatedKernel& kernel, double b) {
  return kernel.family == KernelFamily::GaussianSymmetric ? std::sqrt(b) : b;
}

bool in_support(const AssociatedKernel& kernel, double t) {
  if (kernel.family == KernelFamily::Lognormal) return t > 0.0;
  return t >= kernel.support_lower();
}

std::vector<double> compat_probe_points(const AssociatedKernel& kernel,
                                        double t, double lambda) {
  std::vector<double> ys;
  const double y_max = std::max(4.0 * (t + lambda), 100.0);
  for (int i = 0; i <= 400; ++i) {
    const double y = y_max * i / 400.0;
    if (std::abs(y - t) > lambda && y >= kernel.support_lower()) ys.push_back(y);
  }
  if (kernel.support_lower() < 0.0) {
    for (int i = 1; i <= 50; ++i) {
      const double y = -0.5 * i;
      if (std::abs(y - t) > lambda) ys.push_back(y);
    }
  }
  return ys;
}

}  // namespace

AssumptionReport check_assumptions(const AssociatedKernel& kernel,
                                   const AssumptionProbe& probe) {
  if (probe.t_grid.empty() || probe.b_grid.empty())
    throw std::domain_error("check_assumptions: empty probe grid");
  for (double b : probe.b_grid)
    if (b <= 0.0 || b > 1.0)
      throw std::domain_error("check_assumptions: b-grid must lie in (0, 1]");
  std::vector<double> bs = probe.b_grid;
  std::sort(bs.begin(), bs.end());
  std::vector<double> ts;
  for (double t : probe.t_grid)
    if (in_support(kernel, t)) ts.push_back(t);
  const bool fit_possible = bs.size() >= 2;
  const double gam = kernel.gamma_exponent();

  AssumptionReport report;
  const double b_min = effective_scale(kernel, bs.front());
  const double b_max = effective_scale(kernel, bs.back());

  // Def 2.1: kappa is a pdf on S subset of R+, with E[Z] -> t, Var -> 0
  {
    AssumptionCheck c;
    c.id = "Def2.1";
    double worst = 0.0;
    bool ok = true;
    for (double t : ts) {
      const double lo = kernel.support_lower() < 0.0 ? t - 60.0 * b_max : 0.0;
      const double hi = tail_quantile(kernel, t, b_max, 1.0 - 1e-12);
      const auto dens = [&](double y) { return density(kernel, t, b_max, y); };
      // split at t so a narrow peak sits next to a panel endpoint
      const double mass =
          t > lo && t < hi
              ? integrate_value(dens, lo, t, 1e-10, 1e-9) +
                    integrate_value(dens, t, hi, 1e-10, 1e-9)
              : integrate_value(dens, lo, hi, 1e-10, 1e-9);
      worst = std::max(worst, std::abs(mass - 1.0) / 1e-6);
      const KernelMoments small = moments(kernel, t, b_min);
      const KernelMoments large = moments(kernel, t, b_max);
      const double lam_decay =
          std::abs(small.lambda_bias) /
          std::max(std::abs(large.lambda_bias), 1e-9);
      const double var_decay = small.variance_z / std::max(large.variance_z,
                                                           1e-12);
      if (lam_decay > 0.5 || var_decay > 0.5) ok = false;
      worst = std::max(worst, std::max(lam_decay, var_decay) / 0.5);
    }
    if (kernel.support_lower() < 0.0) {
      ok = false;
      c.note =
          "support extends below 0: mass leaks outside R+, boundary bias at "
          "the origin";
    }
    c.pass = ok && worst <= 1.0 + 1e-9;
    c.worst_ratio = worst;
    report.checks.push_back(c);
  }

  // A2(i)/(ii): |Lambda| <= C1 b^gamma, Var <= C2 b^{2 gamma}
  for (int part = 0; part < 2; ++part) {
    AssumptionCheck c;
    c.id = part == 0 ? "A2(i)" : "A2(ii)";
    bool ok = fit_possible;
    if (!fit_possible) c.note = "insufficient b-grid, constants unfitted";
    for (double t : ts) {
      double fit = 0.0;
      for (double b : bs) {
        const double be = effective_scale(kernel, b);
        const KernelMoments mo = moments(kernel, t, be);
        const double num = part == 0 ? std::abs(mo.lambda_bias) : mo.variance_z;
        const double r = num / std::pow(b, part == 0 ? gam : 2.0 * gam);
        if (!std::isfinite(r)) ok = false;
        fit = std::max(fit, r);
      }
      c.fitted_constants[(part == 0 ? "C1(t=" : "C2(t=") + std::to_string(t) +
                         ")"] = fit;
    }
    c.pass = ok;
    c.worst_ratio = ok ? 1.0 : std::numeric_limits<double>::infinity();
    report.checks.push_back(c);
  }

  // A3: sup kappa <= Cs b^{-gamma}
  {
    AssumptionCheck c;
    c.id = "A3";
    bool ok = fit_possible;
    for (double t : ts) {
      double fit = 0.0;
      for (double b : bs) {
        const double be = effective_scale(kernel, b);
        const double r = moments(kernel, t, be).sup_density * std::pow(b, gam);
        if (!std::isfinite(r)) ok = false;
        fit = std::max(fit, r);
      }
      c.fitted_constants["Cs(t=" + std::to_string(t) + ")"] = fit;
    }
    c.pass = ok;
    c.worst_ratio = ok ? 1.0 : std::numeric_limits<double>::infinity();
    report.checks.push_back(c);
  }

  // A4: compatibility — kappa/(1-F) bounded by G(t) beyond |y-t| > lambda
  {
    AssumptionCheck c;
    c.id = "A4";
    bool ok = probe.model != nullptr;
    if (!ok) c.note = "no model supplied, compatibility unfitted";
    for (double t : ok ? ts : std::vector<double>{}) {
      double fit = 0.0;
      for (double b : bs) {
        const double be = effective_scale(kernel, b);
        for (double y : compat_probe_points(kernel, t, probe.lambda)) {
          const double r =
              density(kernel, t, be, y) / survival(*probe.model, y);
          if (!std::isfinite(r)) ok = false;
          fit = std::max(fit, r);
        }
      }
      c.fitted_constants["G(t=" + std::to_string(t) + ")"] = fit;
    }
    c.pass = ok;
    c.worst_ratio = ok ? 1.0 : std::numeric_limits<double>::infinity();
    report.checks.push_back(c);
  }

  // A5: truncated second moment vanishes at rate faster than b^{2 gamma}
  {
    AssumptionCheck c;
    c.id = "A5";
    bool ok = fit_possible;
    double worst = 0.0;
    for (double t : ts) {
      for (double eta : {0.1, 0.5, 1.0}) {
        const auto trunc = [&](double b) {
          const double be = effective_scale(kernel, b);
          const double mean = kernel_mean(kernel, t, be);
          const double lo = std::max(kernel.support_lower(), mean - 60.0);
          const double hi = tail_quantile(kernel, t, be, 1.0 - 1e-14);
          const auto f = [&](double y) {
            const double d = y - mean;
            return density(kernel, t, be, y) * d * d;
          };
          double v = 0.0;
          if (mean - eta > lo)
            v += integrate_value(f, lo, mean - eta, 1e-14, 1e-10);
          if (mean + eta < hi)
            v += integrate_value(f, mean + eta, hi, 1e-14, 1e-10);
          return v / std::pow(b, 2.0 * gam);
        };
        const double v_small = trunc(bs.front());
        const double v_large = trunc(bs.back());
        const double r = v_small / std::max(0.1 * v_large, 1e-300);
        if (v_small > 0.0 && r > 1.0) ok = false;
        worst = std::max(worst, v_small == 0.0 ? 0.0 : r);
      }
    }
    c.pass = ok;
    c.worst_ratio = worst;
    report.checks.push_back(c);
  }

  // A6: integrable envelopes sup_t kappa and sup_t kappa^2 over compact I
  {
    AssumptionCheck c;
    c.id = "A6";
    bool ok = true;
    const double t_lo = *std::min_element(ts.begin(), ts.end());
    const double t_hi = *std::max_element(ts.begin(), ts.end());
    for (double b : {bs.front(), bs.back()}) {
      const double be = effective_scale(kernel, b);
      const double y_hi = tail_quantile(kernel, t_hi, be, 1.0 - 1e-12) + 1.0;
      const double y_lo = std::max(kernel.support_lower(), -y_hi);
      const int ny = 600, nt = 60;
      double int_psi = 0.0, int_phi = 0.0;
      double prev_psi = 0.0, prev_phi = 0.0;
      for (int i = 0; i <= ny; ++i) {
        const double y = y_lo + (y_hi - y_lo) * i / ny;
        double psi = 0.0;
        for (int j = 0; j <= nt; ++j) {
          double t = t_lo + (t_hi - t_lo) * j / nt;
          if (!in_support(kernel, t)) t = std::max(t, 1e-3);
          psi = std::max(psi, density(kernel, t, be, y));
        }
        const double phi = psi * psi;
        if (i > 0) {
          const double h = (y_hi - y_lo) / ny;
          int_psi += 0.5 * (psi + prev_psi) * h;
          int_phi += 0.5 * (phi + prev_phi) * h;
        }
        prev_psi = psi;
        prev_phi = phi;
      }
      if (!std::isfinite(int_psi) || !std::isfinite(int_phi)) ok = false;
      c.fitted_constants["int_psi(b=" + std::to_string(b) + ")"] = int_psi;
      c.fitted_constants["int_phi(b=" + std::to_string(b) + ")"] = int_phi;
    }
    c.pass = ok;
    c.worst_ratio = ok ? 1.0 : std::numeric_limits<double>::infinity();
    report.checks.push_back(c);
  }

  // A7: alpha >= C3 b^{-gamma}, beta >= C4 b^{-2 gamma} with C3, C4 > 0
  {
    AssumptionCheck c;
    c.id = "A7";
    bool ok = true;
    for (double t : ts) {
      double c3 = std::numeric_limits<double>::infinity();
      double c4 = std::numeric_limits<double>::infinity();
      for (double b : bs) {
        const double be = effective_scale(kernel, b);
        const KernelMoments mo = moments(kernel, t, be);
        c3 = std::min(c3, mo.alpha * std::pow(b, gam));
        c4 = std::min(c4, mo.beta * std::pow(b, 2.0 * gam));
      }
      if (!(c3 > 0.0) || !(c4 > 0.0)) ok = false;
      c.fitted_constants["C3(t=" + std::to_string(t) + ")"] = c3;
      c.fitted_constants["C4(t=" + std::to_string(t) + ")"] = c4;
    }
    c.pass = ok;
    c.worst_ratio = ok ? 1.0 : std::numeric_limits<double>::infinity();
    report.checks.push_back(c);
  }

  // A8: strong compatibility — log-linear decay of sup kappa/(1-F) in 1/b
  {
    AssumptionCheck c;
    c.id = "A8";
    bool ok = probe.model != nullptr && fit_possible;
    if (probe.model == nullptr) c.note = "no model supplied";
    double worst_b = std::numeric_limits<double>::infinity();
    for (double t : ok ? ts : std::vector<double>{}) {
      std::vector<double> xs, ys;  // (1/b, log sup)
      for (double b : bs) {
        const double be = effective_scale(kernel, b);
        double sup = 0.0;
        for (double y : compat_probe_points(kernel, t, probe.lambda))
          sup = std::max(sup,
                         density(kernel, t, be, y) / survival(*probe.model, y));
        if (sup > 1e-290) {
          xs.push_back(1.0 / b);
          ys.push_back(std::log(sup));
        }
      }
      if (xs.size() < 2) {
        // decay so fast the sup underflows for all but the largest b
        c.fitted_constants["B(t=" + std::to_string(t) + ")"] =
            std::numeric_limits<double>::infinity();
        continue;
      }
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
      }
      const double n = static_cast<double>(xs.size());
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      const double bt = -slope;  // kappa/(1-F) < G e^{-B/b}
      const double gt = std::exp((sy - slope * sx) / n);
      c.fitted_constants["B(t=" + std::to_string(t) + ")"] = bt;
      c.fitted_constants["G(t=" + std::to_string(t) + ")"] = gt;
      if (!(bt > 0.0)) ok = false;
      worst_b = std::min(worst_b, bt);
    }
    c.pass = ok;
    c.worst_ratio = ok ? 1.0 : std::numeric_limits<double>::infinity();
    report.checks.push_back(c);
  }

  // A9: t-integrals over compact I bounded by R1 and R2 b^{-gamma(1+eta)}
  {
    AssumptionCheck c;
    c.id = "A9";
    bool ok = true;
    const double t_lo = std::max(
        *std::min_element(ts.begin(), ts.end()),
        kernel.family == KernelFamily::Lognormal ? 1e-3 : 0.0);
    const double t_hi = *std::max_element(ts.begin(), ts.end());
    double r1 = 0.0, r2 = 0.0;
    for (double b : bs) {
      const double be = effective_scale(kernel, b);
      for (double y : {0.0, 0.5 * (t_lo + t_hi), t_hi, 2.0 * t_hi}) {
        if (y < kernel.support_lower()) continue;
        const int nt = 2000;
        double i1 = 0.0, i2 = 0.0, prev1 = 0.0, prev2 = 0.0;
        for (int j = 0; j <= nt; ++j) {
          const double t = t_lo + (t_hi - t_lo) * j / nt;
          const double v = density(kernel, t, be, y);
          if (j > 0) {
            const double h = (t_hi - t_lo) / nt;
            i1 += 0.5 * (v + prev1) * h;
            i2 += 0.5 * (v * v + prev2) * h;
          }
          prev1 = v;
          prev2 = v * v;
        }
        if (!std::isfinite(i1) || !std::isfinite(i2)) ok = false;
        r1 = std::max(r1, i1);
        r2 = std::max(r2, i2 * std::pow(b, gam * (1.0 + probe.eta)));
      }
    }
    c.fitted_constants["R1"] = r1;
    c.fitted_constants["R2"] = r2;
    c.fitted_constants["eta"] = probe.eta;
    c.pass = ok;
    c.worst_ratio = ok ? 1.0 : std::numeric_limits<double>::infinity();
    report.checks.push_back(c);
  }

  return report;
}

}  // namespace hazd
