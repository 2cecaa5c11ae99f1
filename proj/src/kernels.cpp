#include "hazd/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "hazd/quadrature.hpp"
#include "hazd/special.hpp"

namespace hazd {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

double gamma_log_density(double rho, double b, double y) {
  return (rho - 1.0) * std::log(y) - y / b - rho * std::log(b) -
         std::lgamma(rho);
}

// Exact integral of kappa^r for the Gamma kernel, any rho >= 1, in log space:
//   Gamma(r*rho - r + 1) * r^(r - 1 - r*rho) / (b^(r-1) * Gamma(rho)^r)
double gamma_power_integral(double rho, double b, int r) {
  const double rr = static_cast<double>(r);
  return std::exp(std::lgamma(rr * rho - rr + 1.0) +
                  (rr - 1.0 - rr * rho) * std::log(rr) -
                  (rr - 1.0) * std::log(b) - rr * std::lgamma(rho));
}

}  // namespace

GammaShape gamma_shape(double t, double b) {
  if (t < 0.0) throw std::domain_error("gamma_shape: t must be nonnegative");
  if (b <= 0.0) throw std::domain_error("gamma_shape: b must be positive");
  GammaShape s;
  s.scale = b;
  if (t >= 2.0 * b) {
    s.rho = t / b;
    s.regime = GammaRegime::Interior;
  } else {
    const double r = t / b;
    s.rho = 0.25 * r * r + 1.0;
    s.regime = GammaRegime::Boundary;
  }
  return s;
}

double density(const AssociatedKernel& kernel, double t, double b, double y) {
  if (b <= 0.0) throw std::domain_error("density: b must be positive");
  switch (kernel.family) {
    case KernelFamily::GammaNoInteriorBias: {
      const GammaShape s = gamma_shape(t, b);
      if (y < 0.0) return 0.0;
      if (y == 0.0) return s.rho == 1.0 ? 1.0 / b : 0.0;
      return std::exp(gamma_log_density(s.rho, b, y));
    }
    case KernelFamily::GaussianSymmetric: {
      const double z = (y - t) / b;
      return std::exp(-0.5 * z * z) / (b * kSqrt2Pi);
    }
    case KernelFamily::Lognormal: {
      if (t <= 0.0)
        throw std::domain_error("density: lognormal kernel requires t > 0");
      if (y <= 0.0) return 0.0;
      const double z = (std::log(y) - std::log(t)) / std::sqrt(b);
      return std::exp(-0.5 * z * z) / (y * std::sqrt(b) * kSqrt2Pi);
    }
  }
  return 0.0;
}

double kernel_mean(const AssociatedKernel& kernel, double t, double b) {
  switch (kernel.family) {
    case KernelFamily::GammaNoInteriorBias:
      return gamma_shape(t, b).rho * b;
    case KernelFamily::GaussianSymmetric:
      return t;
    case KernelFamily::Lognormal:
      return t * std::exp(0.5 * b);
  }
  return t;
}

double kernel_mode(const AssociatedKernel& kernel, double t, double b) {
  switch (kernel.family) {
    case KernelFamily::GammaNoInteriorBias:
      return (gamma_shape(t, b).rho - 1.0) * b;
    case KernelFamily::GaussianSymmetric:
      return t;
    case KernelFamily::Lognormal:
      return t * std::exp(-b);
  }
  return t;
}

double kernel_cdf(const AssociatedKernel& kernel, double t, double b, double y) {
  if (b <= 0.0) throw std::domain_error("kernel_cdf: b must be positive");
  switch (kernel.family) {
    case KernelFamily::GammaNoInteriorBias: {
      const GammaShape s = gamma_shape(t, b);
      if (y <= 0.0) return 0.0;
      return gamma_p(s.rho, y / b);
    }
    case KernelFamily::GaussianSymmetric:
      return normal_cdf((y - t) / b);
    case KernelFamily::Lognormal: {
      if (t <= 0.0)
        throw std::domain_error("kernel_cdf: lognormal kernel requires t > 0");
      if (y <= 0.0) return 0.0;
      return normal_cdf((std::log(y) - std::log(t)) / std::sqrt(b));
    }
  }
  return 0.0;
}

double tail_quantile(const AssociatedKernel& kernel, double t, double b,
                     double p) {
  if (p <= 0.0 || p >= 1.0)
    throw std::domain_error("tail_quantile: p must be in (0,1)");
  double lo = kernel.family == KernelFamily::GaussianSymmetric ? t - b : 0.0;
  double hi = std::max(t, 0.0) + b;
  int iters = 0;
  while (kernel_cdf(kernel, t, b, lo) > p) {
    lo -= 2.0 * (hi - lo);
    if (++iters > 200)
      throw std::runtime_error("tail_quantile: lower bracket failure");
  }
  iters = 0;
  while (kernel_cdf(kernel, t, b, hi) < p) {
    hi += 2.0 * (hi - lo);
    if (++iters > 200)
      throw std::runtime_error("tail_quantile: upper bracket failure");
  }
  while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (kernel_cdf(kernel, t, b, mid) >= p)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

KernelMoments moments_quadrature(const AssociatedKernel& kernel, double t,
                                 double b) {
  if (b <= 0.0 || b > 1.0)
    throw std::domain_error("moments_quadrature: b must be in (0,1]");
  const double hi = tail_quantile(kernel, t, b, 1.0 - 1e-12);
  const double lo = kernel.family == KernelFamily::GaussianSymmetric
                        ? tail_quantile(kernel, t, b, 1e-12)
                        : 0.0;
  const double mode = kernel_mode(kernel, t, b);
  auto split = [&](const std::function<double(double)>& f) {
    if (mode > lo && mode < hi) {
      return integrate_value(f, lo, mode, 1e-12, 1e-10) +
             integrate_value(f, mode, hi, 1e-12, 1e-10);
    }
    return integrate_value(f, lo, hi, 1e-12, 1e-10);
  };
  const double mean =
      split([&](double y) { return y * density(kernel, t, b, y); });
  KernelMoments m;
  m.lambda_bias = mean - t;
  m.variance_z = split([&](double y) {
    const double d = y - mean;
    return d * d * density(kernel, t, b, y);
  });
  m.alpha = split([&](double y) {
    const double k = density(kernel, t, b, y);
    return k * k;
  });
  m.beta = split([&](double y) {
    const double k = density(kernel, t, b, y);
    return k * k * k;
  });
  m.sup_density = density(kernel, t, b, mode);
  return m;
}

KernelMoments moments(const AssociatedKernel& kernel, double t, double b) {
  if (b <= 0.0 || b > 1.0)
    throw std::domain_error("moments: b must be in (0,1]");
  switch (kernel.family) {
    case KernelFamily::GammaNoInteriorBias: {
      const GammaShape s = gamma_shape(t, b);
      KernelMoments m;
      if (s.regime == GammaRegime::Interior) {
        m.lambda_bias = 0.0;
        m.variance_z = b * t;
        m.alpha = gamma_power_integral(s.rho, b, 2);
        m.beta = gamma_power_integral(s.rho, b, 3);
      } else {
        m.lambda_bias = 0.25 * t * t / b + b - t;
        m.variance_z = 0.25 * t * t + b * b;
        const double hi = tail_quantile(kernel, t, b, 1.0 - 1e-12);
        const double mode = kernel_mode(kernel, t, b);
        auto pow_int = [&](int r) {
          auto f = [&](double y) {
            return std::pow(density(kernel, t, b, y), r);
          };
          if (mode > 0.0 && mode < hi) {
            return integrate_value(f, 0.0, mode, 1e-12, 1e-10) +
                   integrate_value(f, mode, hi, 1e-12, 1e-10);
          }
          return integrate_value(f, 0.0, hi, 1e-12, 1e-10);
        };
        m.alpha = pow_int(2);
        m.beta = pow_int(3);
      }
      m.sup_density = density(kernel, t, b, kernel_mode(kernel, t, b));
      return m;
    }
    case KernelFamily::GaussianSymmetric: {
      KernelMoments m;
      m.lambda_bias = 0.0;
      m.variance_z = b * b;
      m.alpha = 1.0 / (2.0 * b * std::sqrt(M_PI));
      m.beta = 1.0 / (2.0 * M_PI * std::sqrt(3.0) * b * b);
      m.sup_density = 1.0 / (b * kSqrt2Pi);
      return m;
    }
    case KernelFamily::Lognormal:
      return moments_quadrature(kernel, t, b);
  }
  throw std::logic_error("moments: unknown kernel family");
}

}  // namespace hazd
