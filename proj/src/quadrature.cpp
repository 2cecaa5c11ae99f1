#include "hazd/quadrature.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace hazd {

namespace {

// 15-point Kronrod / 7-point Gauss pair (positive abscissae)
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                           0.381830050505119, 0.417959183673469};

struct Panel {
  double gk;      // Kronrod estimate
  double err;     // |Kronrod - Gauss|
  double resabs;  // Kronrod estimate of the integral of |f|
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double resg = 0.0;
  double resk = 0.0;
  double resa = 0.0;
  const double fc = f(c);
  resk = kWgk[7] * fc;
  resg = kWg[3] * fc;
  resa = kWgk[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double flo = f(c - x);
    const double fhi = f(c + x);
    const double fsum = flo + fhi;
    resk += kWgk[j] * fsum;
    resa += kWgk[j] * (std::abs(flo) + std::abs(fhi));
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  Panel p;
  p.gk = resk * h;
  p.err = std::abs((resk - resg) * h);
  p.resabs = resa * std::abs(h);
  return p;
}

struct Interval {
  double a, b;
  Panel p;
};

bool operator<(const Interval& x, const Interval& y) {
  return x.p.err < y.p.err;  // priority queue pops the worst panel
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int max_depth) {
  if (a == b) return {0.0, 0.0};
  // Globally adaptive: repeatedly bisect the panel with the largest error
  // estimate until the summed error meets the tolerance or the panel budget
  // runs out. A global criterion keeps integrands whose values carry more
  // round-off than machine epsilon (e.g. densities formed from lgamma of
  // large arguments) from forcing endless subdivision.
  const std::size_t budget = 240 * static_cast<std::size_t>(max_depth);
  std::priority_queue<Interval> q;
  q.push({a, b, gk15(f, a, b)});
  double sum = q.top().p.gk;
  double err = q.top().p.err;
  double resabs = q.top().p.resabs;
  while (q.size() < budget) {
    const double tol = std::max(abs_tol, rel_tol * std::abs(sum));
    if (err <= tol) break;
    Interval worst = q.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // width at machine precision
    q.pop();
    Interval lo{worst.a, mid, gk15(f, worst.a, mid)};
    Interval hi{mid, worst.b, gk15(f, mid, worst.b)};
    sum += lo.p.gk + hi.p.gk - worst.p.gk;
    err += lo.p.err + hi.p.err - worst.p.err;
    resabs += lo.p.resabs + hi.p.resabs - worst.p.resabs;
    q.push(lo);
    q.push(hi);
  }
  // error at the round-off floor of the integral of |f| counts as converged
  const double tol2 = std::max(abs_tol, rel_tol * std::abs(sum));
  if (err > tol2 * 10.0 && err > 1e-12 * resabs) {
    throw quadrature_error("adaptive quadrature did not converge", err);
  }
  return {sum, err};
}

double integrate_value(const std::function<double(double)>& f, double a,
                       double b, double abs_tol, double rel_tol) {
  return integrate(f, a, b, abs_tol, rel_tol).value;
}

void gauss_legendre(int n, double a, double b, double* nodes, double* weights) {
  const int m = (n + 1) / 2;
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    nodes[i] = xm - xl * z;
    nodes[n - 1 - i] = xm + xl * z;
    weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

double integrate_triangle(const std::function<double(double, double)>& f,
                          double a, double b, double d, int n) {
  std::vector<double> xo(n), wo(n), xi(n), wi(n);
  gauss_legendre(n, a, b, xo.data(), wo.data());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = xo[i];
    if (y >= d) continue;
    gauss_legendre(n, y, d, xi.data(), wi.data());
    double inner = 0.0;
    for (int j = 0; j < n; ++j) inner += wi[j] * f(y, xi[j]);
    total += wo[i] * inner;
  }
  return total;
}

}  // namespace hazd
