#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace hazd {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

// Thrown when the adaptive scheme cannot reach the requested tolerance.
class quadrature_error : public std::runtime_error {
 public:
  quadrature_error(const std::string& msg, double achieved)
      : std::runtime_error(msg), achieved_tolerance(achieved) {}
  double achieved_tolerance;
};

// Adaptive 15-point Gauss-Kronrod on [a, b].
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, double rel_tol = 1e-9,
                     int max_depth = 50);

// Convenience: value only, throws quadrature_error on failure.
double integrate_value(const std::function<double(double)>& f, double a,
                       double b, double abs_tol = 1e-10, double rel_tol = 1e-9);

// Tensorized Gauss-Legendre rule on [a,b] x [c,d] restricted to y <= z
// by mapping the second axis to [y, d]. n points per axis.
double integrate_triangle(const std::function<double(double, double)>& f,
                          double a, double b, double d, int n = 64);

// Nodes and weights of the n-point Gauss-Legendre rule on [a, b].
void gauss_legendre(int n, double a, double b, double* nodes, double* weights);

}  // namespace hazd
