#pragma once

#include <vector>

namespace hazd {

enum class HazardFamily { ConstExp, AbsLinear, BumpMixture, Constant, Tabulated };

struct Bump {
  double center;
  double sd;
  double weight = 1.0;
};

// Parametric hazard truth: supplies k, k', k'', the cumulative hazard A,
// and the implied F and f.
class HazardModel {
 public:
  // k(t) = a + c * exp(-d t)
  static HazardModel const_exp(double a, double c, double d);
  // k(t) = beta * |t/3 - 30|
  static HazardModel abs_linear(double beta);
  // k(t) = a + sum of Gaussian density bumps
  static HazardModel bump_mixture(double a, std::vector<Bump> bumps);
  static HazardModel constant(double a);
  // piecewise-linear interpolation of (grid, values); flat beyond the ends
  static HazardModel tabulated(std::vector<double> grid,
                               std::vector<double> values);

  HazardFamily family() const { return family_; }

  double hazard(double t) const;
  double hazard_d1(double t) const;
  double hazard_d2(double t) const;

  // A(t) = integral of k over [0, t]; closed form except for Tabulated
  // (piecewise exact) and quadrature-free throughout.
  double cumulative_hazard(double t) const;
  double cdf(double t) const;  // F = 1 - exp(-A)
  double pdf(double t) const;  // f = k * (1 - F)

  // A^{-1}(e), closed form for Constant, bracketed Newton/bisection to 1e-12
  // relative otherwise.
  double inverse_cumulative(double e) const;

  // sup of k over [0, t_max] (dense grid at construction)
  double sup_hazard() const { return sup_hazard_; }
  double t_max() const { return t_max_; }

  // parameters, exposed for serialization
  double a = 0.0, c = 0.0, d = 0.0, beta = 0.0;
  std::vector<Bump> bumps;
  std::vector<double> tab_grid, tab_values;

 private:
  HazardModel(HazardFamily f, double tmax);
  void validate_nonnegative();

  HazardFamily family_;
  double t_max_;
  double sup_hazard_ = 0.0;
};

}  // namespace hazd
