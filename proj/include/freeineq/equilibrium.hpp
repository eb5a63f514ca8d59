#ifndef FREEINEQ_EQUILIBRIUM_HPP
#define FREEINEQ_EQUILIBRIUM_HPP

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "freeineq/spectral_core.hpp"

namespace freeineq {

enum class PotentialFamily {
  quadratic,
  even_power,
  quadratic_plus_convex,
  polynomial,
  linear_minus_log,
  custom,
};

std::string to_string(PotentialFamily f);

// External potential V with value and first two derivatives.
class Potential {
 public:
  using Fn = std::function<double(double)>;

  // rho * x^2
  static Potential quadratic(double rho);
  // rho * |x|^p, p >= 2
  static Potential even_power(double rho, double p);
  // rho * x^2 + kappa * |x|^p with kappa >= 0, p >= 2
  static Potential quadratic_plus_convex(double rho, double kappa, double p);
  // sum_k coeffs[k] x^k
  static Potential polynomial(std::vector<double> coeffs);
  // r x - s log x on (0, inf)
  static Potential linear_minus_log(double r, double s);
  static Potential custom(std::string name, Fn v, Fn dv, Fn d2v,
                          double wall = -std::numeric_limits<double>::infinity());

  double value(double x) const { return v_(x); }
  double d1(double x) const { return dv_(x); }
  double d2(double x) const { return d2v_(x); }

  PotentialFamily family() const { return family_; }
  const std::string& name() const { return name_; }
  const std::map<std::string, double>& params() const { return params_; }
  double param(const std::string& key) const;

  // Left end of the domain (-inf except for the logarithmic family).
  double wall() const { return wall_; }
  // True when V'(x) -> -inf at the wall, so the support stays off it.
  bool repels_wall() const;

  // x -> V(alpha x + beta)
  Potential affine(double alpha, double beta) const;
  Potential plus_constant(double c) const;

  // Is V - rho |x|^p convex on the domain?  Symbolic per family, with a
  // sampled second-derivative fallback on `probe`.
  bool certifies(double rho, double p, std::string* method = nullptr,
                 double probe = 10.0) const;
  bool is_convex() const { return certifies(0.0, 2.0); }

  // V(x) - 2 log|x| must grow at 1e3 and 1e6.
  void check_growth() const;

 private:
  Potential() = default;

  PotentialFamily family_ = PotentialFamily::custom;
  std::string name_;
  std::map<std::string, double> params_;
  Fn v_, dv_, d2v_;
  double wall_ = -std::numeric_limits<double>::infinity();
};

struct EquilibriumResult {
  Potential potential;
  SupportInterval support;
  ChebMeasure measure;
  double robin_constant;
  double robin_spread;
  double el_residual;
  double energy;
  double mass_drift;
  std::vector<std::string> warnings;
};

struct SupportSolveInfo {
  SupportInterval support;
  int iterations;
  double residual;
  bool hard_edge;
};

SupportSolveInfo solve_support_detailed(const Potential& V);
SupportInterval solve_support(const Potential& V);

// Residuals of the two endpoint conditions on [a, b].
std::pair<double, double> support_conditions(const Potential& V, SupportInterval s);

EquilibriumResult equilibrium_density(const Potential& V, SupportInterval support,
                                      int N = 128);
EquilibriumResult solve_equilibrium(const Potential& V, int N = 128);

// sup |V'(x) - H mu(x)| over the middle 90% of the support.
double euler_lagrange_residual(const Potential& V, const ChebMeasure& mu);
// V(x) - 2 integral log|x - y| mu(dy)
double robin_value(const Potential& V, const ChebMeasure& mu, double x);

struct AffineCovarianceReport {
  double alpha;
  double beta;
  SupportInterval original_support;
  SupportInterval transformed_support;
  double cdf_distance;
  double energy_original;
  double energy_transformed;
  double energy_mismatch;
  bool passed;
};

AffineCovarianceReport affine_covariance_check(const Potential& V, double alpha,
                                               double beta);

}  // namespace freeineq

#endif
