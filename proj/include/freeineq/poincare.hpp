#ifndef FREEINEQ_POINCARE_HPP
#define FREEINEQ_POINCARE_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "freeineq/equilibrium.hpp"
#include "freeineq/inequalities.hpp"

namespace freeineq {

// phi(x) = sum_k alpha_k T_k((x - mid) / half) on a support interval.
class TestFunction {
 public:
  TestFunction(SupportInterval support, std::vector<double> coeffs);

  // Interpolates f at degree + 1 Chebyshev points of the interval.
  static TestFunction interpolate(const std::function<double(double)>& f,
                                  SupportInterval support, int degree);
  static TestFunction monomial(SupportInterval support, int power);
  static TestFunction chebyshev(SupportInterval support, int n);

  const SupportInterval& support() const { return support_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  double operator()(double x) const;
  double derivative(double x) const;
  // (phi(x) - phi(y)) / (x - y), with phi'(x) when |x - y| < 1e-7 (b - a).
  double difference_quotient(double x, double y) const;

 private:
  SupportInterval support_;
  std::vector<double> coeffs_;
};

// First inequality: int phi'^2 dmu_V >= (rho / 2 pi^2) x (kernel double integral).
// Reports here carry lhs >= rhs, and gap = lhs - rhs.
InequalityReport first_poincare(const EquilibriumResult& eq, double rho,
                                const TestFunction& phi);
// The kernel double integral evaluated directly on a tensor grid.
double first_poincare_quadrature_rhs(const EquilibriumResult& eq, double rho,
                                     const TestFunction& phi, int nodes = 0);
// Double integral of (D phi)^2 (-2ab + (a+b)(x+y) - 2xy) / (2 sqrt((x-a)(b-x)) sqrt((y-a)(b-y)))
// over the support of phi; equals pi^2 sum n alpha_n^2.
double chebyshev_kernel_integral(const TestFunction& phi, int nodes = 0);

struct KernelValue {
  double lambda;
  double value;
  std::string method;  // closed-form | quadrature
};

KernelValue number_kernel(double lambda, double x, double y);

// Probability measure proportional to (1 - x^2)^{lambda - 1/2} on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gegenbauer_rule(double lambda, int n);
// Gegenbauer polynomial C_n^lambda (T_n / n for lambda = 0).
double gegenbauer(double lambda, int n, double x);
// int C_n^lambda(x)^2 nu_lambda(dx), computed once per (lambda, n).
double gegenbauer_norm(double lambda, int n);

struct GegenbauerForms {
  std::vector<double> alpha;  // coordinates in the orthonormal basis
  double jacobi;              // sum n (n + 2 lambda) alpha_n^2
  double kernel;              // 2 sum n alpha_n^2
  double variance;            // sum_{n >= 1} alpha_n^2
};

GegenbauerForms gegenbauer_forms(double lambda, const TestFunction& phi);
// Kernel double integral of (D phi)^2 H_lambda against nu_lambda x nu_lambda.
double kernel_form_quadrature(double lambda, const TestFunction& phi, int nodes = 96);

std::pair<InequalityReport, InequalityReport> spectral_gap_checks(double lambda,
                                                                  const TestFunction& phi);

// int_0^pi int_0^pi (cos kt - cos ks)(cos lt - cos ls)(1 - cos t cos s) / (cos t - cos s)^2
double watson_orthogonality_check(int k, int l);

double poincare_constant(const Measure& mu, int N = 32);

struct PoincareBounds {
  double diameter;
  double variance;
  double lower;  // 2 / d^2
  double upper;  // 1 / Var
  std::optional<double> lower_convex;
  double constant;
};

PoincareBounds poincare_bounds(const Measure& mu, int N = 32);
// Adds the lower bound (p rho binom(2p, p))^{1/p} / 8 for V - rho x^{2p} convex.
PoincareBounds poincare_bounds(const EquilibriumResult& eq, int p, double rho, int N = 32);

InequalityReport arcsine_comparison(const EquilibriumResult& eq, double rho,
                                    const TestFunction& phi);

std::pair<InequalityReport, InequalityReport> brascamp_lieb_compare(double lambda,
                                                                    const TestFunction& phi);

// phi' is a smooth bump on [lo, hi]; compares the two upper bounds on Var(phi).
struct BrascampLiebWitness {
  double lo;
  double hi;
  double variance;
  double bound_jacobi;   // int phi'^2 (1 - x^2) dnu / (2 lambda + 1)
  double bound_classic;  // int phi'^2 (1 - x^2)^2 / (1 + x^2) dnu / (2 lambda - 1)
};

BrascampLiebWitness brascamp_lieb_witness(double lambda, double lo, double hi);
// Inner witness inside [-1/(2 lambda), 1/(2 lambda)], outer one near the edge.
std::pair<BrascampLiebWitness, BrascampLiebWitness> brascamp_lieb_witness_pair(double lambda);

}  // namespace freeineq

#endif
