#ifndef FREEINEQ_POSITIVE_AXIS_HPP
#define FREEINEQ_POSITIVE_AXIS_HPP

#include <array>
#include <optional>
#include <vector>

#include "freeineq/equilibrium.hpp"
#include "freeineq/functionals.hpp"
#include "freeineq/inequalities.hpp"
#include "freeineq/poincare.hpp"

namespace freeineq {

// Symmetric partner of a measure mu on [a, b] with a >= 0: the law of +-sqrt(X), X ~ mu,
// each sign with probability 1/2.  When a > 0 it is stored as the law of sqrt(X) on
// [sqrt a, sqrt b]; when a = 0 as a single measure on [-sqrt b, sqrt b].
struct SymmetricMeasure {
  SupportInterval positive_support;  // [a, b]
  std::optional<ChebMeasure> half;
  std::optional<ChebMeasure> whole;

  const ChebMeasure& carrier() const;
  double cdf(double x) const;
  double quantile(double q) const;
  double density(double x) const;
  // -(double integral of log|x - y|) against the symmetric measure.
  double log_energy() const;
  // Law of sqrt(X); rebuilt on 4096 modes when only the whole measure is stored.
  ChebMeasure positive_half() const;
};

SymmetricMeasure symmetrize(const ChebMeasure& mu, int N = 0);
// Builds a symmetric measure from the law of sqrt(X).
SymmetricMeasure symmetrize_half(const ChebMeasure& half, int N = 0);
ChebMeasure desymmetrize(const SymmetricMeasure& sym, int N = 0);
// sup |F_mu - F_{desymmetrize(symmetrize(mu))}| on a grid.
double symmetrization_roundtrip_error(const ChebMeasure& mu);

// V(x^2) / 2 on the real line.
Potential tilde_potential(const Potential& V);

struct EnergyRelation {
  double direct;     // E_V(mu)
  double symmetric;  // 2 E_tildeV(tilde mu)
  double mismatch;
};

EnergyRelation energy_relation(const Potential& V, const ChebMeasure& mu);

SupportInterval mp_support(double r, double s);
// r sqrt((x - a)(b - x)) / (2 pi x) on mp_support(r, s).
ChebMeasure mp_density(double r, double s);
// Closed-form equilibrium of V = r x - s log x.  A warning records any disagreement with
// the numerical support solver; el_residual is the larger of the direct and symmetrized
// residuals.
EquilibriumResult mp_equilibrium(double r, double s);

// Image of mu under x -> (sqrt x + m)^2.
ChebMeasure sqrt_shift(const ChebMeasure& mu, double m);

// W_2 between the laws of sqrt(X) and sqrt(Y): through the symmetric partners, and
// directly from the quantiles of mu and nu.
double w_sqrt(const ChebMeasure& mu, const ChebMeasure& nu);
double w_sqrt_direct(const ChebMeasure& mu, const ChebMeasure& nu);

// I_V(mu) = 2 int x (H mu - V')^2 dmu = 2 I_tildeV(tilde mu), evaluated through the
// symmetric partner and directly on [a, b].
FunctionalValue fisher_plus(const Potential& V, const ChebMeasure& mu);
FunctionalValue fisher_plus_direct(const Potential& V, const ChebMeasure& mu);

FunctionalValue relative_energy_plus(const EquilibriumResult& eq, const ChebMeasure& mu);

// Is V(x^2) - rho x^2 convex on (0, inf)?
bool plus_certifies(const Potential& V, double rho, std::string* method = nullptr);

// transport rho W^2 <= dE, log-Sobolev dE <= I / (2 rho), HWI dE <= sqrt(2 I) W - rho W^2.
std::array<InequalityReport, 3> check_plus_inequalities(const EquilibriumResult& eq,
                                                        double rho, const ChebMeasure& mu);

enum class PlusPoincareForm { automatic, squared_weight, linear_weight };

// squared_weight (s > 0): int x^2 phi'^2 dmu_V >= s / (4 pi^2) K(phi).
// linear_weight (s = 0):  int x phi'^2 dmu_V >= r / (4 pi^2) K(phi).
// K is chebyshev_kernel_integral on the support of mu_V.
InequalityReport check_plus_poincare(bool q_convex, double r, double s, const TestFunction& phi,
                                     PlusPoincareForm form = PlusPoincareForm::automatic);

struct BetaForm {
  double lhs;  // sum n^2 a_n^2 + beta n (n+1) a_n a_{n+1}
  double rhs;  // sqrt(1 - beta^2) sum n a_n^2
};

// a[n] multiplies cos(n t); a[0] is ignored.
BetaForm beta_form(double beta, const std::vector<double>& a);
// (1 - sqrt(1 - beta^2)) / beta
double beta_delta(double beta);

// (1/pi) int (1 + beta x) phi'^2 sqrt(1 - x^2) dx >= sqrt(1 - beta^2) <N phi, phi>.
InequalityReport l_beta_gap(double beta, const TestFunction& phi);

// a_n = (-gamma)^n / n in the beta = 1 coefficient form.
struct FailureWitness {
  double gamma;
  int terms;
  double lhs;
  double rhs;
  double ratio;
  double closed_form;  // gamma^2 / ((1 + gamma)(-log(1 - gamma^2)))
};

FailureWitness linear_potential_witness(double gamma);

}  // namespace freeineq

#endif
