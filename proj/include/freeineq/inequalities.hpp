#ifndef FREEINEQ_INEQUALITIES_HPP
#define FREEINEQ_INEQUALITIES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "freeineq/equilibrium.hpp"
#include "freeineq/functionals.hpp"

namespace freeineq {

enum class Verdict { holds, equality, violated };

std::string to_string(Verdict v);

// gap >= 0 means the inequality holds: gap = rhs - lhs for upper bounds on lhs,
// and gap = lhs - rhs for the Poincare-type lower bounds.
struct InequalityReport {
  std::string kind;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::holds;
  std::map<std::string, std::string> inputs;
  std::map<std::string, double> extras;
  std::vector<std::string> notes;
};

// Tolerance floor 1e-9, otherwise ten times the summed truncation errors.
double report_tolerance(std::initializer_list<double> truncation_errors);
Verdict classify(double gap, double tolerance);

// inf over x in [-50, 50] of |1+x|^p - |x|^p - p sign(x) |x|^{p-1}.
double constant_cp(double p);

InequalityReport check_transport(const EquilibriumResult& eq, double rho, double p,
                                 const Measure& mu);
// (E(mu) - E(mu_V)) / W_2^2, for potentials that are only convex with quadratic tails.
double transport_ratio(const EquilibriumResult& eq, const Measure& mu);

InequalityReport check_lsi(const EquilibriumResult& eq, double rho, const Measure& mu,
                           double p = 2.0);
InequalityReport check_hwi(const EquilibriumResult& eq, double rho, const Measure& mu,
                           double p = 2.0);

struct LsiConstant {
  double K;           // max{rho, (C + rho)^2 / (32 C)}
  double delta;       // minimiser 2 / (C + rho)
  double K_from_min;  // constant reached at that minimiser: max{rho, (C + rho)^2 / (64 C)}
};

LsiConstant lsi_constant_from_transport(double C, double rho);

InequalityReport check_brunn_minkowski(const Potential& V1, const Potential& V2,
                                       const Potential& V3, double a);

struct PinskerRecord {
  int n;
  double energy_gap;
  double closed_form;
  double uniform_distance;
  double uniform_dist_lb;
  double ratio_bound;  // pi^2 / log(n / 3)
  double ratio;        // energy_gap / uniform_distance^2
  double min_pullback;
  bool bound_holds;
};

ChebMeasure pinsker_measure(int n);
PinskerRecord pinsker_counterexample(int n);

struct ArcsineTvRecord {
  int n;
  double energy_gap;
  double claimed_gap;  // 1/n
  double tv;
  double tv_lower;     // 1/4
};

ArcsineTvRecord arcsine_tv_example(int n);

// Mass-preserving perturbations of mu_V along cos kt - cos (k+2)t, scaled to stay
// nonnegative; deterministic in the seed.
std::vector<ChebMeasure> perturbation_family(const EquilibriumResult& eq, int count,
                                             std::uint64_t seed, int modes = 6);
// Translations and dilations of mu_V, kept inside the potential's domain.
std::vector<ChebMeasure> shift_family(const EquilibriumResult& eq, int count,
                                      std::uint64_t seed);

inline constexpr std::uint64_t kDefaultSeed = 0x5eed2012ULL;

}  // namespace freeineq

#endif
