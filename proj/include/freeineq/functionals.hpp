#ifndef FREEINEQ_FUNCTIONALS_HPP
#define FREEINEQ_FUNCTIONALS_HPP

#include <string>

#include "freeineq/equilibrium.hpp"
#include "freeineq/spectral_core.hpp"

namespace freeineq {

enum class Method { spectral, transport_decomposition, fourier, quadrature };

std::string to_string(Method m);

struct FunctionalValue {
  double value = 0.0;
  Method method = Method::quadrature;
  double truncation_error = 0.0;
  bool infinite = false;
};

// Re-expands an atomless grid measure on its support; Chebyshev measures pass through.
ChebMeasure as_cheb(const Measure& mu, int N = 256);

FunctionalValue energy(const Potential& V, const Measure& mu);
FunctionalValue relative_energy(const EquilibriumResult& eq, const Measure& mu);

struct TransportDecomposition {
  FunctionalValue total;
  double bregman;
  double log_term;
};

// E(mu) - E(mu_V) split along the monotone map pushing mu_V to mu.
TransportDecomposition relative_energy_transport(const EquilibriumResult& eq,
                                                 const Measure& mu);

FunctionalValue fisher(const Potential& V, const Measure& mu, double q = 2.0);

FunctionalValue wasserstein(double p, const Measure& mu, const Measure& nu);

struct MetricDWitness {
  FunctionalValue value;
  double alpha;   // slope of the maximizing exponential, inf for an atom limit
  double centre;  // point where it peaks
};

MetricDWitness metric_d_detailed(const Measure& mu, const Measure& nu);
FunctionalValue metric_d(const Measure& mu, const Measure& nu);

double uniform_cdf_distance(const Measure& mu, const Measure& nu);
double total_variation(const Measure& mu, const Measure& nu);

// Integral over (0, inf) of |mu^(t) - nu^(t)|^2 / t.
FunctionalValue fourier_energy(const Measure& mu, const Measure& nu,
                               double tolerance = 1e-6, double max_cutoff = 8192.0);

}  // namespace freeineq

#endif
