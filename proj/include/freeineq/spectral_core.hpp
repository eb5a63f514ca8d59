#ifndef FREEINEQ_SPECTRAL_CORE_HPP
#define FREEINEQ_SPECTRAL_CORE_HPP

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "freeineq/errors.hpp"

namespace freeineq {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Closed interval [a, b] with a < b.
class SupportInterval {
 public:
  SupportInterval(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  double mid() const { return 0.5 * (a_ + b_); }
  double half() const { return 0.5 * (b_ - a_); }
  double length() const { return b_ - a_; }
  // Width of the endpoint neighbourhoods excluded from pointwise evaluation.
  double eps() const { return 1e-6 * (b_ - a_); }
  bool contains(double x) const { return x >= a_ && x <= b_; }
  bool same_as(const SupportInterval& o, double tol = 1e-14) const;

 private:
  double a_;
  double b_;
};

// Measure on [a,b] written as the pushforward of h(t) dt on [0, pi] under
// t -> mid + half * cos t, with h(t) = sum_k c_k cos(k t).
class ChebMeasure {
 public:
  ChebMeasure(SupportInterval support, std::vector<double> coeffs);

  const SupportInterval& support() const { return support_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  double mass() const { return kPi * coeffs_[0]; }

  double to_x(double t) const;
  double to_t(double x) const;

  double pullback(double t) const;
  // Density with respect to Lebesgue measure; x must lie in [a+eps, b-eps].
  double density(double x) const;
  // Density without the endpoint guard, used by internal quadrature nodes.
  double density_unchecked(double x) const;

  double cdf(double x) const;
  double quantile(double q) const;

  // Largest |c_k| over the last four coefficients.
  double truncation_error() const;
  // Minimum of h over a 4N-point grid in t.
  double min_pullback() const;

  ChebMeasure translated(double m) const;
  // Pushforward under x -> alpha * x + beta.
  ChebMeasure affine_image(double alpha, double beta) const;
  ChebMeasure with_degree(int n) const;
  ChebMeasure normalized() const;

 private:
  SupportInterval support_;
  std::vector<double> coeffs_;
};

struct Atom {
  double x;
  double w;
};

// Piecewise-linear density on nodes plus finitely many atoms.
class GridMeasure {
 public:
  GridMeasure(SupportInterval support, std::vector<double> nodes,
              std::vector<double> density, std::vector<Atom> atoms = {});
  static GridMeasure atomic(std::vector<Atom> atoms);

  const SupportInterval& support() const { return support_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& density_values() const { return density_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  bool has_density() const { return !nodes_.empty(); }
  bool has_atoms() const { return !atoms_.empty(); }
  double mass() const { return total_; }

  double density(double x) const;
  double cdf(double x) const;
  double cdf_left(double x) const;
  double quantile(double q) const;

 private:
  double density_mass_below(double x) const;

  SupportInterval support_;
  std::vector<double> nodes_;
  std::vector<double> density_;
  std::vector<double> cumulative_;
  std::vector<Atom> atoms_;
  double total_ = 0.0;
};

using Measure = std::variant<ChebMeasure, GridMeasure>;

SupportInterval support_of(const Measure& mu);
double cdf(const Measure& mu, double x);
double cdf_left(const Measure& mu, double x);
double quantile(const Measure& mu, double q);
bool is_atomless(const Measure& mu);
// Atoms of mu (empty for Chebyshev measures).
std::vector<Atom> atoms_of(const Measure& mu);
// Smallest closed interval carrying all of the mass.
SupportInterval mass_hull(const Measure& mu);
// Integral of f against mu.
double integrate(const Measure& mu, const std::function<double(double)>& f,
                 int nodes = 512);

// Cosine coefficients of f(x) * half * sin t sampled on N+1 Gauss-Chebyshev
// nodes; exact whenever the pullback is a cosine polynomial of degree <= N.
ChebMeasure cheb_from_samples(const std::function<double(double)>& density,
                              SupportInterval support, int N);
// Same transform applied to a pullback given directly as a function of t.
ChebMeasure cheb_from_pullback(const std::function<double(double)>& h,
                               SupportInterval support, int N);
// Discrete cosine transform on the nodes t_j = (j + 1/2) pi / (N + 1).
std::vector<double> cosine_coefficients(const std::vector<double>& samples);

double log_energy(const ChebMeasure& mu);
double cross_log_energy(const ChebMeasure& mu, const ChebMeasure& nu);
// -(double integral of log|x-y|) for the signed measure mu - nu.
double difference_log_energy(const ChebMeasure& mu, const ChebMeasure& nu);
// Integral of log|x - y| mu(dy) for a single x in [a, b].
double log_potential(const ChebMeasure& mu, double x);

class HilbertTransform {
 public:
  explicit HilbertTransform(ChebMeasure mu);
  // 2 p.v. integral of mu(dy) / (x - y); x in [a+eps, b-eps].
  double operator()(double x) const;
  // Value at cos-angle t, no endpoint guard.
  double at_angle(double t) const;

 private:
  ChebMeasure mu_;
};

HilbertTransform hilbert_transform(const ChebMeasure& mu);

// Monotone map theta = F_nu^{-1} o F_mu on a shared quantile grid.
class TransportMap {
 public:
  TransportMap(std::vector<double> levels, std::vector<double> source,
               std::vector<double> target, SupportInterval source_support,
               SupportInterval target_support);

  double operator()(double x) const;

  const std::vector<double>& levels() const { return levels_; }
  const std::vector<double>& source() const { return source_; }
  const std::vector<double>& target() const { return target_; }

 private:
  std::vector<double> levels_;
  std::vector<double> source_;
  std::vector<double> target_;
  double x_lo_;
  double x_hi_;
  double y_lo_;
  double y_hi_;
  std::function<double(double)> interp_;
};

TransportMap monotone_transport(const Measure& mu, const Measure& nu,
                                int M = 512);

}  // namespace freeineq

#endif
