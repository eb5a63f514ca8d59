#include "freeineq/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

// pchip in Boost 1.74 calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>

namespace freeineq {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// sum_k c_k cos(k t) by Clenshaw in cos t.
double cosine_series(const std::vector<double>& c, double t) {
  const double x = std::cos(t);
  double b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
    const double b0 = c[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + x * b1 - b2;
}

// sum_{k>=1} c_k U_{k-1}(x).
double second_kind_series(const std::vector<double>& c, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
    const double b0 = c[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return b1;
}

// Integral of h over [t, pi].
double tail_mass(const std::vector<double>& c, double t) {
  double sum = c[0] * (kPi - t);
  const double s1 = std::sin(t);
  const double twoc = 2.0 * std::cos(t);
  double sk_prev = 0.0;
  double sk = s1;
  for (std::size_t k = 1; k < c.size(); ++k) {
    sum -= c[k] * sk / static_cast<double>(k);
    const double next = twoc * sk - sk_prev;
    sk_prev = sk;
    sk = next;
  }
  return sum;
}

}  // namespace

SupportInterval::SupportInterval(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw Error("invalid_support",
                "support interval needs finite a < b, got [" + fmt(a) + ", " +
                    fmt(b) + "]");
  }
}

bool SupportInterval::same_as(const SupportInterval& o, double tol) const {
  const double scale = std::max({1.0, std::abs(a_), std::abs(b_)});
  return std::abs(a_ - o.a_) <= tol * scale && std::abs(b_ - o.b_) <= tol * scale;
}

ChebMeasure::ChebMeasure(SupportInterval support, std::vector<double> coeffs)
    : support_(support), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error("invalid_measure", "empty coefficient vector");
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw Error("invalid_measure", "non-finite coefficient");
  }
}

double ChebMeasure::to_x(double t) const {
  return support_.mid() + support_.half() * std::cos(t);
}

double ChebMeasure::to_t(double x) const {
  const double u = std::clamp((x - support_.mid()) / support_.half(), -1.0, 1.0);
  return std::acos(u);
}

double ChebMeasure::pullback(double t) const { return cosine_series(coeffs_, t); }

double ChebMeasure::density(double x) const {
  const double e = support_.eps();
  if (x < support_.a() + e || x > support_.b() - e) {
    throw Error("domain", "density evaluated within eps of the support edge at x=" +
                              fmt(x));
  }
  return density_unchecked(x);
}

double ChebMeasure::density_unchecked(double x) const {
  const double t = to_t(x);
  const double s = std::sin(t);
  if (s <= 0.0) return 0.0;
  return pullback(t) / (support_.half() * s);
}

double ChebMeasure::cdf(double x) const {
  if (x <= support_.a()) return 0.0;
  if (x >= support_.b()) return mass();
  return tail_mass(coeffs_, to_t(x));
}

double ChebMeasure::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) throw Error("domain", "quantile level outside [0,1]: " + fmt(q));
  if (q <= 0.0) return support_.a();
  if (q >= 1.0) return support_.b();
  // tail_mass is decreasing in t with derivative -h(t).
  double lo = 0.0, hi = kPi;
  double t = kPi * (1.0 - q);
  for (int it = 0; it < 200; ++it) {
    const double g = tail_mass(coeffs_, t) - q;
    if (g > 0.0) lo = t; else hi = t;
    if (std::abs(g) < 1e-16 || hi - lo < 1e-15) break;
    const double h = pullback(t);
    double next = h > 0.0 ? t + g / h : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return to_x(t);
}

double ChebMeasure::truncation_error() const {
  double m = 0.0;
  const int n = degree();
  for (int k = std::max(0, n - 3); k <= n; ++k) m = std::max(m, std::abs(coeffs_[k]));
  return m;
}

double ChebMeasure::min_pullback() const {
  const int n = 4 * std::max(degree(), 8);
  double m = pullback(0.0);
  for (int j = 0; j <= n; ++j) m = std::min(m, pullback(kPi * j / n));
  return m;
}

ChebMeasure ChebMeasure::translated(double m) const {
  return ChebMeasure(SupportInterval(support_.a() + m, support_.b() + m), coeffs_);
}

ChebMeasure ChebMeasure::affine_image(double alpha, double beta) const {
  if (alpha == 0.0) throw Error("invalid_argument", "affine image needs alpha != 0");
  const double p = alpha * support_.a() + beta;
  const double q = alpha * support_.b() + beta;
  std::vector<double> c = coeffs_;
  if (alpha < 0.0) {
    for (std::size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
  }
  return ChebMeasure(SupportInterval(std::min(p, q), std::max(p, q)), std::move(c));
}

ChebMeasure ChebMeasure::with_degree(int n) const {
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k <= std::min(n, degree()); ++k) c[k] = coeffs_[k];
  return ChebMeasure(support_, std::move(c));
}

ChebMeasure ChebMeasure::normalized() const {
  const double m = mass();
  if (!(m > 0.0)) throw Error("invalid_measure", "cannot normalize a measure of mass " + fmt(m));
  std::vector<double> c = coeffs_;
  for (double& v : c) v /= m;
  return ChebMeasure(support_, std::move(c));
}

// ---------------------------------------------------------------------------

GridMeasure::GridMeasure(SupportInterval support, std::vector<double> nodes,
                         std::vector<double> density, std::vector<Atom> atoms)
    : support_(support),
      nodes_(std::move(nodes)),
      density_(std::move(density)),
      atoms_(std::move(atoms)) {
  if (nodes_.size() != density_.size()) {
    throw Error("invalid_measure", "node and density vectors differ in length");
  }
  if (nodes_.size() == 1) throw Error("invalid_measure", "a density needs at least two nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!support_.contains(nodes_[i])) throw Error("invalid_measure", "node outside support");
    if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
      throw Error("invalid_measure", "nodes must be strictly increasing");
    }
    if (!(density_[i] >= 0.0)) throw Error("invalid_measure", "negative density value");
  }
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });
  for (const Atom& at : atoms_) {
    if (!support_.contains(at.x) || !(at.w > 0.0)) {
      throw Error("invalid_measure", "atom outside support or with nonpositive weight");
    }
  }
  cumulative_.assign(nodes_.size(), 0.0);
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] +
                     0.5 * (density_[i] + density_[i - 1]) * (nodes_[i] - nodes_[i - 1]);
  }
  total_ = cumulative_.empty() ? 0.0 : cumulative_.back();
  for (const Atom& at : atoms_) total_ += at.w;
  if (std::abs(total_ - 1.0) > 1e-10) {
    throw Error("invalid_measure", "grid measure has total mass " + fmt(total_));
  }
}

GridMeasure GridMeasure::atomic(std::vector<Atom> atoms) {
  if (atoms.empty()) throw Error("invalid_measure", "atomic measure needs atoms");
  double lo = atoms.front().x, hi = atoms.front().x;
  for (const Atom& at : atoms) {
    lo = std::min(lo, at.x);
    hi = std::max(hi, at.x);
  }
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return GridMeasure(SupportInterval(lo, hi), {}, {}, std::move(atoms));
}

double GridMeasure::density(double x) const {
  if (nodes_.empty() || x < nodes_.front() || x > nodes_.back()) return 0.0;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  if (it == nodes_.end()) return density_.back();
  const std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  const double w = (x - nodes_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
  return (1.0 - w) * density_[i - 1] + w * density_[i];
}

double GridMeasure::density_mass_below(double x) const {
  if (nodes_.empty() || x <= nodes_.front()) return 0.0;
  if (x >= nodes_.back()) return cumulative_.back();
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  const double x0 = nodes_[i - 1];
  return cumulative_[i - 1] + 0.5 * (density_[i - 1] + density(x)) * (x - x0);
}

double GridMeasure::cdf(double x) const {
  double f = density_mass_below(x);
  for (const Atom& at : atoms_) {
    if (at.x <= x) f += at.w;
  }
  return f;
}

double GridMeasure::cdf_left(double x) const {
  double f = density_mass_below(x);
  for (const Atom& at : atoms_) {
    if (at.x < x) f += at.w;
  }
  return f;
}

double GridMeasure::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) throw Error("domain", "quantile level outside [0,1]: " + fmt(q));
  for (const Atom& at : atoms_) {
    if (cdf_left(at.x) < q && q <= cdf(at.x)) return at.x;
  }
  double lo = support_.a(), hi = support_.b();
  if (q <= 0.0) {
    const SupportInterval h = mass_hull(Measure(*this));
    return h.a();
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double m = 0.5 * (lo + hi);
    if (cdf(m) >= q) hi = m; else lo = m;
  }
  return hi;
}

// ---------------------------------------------------------------------------

SupportInterval support_of(const Measure& mu) {
  return std::visit([](const auto& m) { return m.support(); }, mu);
}

double cdf(const Measure& mu, double x) {
  return std::visit([x](const auto& m) { return m.cdf(x); }, mu);
}

double cdf_left(const Measure& mu, double x) {
  if (const auto* g = std::get_if<GridMeasure>(&mu)) return g->cdf_left(x);
  return std::get<ChebMeasure>(mu).cdf(x);
}

double quantile(const Measure& mu, double q) {
  return std::visit([q](const auto& m) { return m.quantile(q); }, mu);
}

bool is_atomless(const Measure& mu) {
  if (const auto* g = std::get_if<GridMeasure>(&mu)) return !g->has_atoms();
  return true;
}

std::vector<Atom> atoms_of(const Measure& mu) {
  if (const auto* g = std::get_if<GridMeasure>(&mu)) return g->atoms();
  return {};
}

SupportInterval mass_hull(const Measure& mu) {
  if (const auto* g = std::get_if<GridMeasure>(&mu)) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    if (g->has_density()) {
      lo = g->nodes().front();
      hi = g->nodes().back();
    }
    for (const Atom& at : g->atoms()) {
      lo = std::min(lo, at.x);
      hi = std::max(hi, at.x);
    }
    if (lo == hi) return g->support();
    return SupportInterval(lo, hi);
  }
  return std::get<ChebMeasure>(mu).support();
}

double integrate(const Measure& mu, const std::function<double(double)>& f, int nodes) {
  if (const auto* c = std::get_if<ChebMeasure>(&mu)) {
    double s = 0.0;
    for (int j = 0; j < nodes; ++j) {
      const double t = kPi * (j + 0.5) / nodes;
      s += f(c->to_x(t)) * c->pullback(t);
    }
    return s * kPi / nodes;
  }
  const auto& g = std::get<GridMeasure>(mu);
  double s = 0.0;
  for (const Atom& at : g.atoms()) s += at.w * f(at.x);
  const auto& x = g.nodes();
  for (std::size_t i = 1; i < x.size(); ++i) {
    auto seg = [&](double y) { return f(y) * g.density(y); };
    s += boost::math::quadrature::gauss<double, 10>::integrate(seg, x[i - 1], x[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------

std::vector<double> cosine_coefficients(const std::vector<double>& samples) {
  const int M = static_cast<int>(samples.size());
  std::vector<double> table(4 * static_cast<std::size_t>(M));
  for (int i = 0; i < 4 * M; ++i) table[i] = std::cos(kPi * i / (2.0 * M));
  std::vector<double> c(M, 0.0);
  for (int k = 0; k < M; ++k) {
    double s = 0.0;
    for (int j = 0; j < M; ++j) {
      const long idx = (static_cast<long>(k) * (2 * j + 1)) % (4L * M);
      s += samples[j] * table[idx];
    }
    c[k] = 2.0 * s / M;
  }
  c[0] *= 0.5;
  return c;
}

ChebMeasure cheb_from_pullback(const std::function<double(double)>& h,
                               SupportInterval support, int N) {
  if (N < 8) throw Error("invalid_argument", "need at least 8 coefficients");
  const int M = N + 1;
  std::vector<double> samples(M);
  for (int j = 0; j < M; ++j) samples[j] = h(kPi * (j + 0.5) / M);
  return ChebMeasure(support, cosine_coefficients(samples));
}

ChebMeasure cheb_from_samples(const std::function<double(double)>& density,
                              SupportInterval support, int N) {
  if (N < 8) throw Error("invalid_argument", "need at least 8 coefficients");
  const int M = N + 1;
  std::vector<double> samples(M);
  for (int j = 0; j < M; ++j) {
    const double t = kPi * (j + 0.5) / M;
    const double x = support.mid() + support.half() * std::cos(t);
    const double f = density(x);
    if (!std::isfinite(f)) throw Error("invalid_density", "non-finite density at x=" + fmt(x));
    if (f < -1e-9) {
      throw Error("negative_density", "density " + fmt(f) + " is negative at x=" + fmt(x));
    }
    samples[j] = f * support.half() * std::sin(t);
  }
  return ChebMeasure(support, cosine_coefficients(samples));
}

double cross_log_energy(const ChebMeasure& mu, const ChebMeasure& nu) {
  if (!mu.support().same_as(nu.support(), 1e-12)) {
    throw Error("support_mismatch",
                "cross log energy needs a common support; re-expand both measures on the hull");
  }
  const auto& c = mu.coeffs();
  const auto& d = nu.coeffs();
  double s = (std::log(2.0) - std::log(mu.support().half())) * mu.mass() * nu.mass();
  const std::size_t n = std::min(c.size(), d.size());
  for (std::size_t l = 1; l < n; ++l) s += kPi * kPi / (2.0 * l) * c[l] * d[l];
  return s;
}

double log_energy(const ChebMeasure& mu) { return cross_log_energy(mu, mu); }

double difference_log_energy(const ChebMeasure& mu, const ChebMeasure& nu) {
  if (!mu.support().same_as(nu.support(), 1e-12)) {
    throw Error("support_mismatch",
                "difference energy needs a common support; re-expand both measures on the hull");
  }
  const auto& c = mu.coeffs();
  const auto& d = nu.coeffs();
  const std::size_t n = std::max(c.size(), d.size());
  auto at = [](const std::vector<double>& v, std::size_t k) { return k < v.size() ? v[k] : 0.0; };
  const double dm = kPi * (c[0] - d[0]);
  double s = (std::log(2.0) - std::log(mu.support().half())) * dm * dm;
  for (std::size_t l = 1; l < n; ++l) {
    const double e = at(c, l) - at(d, l);
    s += kPi * kPi / (2.0 * l) * e * e;
  }
  return s;
}

double log_potential(const ChebMeasure& mu, double x) {
  const auto& c = mu.coeffs();
  const double t = mu.to_t(x);
  double s = mu.mass() * (std::log(mu.support().half()) - std::log(2.0));
  for (std::size_t l = 1; l < c.size(); ++l) {
    s -= kPi * c[l] / static_cast<double>(l) * std::cos(l * t);
  }
  return s;
}

HilbertTransform::HilbertTransform(ChebMeasure mu) : mu_(std::move(mu)) {}

double HilbertTransform::at_angle(double t) const {
  return -2.0 * kPi / mu_.support().half() * second_kind_series(mu_.coeffs(), std::cos(t));
}

double HilbertTransform::operator()(double x) const {
  const auto& s = mu_.support();
  if (x < s.a() + s.eps() || x > s.b() - s.eps()) {
    throw Error("domain", "Hilbert transform evaluated within eps of the support edge at x=" +
                              fmt(x));
  }
  return at_angle(mu_.to_t(x));
}

HilbertTransform hilbert_transform(const ChebMeasure& mu) { return HilbertTransform(mu); }

// ---------------------------------------------------------------------------

TransportMap::TransportMap(std::vector<double> levels, std::vector<double> source,
                           std::vector<double> target, SupportInterval source_support,
                           SupportInterval target_support)
    : levels_(std::move(levels)), source_(std::move(source)), target_(std::move(target)) {
  std::vector<double> xs{source_support.a()};
  std::vector<double> ys{target_support.a()};
  for (std::size_t i = 0; i < source_.size(); ++i) {
    if (i > 0 && target_[i] < target_[i - 1]) {
      throw Error("transport", "target quantiles are not monotone");
    }
    if (source_[i] > xs.back()) {
      xs.push_back(source_[i]);
      ys.push_back(std::max(target_[i], ys.back()));
    }
  }
  if (source_support.b() > xs.back()) {
    xs.push_back(source_support.b());
    ys.push_back(std::max(target_support.b(), ys.back()));
  }
  x_lo_ = xs.front();
  x_hi_ = xs.back();
  y_lo_ = ys.front();
  y_hi_ = ys.back();
  if (xs.size() < 4) {
    throw Error("transport", "too few distinct source quantiles for a monotone interpolant");
  }
  auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
      std::move(xs), std::move(ys));
  interp_ = [spline](double x) { return (*spline)(x); };
}

double TransportMap::operator()(double x) const {
  if (x <= x_lo_) return y_lo_;
  if (x >= x_hi_) return y_hi_;
  return interp_(x);
}

TransportMap monotone_transport(const Measure& mu, const Measure& nu, int M) {
  if (M < 256) throw Error("invalid_argument", "transport grid needs M >= 256");
  if (!is_atomless(mu)) throw Error("atomic_source", "monotone transport needs an atomless source");
  std::vector<double> q(M), s(M), t(M);
  for (int i = 0; i < M; ++i) {
    q[i] = (i + 0.5) / M;
    s[i] = quantile(mu, q[i]);
    t[i] = quantile(nu, q[i]);
  }
  return TransportMap(std::move(q), std::move(s), std::move(t), mass_hull(mu), mass_hull(nu));
}

}  // namespace freeineq
