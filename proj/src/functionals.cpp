#include "freeineq/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace freeineq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

FunctionalValue infinite_value(Method m) {
  FunctionalValue f;
  f.value = kInf;
  f.method = m;
  f.infinite = true;
  return f;
}

// Fejer's first rule on [0, 1] with nodes (1 - cos tau_j) / 2.
struct FejerRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

FejerRule make_fejer(int K) {
  FejerRule r;
  r.nodes.resize(K);
  r.weights.resize(K);
  for (int j = 0; j < K; ++j) {
    const double th = kPi * (j + 0.5) / K;
    double s = 0.0;
    for (int k = 1; k <= K / 2; ++k) s += std::cos(2.0 * k * th) / (4.0 * k * k - 1.0);
    r.nodes[j] = 0.5 * (1.0 - std::cos(th));
    r.weights[j] = (1.0 - 2.0 * s) / K;
  }
  return r;
}

const FejerRule& fejer_fine() {
  static const FejerRule r = make_fejer(2048);
  return r;
}

const FejerRule& fejer_coarse() {
  static const FejerRule r = make_fejer(1024);
  return r;
}

double density_at(const Measure& mu, double x) {
  if (const auto* c = std::get_if<ChebMeasure>(&mu)) {
    return c->support().contains(x) ? c->density_unchecked(x) : 0.0;
  }
  return std::get<GridMeasure>(mu).density(x);
}

void require_domain(const Potential& V, const SupportInterval& s) {
  if (s.a() < V.wall() - 1e-12) {
    throw Error("domain", "measure charges points left of the potential's wall at " +
                              fmt(V.wall()));
  }
}

double potential_integral(const Potential& V, const ChebMeasure& mu, int Q) {
  double s = 0.0;
  for (int j = 0; j < Q; ++j) {
    const double t = kPi * (j + 0.5) / Q;
    s += V.value(mu.to_x(t)) * mu.pullback(t);
  }
  return s * kPi / Q;
}

struct TransportSums {
  double bregman;
  double log_term;
};

TransportSums transport_sums(const EquilibriumResult& eq, const Measure& mu, int Q) {
  const ChebMeasure& mv = eq.measure;
  const Potential& V = eq.potential;
  std::vector<double> x(Q), th(Q), w(Q), slope(Q);
  for (int j = 0; j < Q; ++j) {
    const double t = kPi * (j + 0.5) / Q;
    x[j] = mv.to_x(t);
    w[j] = mv.pullback(t) * kPi / Q;
    th[j] = quantile(mu, std::clamp(mv.cdf(x[j]), 0.0, 1.0));
    const double target = density_at(mu, th[j]);
    slope[j] = target > 0.0 ? mv.density_unchecked(x[j]) / target : 1.0;
  }
  TransportSums r{0.0, 0.0};
  for (int i = 0; i < Q; ++i) {
    r.bregman += w[i] * (V.value(th[i]) - V.value(x[i]) - V.d1(x[i]) * (th[i] - x[i]));
    double row = 0.0;
    for (int j = 0; j < Q; ++j) {
      const double D = i == j ? slope[i] : (th[i] - th[j]) / (x[i] - x[j]);
      row += w[j] * (D - 1.0 - std::log(D));
    }
    r.log_term += w[i] * row;
  }
  return r;
}

// Integral of |g| over [lo, hi], splitting at sign changes of g.
double abs_integral(const std::function<double(double)>& g, std::pair<double, double> range) {
  const int K = 512;
  const double lo = range.first, hi = range.second;
  std::vector<double> cuts{lo};
  double x0 = lo, g0 = g(lo);
  for (int i = 1; i <= K; ++i) {
    const double x1 = lo + (hi - lo) * i / K;
    const double g1 = g(x1);
    if ((g0 < 0.0 && g1 > 0.0) || (g0 > 0.0 && g1 < 0.0)) {
      std::uintmax_t iters = 100;
      auto r = boost::math::tools::toms748_solve(
          g, x0, x1, g0, g1, boost::math::tools::eps_tolerance<double>(52), iters);
      cuts.push_back(0.5 * (r.first + r.second));
    }
    x0 = x1;
    g0 = g1;
  }
  cuts.push_back(hi);
  double s = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const int pieces = std::max(1, static_cast<int>(std::ceil(64.0 * (cuts[i] - cuts[i - 1]) /
                                                              (hi - lo))));
    const double h = (cuts[i] - cuts[i - 1]) / pieces;
    for (int k = 0; k < pieces; ++k) {
      s += std::abs(boost::math::quadrature::gauss<double, 30>::integrate(
          g, cuts[i - 1] + k * h, cuts[i - 1] + (k + 1) * h));
    }
  }
  return s;
}

// Points where some cdf of the pair has a kink or a jump.
std::vector<double> breakpoints(const Measure& mu, const Measure& nu) {
  std::vector<double> p;
  for (const Measure* m : {&mu, &nu}) {
    const SupportInterval h = mass_hull(*m);
    p.push_back(h.a());
    p.push_back(h.b());
    for (const Atom& at : atoms_of(*m)) p.push_back(at.x);
  }
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

std::vector<double> atom_differences(const Measure& mu, const Measure& nu,
                                     std::vector<double>* where) {
  std::vector<double> pts;
  for (const Atom& at : atoms_of(mu)) pts.push_back(at.x);
  for (const Atom& at : atoms_of(nu)) pts.push_back(at.x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<double> diff;
  for (double z : pts) {
    diff.push_back((cdf(mu, z) - cdf_left(mu, z)) - (cdf(nu, z) - cdf_left(nu, z)));
  }
  if (where) *where = pts;
  return diff;
}

// A measure pair whose cdf difference can be evaluated cheaply.
class CdfDifference {
 public:
  CdfDifference(const Measure& mu, const Measure& nu) : mu_(mu), nu_(nu) {
    const auto* a = std::get_if<ChebMeasure>(&mu);
    const auto* b = std::get_if<ChebMeasure>(&nu);
    if (a && b && a->support().same_as(b->support())) {
      std::vector<double> c = a->coeffs();
      const auto& d = b->coeffs();
      if (d.size() > c.size()) c.resize(d.size(), 0.0);
      for (std::size_t k = 0; k < d.size(); ++k) c[k] -= d[k];
      diff_.emplace(a->support(), std::move(c));
    }
  }

  double right(double x) const {
    if (diff_) return diff_->cdf(x);
    return cdf(mu_, x) - cdf(nu_, x);
  }
  double left(double x) const {
    if (diff_) return diff_->cdf(x);
    return cdf_left(mu_, x) - cdf_left(nu_, x);
  }

 private:
  const Measure& mu_;
  const Measure& nu_;
  std::optional<ChebMeasure> diff_;
};

// integral of exp(-alpha |x - z|) d(mu - nu), written as
// int_0^inf e^{-u} (mu - nu)([z - u/alpha, z + u/alpha]) du.
double exp_moment(const CdfDifference& D, const std::vector<double>& bp, double alpha,
                  double z) {
  const double ucap = 40.0;
  std::vector<double> cuts{0.0};
  double reach = 0.0;
  for (double p : bp) {
    const double u = alpha * std::abs(p - z);
    reach = std::max(reach, u);
    if (u > 0.0 && u < ucap) cuts.push_back(u);
  }
  cuts.push_back(std::min(reach, ucap));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto f = [&](double u) {
    const double y = u / alpha;
    return std::exp(-u) * (D.right(z + y) - D.left(z - y));
  };
  double s = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double lo = cuts[i - 1], hi = cuts[i];
    if (hi <= lo) continue;
    const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / 4.0)));
    const double h = (hi - lo) / pieces;
    for (int k = 0; k < pieces; ++k) {
      s += boost::math::quadrature::gauss<double, 20>::integrate(f, lo + k * h,
                                                                  lo + (k + 1) * h);
    }
  }
  return s;
}

// J_0(z), ..., J_n(z).
std::vector<double> bessel_sequence(int n, double z) {
  std::vector<double> J(n + 1, 0.0);
  if (z == 0.0) {
    J[0] = 1.0;
    return J;
  }
  if (z > n) {
    J[0] = std::cyl_bessel_j(0.0, z);
    if (n >= 1) J[1] = std::cyl_bessel_j(1.0, z);
    for (int k = 1; k < n; ++k) J[k + 1] = 2.0 * k / z * J[k] - J[k - 1];
    return J;
  }
  const int top = 2 * ((std::max(n, static_cast<int>(z)) + 30 +
                        static_cast<int>(std::sqrt(40.0 * std::max(n, 1)))) / 2);
  double jp = 0.0, jk = 1e-280, norm = 0.0;
  for (int k = top; k >= 1; --k) {
    const double jm = 2.0 * k / z * jk - jp;
    jp = jk;
    jk = jm;
    if (k - 1 <= n) J[k - 1] = jk;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * jk;
    if (std::abs(jk) > 1e250) {
      jp *= 1e-250;
      jk *= 1e-250;
      norm *= 1e-250;
      for (int i = k - 1; i <= n; ++i) J[i] *= 1e-250;
    }
  }
  norm += jk;
  for (double& v : J) v /= norm;
  return J;
}

// Fourier transform of a signed combination of Chebyshev measures and atoms.
class FourierSide {
 public:
  void add(const Measure& m, double sign) {
    if (const auto* g = std::get_if<GridMeasure>(&m)) {
      if (g->has_density()) {
        add(Measure(as_cheb(m)), sign);
        for (const Atom& at : g->atoms()) atoms_.push_back({at.x, sign * at.w});
        return;
      }
      for (const Atom& at : g->atoms()) atoms_.push_back({at.x, sign * at.w});
      return;
    }
    const auto& c = std::get<ChebMeasure>(m);
    for (auto& p : pieces_) {
      if (p.support.same_as(c.support())) {
        if (c.coeffs().size() > p.coeffs.size()) p.coeffs.resize(c.coeffs().size(), 0.0);
        for (std::size_t k = 0; k < c.coeffs().size(); ++k) p.coeffs[k] += sign * c.coeffs()[k];
        return;
      }
    }
    Piece p{c.support(), c.coeffs()};
    for (double& v : p.coeffs) v *= sign;
    pieces_.push_back(std::move(p));
  }

  std::complex<double> operator()(double t) const {
    std::complex<double> s = 0.0;
    for (const Atom& at : atoms_) s += at.w * std::polar(1.0, t * at.x);
    for (const Piece& p : pieces_) {
      const int n = static_cast<int>(p.coeffs.size()) - 1;
      const auto J = bessel_sequence(n, p.support.half() * t);
      std::complex<double> acc = 0.0;
      std::complex<double> ik = 1.0;
      const std::complex<double> I(0.0, 1.0);
      for (int k = 0; k <= n; ++k) {
        acc += p.coeffs[k] * ik * J[k];
        ik *= I;
      }
      s += kPi * std::polar(1.0, t * p.support.mid()) * acc;
    }
    return s;
  }

 private:
  struct Piece {
    SupportInterval support;
    std::vector<double> coeffs;
  };
  std::vector<Piece> pieces_;
  std::vector<Atom> atoms_;
};

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::spectral: return "spectral";
    case Method::transport_decomposition: return "transport-decomposition";
    case Method::fourier: return "fourier";
    case Method::quadrature: return "quadrature";
  }
  return "unknown";
}

ChebMeasure as_cheb(const Measure& mu, int N) {
  if (const auto* c = std::get_if<ChebMeasure>(&mu)) return *c;
  const auto& g = std::get<GridMeasure>(mu);
  if (g.has_atoms()) throw Error("atomic", "measure with atoms has no Chebyshev expansion");
  const SupportInterval s(g.nodes().front(), g.nodes().back());
  return cheb_from_samples([&g](double x) { return g.density(x); }, s, N);
}

FunctionalValue energy(const Potential& V, const Measure& mu) {
  if (!is_atomless(mu)) return infinite_value(Method::spectral);
  const ChebMeasure c = as_cheb(mu);
  require_domain(V, c.support());
  const int Q = std::max(2048, 8 * (c.degree() + 1));
  const double fine = potential_integral(V, c, Q);
  const double coarse = potential_integral(V, c, Q / 2);
  FunctionalValue f;
  f.value = fine + log_energy(c);
  f.method = Method::spectral;
  f.truncation_error = std::abs(fine - coarse) + c.truncation_error();
  return f;
}

FunctionalValue relative_energy(const EquilibriumResult& eq, const Measure& mu) {
  FunctionalValue f = energy(eq.potential, mu);
  if (f.infinite) return f;
  f.value -= eq.energy;
  f.truncation_error += eq.measure.truncation_error();
  return f;
}

TransportDecomposition relative_energy_transport(const EquilibriumResult& eq,
                                                 const Measure& mu) {
  if (!is_atomless(mu)) {
    throw Error("not_atomless", "transport decomposition needs an atomless target");
  }
  require_domain(eq.potential, support_of(mu));
  const TransportSums fine = transport_sums(eq, mu, 512);
  const TransportSums coarse = transport_sums(eq, mu, 256);
  TransportDecomposition d;
  d.bregman = fine.bregman;
  d.log_term = fine.log_term;
  d.total.value = fine.bregman + fine.log_term;
  d.total.method = Method::transport_decomposition;
  d.total.truncation_error =
      std::abs(fine.bregman + fine.log_term - coarse.bregman - coarse.log_term);
  return d;
}

FunctionalValue fisher(const Potential& V, const Measure& mu, double q) {
  if (!(q >= 1.0)) throw Error("domain", "Fisher exponent must be at least 1");
  if (!is_atomless(mu)) return infinite_value(Method::spectral);
  const ChebMeasure c = as_cheb(mu);
  const SupportInterval& s = c.support();
  require_domain(V, s);

  // Density blow-up at an edge is only admissible against the potential's wall.
  double scale = 0.0;
  for (double v : c.coeffs()) scale += std::abs(v);
  const double tol = 1e-9 * std::max(scale, 1.0);
  const bool left_wall = std::abs(s.a() - V.wall()) <= 1e-12 * std::max(1.0, s.length());
  if (std::abs(c.pullback(0.0)) > tol) return infinite_value(Method::spectral);
  if (!left_wall && std::abs(c.pullback(kPi)) > tol) return infinite_value(Method::spectral);

  const HilbertTransform H(c);
  const double e = s.eps();
  auto run = [&](int Q, double* trimmed) {
    double sum = 0.0, last = 0.0, tail = 0.0;
    for (int j = 0; j < Q; ++j) {
      const double t = kPi * (j + 0.5) / Q;
      const double x = c.to_x(t);
      const double w = c.pullback(t) * kPi / Q;
      if (x < s.a() + e || x > s.b() - e) {
        tail += std::abs(w);
        continue;
      }
      last = std::pow(std::abs(H.at_angle(t) - V.d1(x)), q);
      sum += w * last;
    }
    if (trimmed) *trimmed = tail * last;
    return sum;
  };
  double trimmed = 0.0;
  const double fine = run(512, &trimmed);
  const double coarse = run(256, nullptr);
  FunctionalValue f;
  f.value = fine;
  f.method = Method::spectral;
  f.truncation_error = std::abs(fine - coarse) + trimmed;
  return f;
}

FunctionalValue wasserstein(double p, const Measure& mu, const Measure& nu) {
  if (!(p >= 1.0)) throw Error("domain", "Wasserstein exponent must be at least 1");
  auto run = [&](const FejerRule& r) {
    double s = 0.0;
    for (std::size_t j = 0; j < r.nodes.size(); ++j) {
      const double q = r.nodes[j];
      s += r.weights[j] * std::pow(std::abs(quantile(mu, q) - quantile(nu, q)), p);
    }
    return std::pow(std::max(s, 0.0), 1.0 / p);
  };
  const double fine = run(fejer_fine());
  FunctionalValue f;
  f.value = fine;
  f.method = Method::quadrature;
  f.truncation_error = std::abs(fine - run(fejer_coarse()));
  return f;
}

MetricDWitness metric_d_detailed(const Measure& mu, const Measure& nu) {
  const CdfDifference D(mu, nu);
  const std::vector<double> bp = breakpoints(mu, nu);
  const double lo = bp.front(), hi = bp.back();

  MetricDWitness best{{0.0, Method::quadrature, 0.0, false}, 0.0, 0.5 * (lo + hi)};

  // Limit of infinite slope: the functional picks out a single atom.
  std::vector<double> where;
  const auto jumps = atom_differences(mu, nu, &where);
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    if (std::abs(jumps[i]) > best.value.value) {
      best.value.value = std::abs(jumps[i]);
      best.alpha = kInf;
      best.centre = where[i];
    }
  }

  const int n_alpha = 57, n_z = 81;
  const double log_lo = std::log(1e-3), log_hi = std::log(1e4);
  std::vector<double> zs;
  for (int i = 0; i < n_z; ++i) zs.push_back(lo + (hi - lo) * i / (n_z - 1));
  for (double w : where) zs.push_back(w);
  std::sort(zs.begin(), zs.end());

  double grid_best = -1.0;
  int ia_best = 0;
  double z_best = zs.front();
  for (int ia = 0; ia < n_alpha; ++ia) {
    const double alpha = std::exp(log_lo + (log_hi - log_lo) * ia / (n_alpha - 1));
    for (double z : zs) {
      const double v = std::abs(exp_moment(D, bp, alpha, z));
      if (v > grid_best) {
        grid_best = v;
        ia_best = ia;
        z_best = z;
      }
    }
  }

  const double dla = (log_hi - log_lo) / (n_alpha - 1);
  const double dz = (hi - lo) / (n_z - 1);
  double la = log_lo + dla * ia_best;
  double z = z_best;
  double val = grid_best;
  for (int round = 0; round < 3; ++round) {
    auto in_z = [&](double zz) { return -std::abs(exp_moment(D, bp, std::exp(la), zz)); };
    auto rz = boost::math::tools::brent_find_minima(in_z, z - dz, z + dz, 40);
    if (-rz.second > val) {
      val = -rz.second;
      z = rz.first;
    }
    auto in_a = [&](double l) { return -std::abs(exp_moment(D, bp, std::exp(l), z)); };
    auto ra = boost::math::tools::brent_find_minima(
        in_a, std::max(log_lo, la - dla), std::min(log_hi, la + dla), 40);
    if (-ra.second > val) {
      val = -ra.second;
      la = ra.first;
    }
  }
  if (val > best.value.value) {
    best.value.value = val;
    best.alpha = std::exp(la);
    best.centre = z;
  }
  best.value.value = std::min(best.value.value, 1.0);
  best.value.truncation_error = 1e-12 + 1e-3 * std::max(0.0, val - grid_best);
  return best;
}

FunctionalValue metric_d(const Measure& mu, const Measure& nu) {
  return metric_d_detailed(mu, nu).value;
}

double uniform_cdf_distance(const Measure& mu, const Measure& nu) {
  const CdfDifference D(mu, nu);
  const std::vector<double> bp = breakpoints(mu, nu);
  const double lo = bp.front(), hi = bp.back();
  const double m = 0.5 * (lo + hi), c = 0.5 * (hi - lo);

  double best = 0.0;
  for (double p : bp) {
    best = std::max({best, std::abs(D.right(p)), std::abs(D.left(p))});
  }
  const int K = 4096;
  std::vector<double> xs(K + 1), vs(K + 1);
  for (int i = 0; i <= K; ++i) {
    xs[i] = m - c * std::cos(kPi * i / K);
    vs[i] = std::abs(D.right(xs[i]));
    best = std::max(best, vs[i]);
  }
  std::vector<int> peaks;
  for (int i = 1; i < K; ++i) {
    if (vs[i] >= vs[i - 1] && vs[i] >= vs[i + 1]) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return vs[a] > vs[b]; });
  if (peaks.size() > 8) peaks.resize(8);
  for (int i : peaks) {
    auto f = [&](double x) { return -std::abs(D.right(x)); };
    auto r = boost::math::tools::brent_find_minima(f, xs[i - 1], xs[i + 1], 50);
    best = std::max(best, -r.second);
  }
  return best;
}

double total_variation(const Measure& mu, const Measure& nu) {
  const bool ac_mu = is_atomless(mu), ac_nu = is_atomless(nu);
  const auto* gm = std::get_if<GridMeasure>(&mu);
  const auto* gn = std::get_if<GridMeasure>(&nu);
  const bool pure_mu = gm && !gm->has_density();
  const bool pure_nu = gn && !gn->has_density();

  if (pure_mu && pure_nu) {
    const auto diff = atom_differences(mu, nu, nullptr);
    double s = 0.0;
    for (double d : diff) s += std::abs(d);
    return 0.5 * s;
  }
  if (!(ac_mu && ac_nu)) {
    throw Error("mixed_types",
                "total variation needs two absolutely continuous or two atomic measures");
  }

  const auto* cm = std::get_if<ChebMeasure>(&mu);
  const auto* cn = std::get_if<ChebMeasure>(&nu);
  if (cm && cn && cm->support().same_as(cn->support())) {
    auto g = [&](double t) { return cm->pullback(t) - cn->pullback(t); };
    return 0.5 * abs_integral(g, {0.0, kPi});
  }

  std::vector<double> cuts = breakpoints(mu, nu);
  for (const Measure* m : {&mu, &nu}) {
    if (const auto* g = std::get_if<GridMeasure>(m)) {
      cuts.insert(cuts.end(), g->nodes().begin(), g->nodes().end());
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double s = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double m = 0.5 * (cuts[i] + cuts[i - 1]), c = 0.5 * (cuts[i] - cuts[i - 1]);
    auto g = [&](double tau) {
      const double x = m - c * std::cos(tau);
      return (density_at(mu, x) - density_at(nu, x)) * c * std::sin(tau);
    };
    s += abs_integral(g, {0.0, kPi});
  }
  return 0.5 * s;
}

FunctionalValue fourier_energy(const Measure& mu, const Measure& nu, double tolerance,
                               double max_cutoff) {
  FourierSide side;
  side.add(mu, 1.0);
  side.add(nu, -1.0);
  const auto bp = breakpoints(mu, nu);
  const double diam = std::max(bp.back() - bp.front(), 1e-3);
  const double h = 2.0 / diam;

  auto integrand = [&](double t) { return std::norm(side(t)) / t; };
  auto octave = [&](double a, double b) {
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / h)));
    const double w = (b - a) / panels;
    double s = 0.0;
    for (int k = 0; k < panels; ++k) {
      s += boost::math::quadrature::gauss<double, 15>::integrate(integrand, a + k * w,
                                                                  a + (k + 1) * w);
    }
    return s;
  };

  double T = 16.0 / diam;
  double total = octave(0.0, T);
  double prev = -1.0, prev_value = 0.0;
  for (int k = 0;; ++k) {
    const double cur = octave(T, 2.0 * T);
    total += cur;
    T *= 2.0;
    // Octave contributions decay geometrically once the transforms are asymptotic.
    const double r = prev > 0.0 ? std::clamp(cur / prev, 0.0, 0.75) : 0.5;
    const double value = total + cur * r / (1.0 - r);
    const double err = std::abs(value - prev_value);
    if (k >= 2 && err <= tolerance) {
      FunctionalValue f;
      f.value = value;
      f.method = Method::fourier;
      f.truncation_error = err;
      return f;
    }
    if (2.0 * T > max_cutoff * std::max(1.0, 1.0 / diam)) {
      throw Error("cutoff", "Fourier tail estimate " + fmt(err) + " exceeds tolerance " +
                                fmt(tolerance) + " at cutoff " + fmt(T) +
                                "; retry with max_cutoff >= " + fmt(4.0 * T));
    }
    prev = cur;
    prev_value = value;
  }
}

}  // namespace freeineq
