#include "freeineq/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/tools/minima.hpp>

namespace freeineq {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

bool is_two(double p) { return std::abs(p - 2.0) < 1e-12; }

std::string require_certificate(const Potential& V, double rho, double p) {
  std::string method;
  if (!V.certifies(rho, p, &method)) {
    throw Error("no_certificate", "no certificate that " + V.name() + " - " + fmt(rho) +
                                      "|x|^" + fmt(p) + " is convex");
  }
  return method;
}

InequalityReport make_report(std::string kind, double lhs, double rhs, double tol) {
  InequalityReport r;
  r.kind = std::move(kind);
  r.lhs = lhs;
  r.rhs = rhs;
  r.gap = rhs - lhs;
  r.tolerance = tol;
  r.verdict = classify(r.gap, tol);
  return r;
}

void describe(InequalityReport& r, const EquilibriumResult& eq, double rho, double p,
              const std::string& certificate) {
  r.inputs["potential"] = eq.potential.name();
  r.inputs["rho"] = fmt(rho);
  r.inputs["p"] = fmt(p);
  r.inputs["certificate"] = certificate;
}

double conjugate(double p) { return p / (p - 1.0); }

// max over W >= 0 of a W - b W^p.
double young_maximum(double a, double b, double p) {
  const double q = conjugate(p);
  return std::pow(a, q) / (q * std::pow(p * b, q / p));
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::equality: return "equality";
    case Verdict::violated: return "violated";
  }
  return "unknown";
}

double report_tolerance(std::initializer_list<double> truncation_errors) {
  double s = 0.0;
  for (double e : truncation_errors) s += std::abs(e);
  return std::max(1e-9, 10.0 * s);
}

Verdict classify(double gap, double tolerance) {
  if (std::abs(gap) <= tolerance) return Verdict::equality;
  return gap > 0.0 ? Verdict::holds : Verdict::violated;
}

double constant_cp(double p) {
  if (!(p > 1.0)) throw Error("domain", "c_p needs p > 1, got " + fmt(p));
  if (is_two(p)) return 1.0;
  auto g = [p](double x) {
    const double ax = std::abs(x);
    const double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    return std::pow(std::abs(1.0 + x), p) - std::pow(ax, p) - p * sgn * std::pow(ax, p - 1.0);
  };
  const int n = 20001;
  const double lo = -50.0, hi = 50.0, h = (hi - lo) / (n - 1);
  int best = 0;
  double bv = g(lo);
  for (int i = 1; i < n; ++i) {
    const double v = g(lo + h * i);
    if (v < bv) {
      bv = v;
      best = i;
    }
  }
  const double x0 = lo + h * best;
  auto r = boost::math::tools::brent_find_minima(g, std::max(lo, x0 - h), std::min(hi, x0 + h),
                                                 60);
  const double cp = std::min(bv, r.second);
  if (!(cp > 0.0)) throw Error("numerical", "c_p is not positive for p=" + fmt(p));
  return cp;
}

InequalityReport check_transport(const EquilibriumResult& eq, double rho, double p,
                                 const Measure& mu) {
  if (!(rho > 0.0)) throw Error("domain", "transport inequality needs rho > 0");
  if (!(p > 1.0)) throw Error("domain", "transport inequality needs p > 1");
  const std::string cert = require_certificate(eq.potential, rho, p);
  const FunctionalValue R = relative_energy(eq, mu);
  const FunctionalValue W = wasserstein(p, mu, Measure(eq.measure));
  const double cp = constant_cp(p);
  const double lhs = cp * rho * std::pow(W.value, p);
  const double lhs_err = cp * rho * p * std::pow(W.value, p - 1.0) * W.truncation_error;
  InequalityReport r = make_report(is_two(p) ? "transport" : "transport_p", lhs, R.value,
                                   report_tolerance({R.truncation_error, lhs_err}));
  describe(r, eq, rho, p, cert);
  r.extras["W"] = W.value;
  r.extras["c_p"] = cp;
  if (R.infinite) {
    r.rhs = R.value;
    r.gap = R.value;
    r.verdict = Verdict::holds;
    r.notes.push_back("relative energy is infinite");
  }
  return r;
}

double transport_ratio(const EquilibriumResult& eq, const Measure& mu) {
  const double R = relative_energy(eq, mu).value;
  const double W = wasserstein(2.0, mu, Measure(eq.measure)).value;
  if (W <= 0.0) throw Error("domain", "measure coincides with the equilibrium measure");
  return R / (W * W);
}

InequalityReport check_lsi(const EquilibriumResult& eq, double rho, const Measure& mu,
                           double p) {
  if (!(rho > 0.0)) throw Error("domain", "log-Sobolev inequality needs rho > 0");
  if (!(p > 1.0)) throw Error("domain", "log-Sobolev inequality needs p > 1");
  const std::string cert = require_certificate(eq.potential, rho, p);
  const FunctionalValue R = relative_energy(eq, mu);
  const double q = conjugate(p);
  const FunctionalValue I = fisher(eq.potential, mu, is_two(p) ? 2.0 : q);

  double factor;
  if (is_two(p)) {
    factor = 1.0 / (4.0 * rho);
  } else {
    const double cp = constant_cp(p);
    factor = std::pow(p * cp, q / p) / q / std::pow(rho, q / p);
  }
  InequalityReport r;
  if (I.infinite) {
    r = make_report(is_two(p) ? "lsi" : "lsi_p", R.value, I.value, 1e-9);
    r.gap = I.value;
    r.verdict = Verdict::holds;
    r.notes.push_back("Fisher information is infinite");
  } else {
    r = make_report(is_two(p) ? "lsi" : "lsi_p", R.value, factor * I.value,
                    report_tolerance({R.truncation_error, factor * I.truncation_error}));
  }
  describe(r, eq, rho, p, cert);
  r.extras["fisher"] = I.value;
  if (!is_two(p) && !I.infinite) {
    const double cp = constant_cp(p);
    r.extras["rhs_young"] = young_maximum(std::pow(I.value, 1.0 / q), rho * cp, p);
  }
  return r;
}

InequalityReport check_hwi(const EquilibriumResult& eq, double rho, const Measure& mu,
                           double p) {
  if (!(p > 1.0)) throw Error("domain", "HWI inequality needs p > 1");
  if (!is_two(p) && rho < 0.0) throw Error("domain", "the p-variant of HWI needs rho >= 0");
  const std::string cert = require_certificate(eq.potential, rho, p);
  const FunctionalValue R = relative_energy(eq, mu);
  const double q = conjugate(p);
  const FunctionalValue I = fisher(eq.potential, mu, is_two(p) ? 2.0 : q);
  const FunctionalValue W = wasserstein(p, mu, Measure(eq.measure));
  const double cp = constant_cp(p);

  InequalityReport r;
  const char* kind = is_two(p) ? "hwi" : "hwi_p";
  if (I.infinite) {
    r = make_report(kind, R.value, I.value, 1e-9);
    r.gap = I.value;
    r.verdict = Verdict::holds;
    r.notes.push_back("Fisher information is infinite");
    describe(r, eq, rho, p, cert);
    return r;
  }
  const double root = std::pow(I.value, 1.0 / q);
  const double rhs = root * W.value - rho * cp * std::pow(W.value, p);
  const double root_err = I.value > 0.0 ? root / q * I.truncation_error / I.value : 0.0;
  const double rhs_err = root_err * W.value +
                         (root + rho * cp * p * std::pow(W.value, p - 1.0)) * W.truncation_error;
  r = make_report(kind, R.value, rhs, report_tolerance({R.truncation_error, rhs_err}));
  describe(r, eq, rho, p, cert);
  r.extras["fisher"] = I.value;
  r.extras["W"] = W.value;
  if (rho > 0.0) {
    const double implied = young_maximum(root, rho * cp, p);
    r.extras["implied_lsi_rhs"] = implied;
    r.extras["chain_ok"] = rhs <= implied + r.tolerance ? 1.0 : 0.0;
  }
  return r;
}

LsiConstant lsi_constant_from_transport(double C, double rho) {
  if (!(C > std::max(0.0, -rho))) {
    throw Error("domain", "transport constant must exceed max{0, -rho}, got C=" + fmt(C));
  }
  LsiConstant k;
  k.delta = 2.0 / (C + rho);
  k.K = std::max(rho, (C + rho) * (C + rho) / (32.0 * C));
  k.K_from_min = std::max(rho, (C + rho) * (C + rho) / (64.0 * C));
  return k;
}

InequalityReport check_brunn_minkowski(const Potential& V1, const Potential& V2,
                                       const Potential& V3, double a) {
  if (!(a > 0.0 && a < 1.0)) throw Error("domain", "interpolation weight must lie in (0,1)");
  const EquilibriumResult e1 = solve_equilibrium(V1);
  const EquilibriumResult e2 = solve_equilibrium(V2);

  const double lo = std::min(e1.support.a(), e2.support.a());
  const double hi = std::max(e1.support.b(), e2.support.b());
  const int n = 201;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double y = lo + (hi - lo) * j / (n - 1);
      const double left = a * V1.value(x) + (1.0 - a) * V2.value(y);
      const double right = V3.value(a * x + (1.0 - a) * y);
      if (left - right < -1e-12 * (1.0 + std::abs(left))) {
        throw Error("hypothesis", "a V1(x) + (1-a) V2(y) < V3(a x + (1-a) y) at x=" + fmt(x) +
                                      ", y=" + fmt(y) + " (" + fmt(left) + " < " +
                                      fmt(right) + ")");
      }
    }
  }
  const EquilibriumResult e3 = solve_equilibrium(V3);
  const FunctionalValue E1 = energy(V1, Measure(e1.measure));
  const FunctionalValue E2 = energy(V2, Measure(e2.measure));
  const FunctionalValue E3 = energy(V3, Measure(e3.measure));
  InequalityReport r =
      make_report("brunn_minkowski", E3.value, a * E1.value + (1.0 - a) * E2.value,
                  report_tolerance({E1.truncation_error, E2.truncation_error,
                                    E3.truncation_error}));
  r.inputs["V1"] = V1.name();
  r.inputs["V2"] = V2.name();
  r.inputs["V3"] = V3.name();
  r.inputs["a"] = fmt(a);
  r.extras["grid_points"] = static_cast<double>(n) * n;
  return r;
}

ChebMeasure pinsker_measure(int n) {
  if (n < 4) throw Error("domain", "the counterexample sequence starts at n = 4");
  std::vector<double> c(4 * n, 0.0);
  c[0] = 1.0 / kPi;
  c[2] = -1.0 / kPi;
  const double amp = 1.0 / (4.0 * kPi * (static_cast<double>(n) * n - 1.0));
  for (int k = 2; k <= 2 * n - 1; ++k) c[2 * k + 1] = (k % 2 == 0 ? amp : -amp);
  return ChebMeasure(SupportInterval(-1.0, 1.0), c);
}

PinskerRecord pinsker_counterexample(int n) {
  const ChebMeasure mu = pinsker_measure(n);
  const EquilibriumResult eq = solve_equilibrium(Potential::quadratic(2.0));
  PinskerRecord r;
  r.n = n;
  double s = 0.0;
  for (int l = 2; l <= 2 * n - 1; ++l) s += 1.0 / (2.0 * l + 1.0);
  const double nn = static_cast<double>(n) * n - 1.0;
  r.closed_form = s / (32.0 * nn * nn);
  r.uniform_dist_lb = s / (4.0 * kPi * nn);
  r.energy_gap = relative_energy(eq, Measure(mu)).value;
  r.uniform_distance = uniform_cdf_distance(Measure(mu), Measure(eq.measure));
  r.ratio_bound = kPi * kPi / std::log(n / 3.0);
  r.ratio = r.energy_gap / (r.uniform_distance * r.uniform_distance);
  r.min_pullback = mu.min_pullback();
  r.bound_holds = r.ratio <= r.ratio_bound;
  return r;
}

ArcsineTvRecord arcsine_tv_example(int n) {
  if (n < 1) throw Error("domain", "arcsine example needs n >= 1");
  const SupportInterval s(-1.0, 1.0);
  const ChebMeasure arcsine(s, {1.0 / kPi});
  std::vector<double> c(n + 1, 0.0);
  c[0] = 1.0 / kPi;
  c[n] -= 1.0 / kPi;
  const ChebMeasure mu(s, c);
  ArcsineTvRecord r;
  r.n = n;
  r.energy_gap = difference_log_energy(mu, arcsine);
  r.claimed_gap = 1.0 / n;
  r.tv = total_variation(Measure(mu), Measure(arcsine));
  r.tv_lower = 0.25;
  return r;
}

std::vector<ChebMeasure> perturbation_family(const EquilibriumResult& eq, int count,
                                             std::uint64_t seed, int modes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0), size(0.2, 1.0);
  const ChebMeasure& base = eq.measure;
  const int G = 4096;
  std::vector<double> ts(G), hv(G);
  for (int j = 0; j < G; ++j) {
    ts[j] = kPi * (j + 0.5) / G;
    hv[j] = base.pullback(ts[j]);
  }
  std::vector<ChebMeasure> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    std::vector<double> e(modes + 3, 0.0);
    for (int k = 1; k <= modes; ++k) {
      const double v = coef(rng);
      e[k] += v;
      e[k + 2] -= v;
    }
    const ChebMeasure dir(base.support(), e);
    double smax = std::numeric_limits<double>::infinity();
    for (int j = 0; j < G; ++j) {
      const double pv = dir.pullback(ts[j]);
      if (pv < 0.0) smax = std::min(smax, std::max(hv[j], 0.0) / -pv);
    }
    const double scale = 0.9 * size(rng) * (std::isfinite(smax) ? smax : 1.0);
    std::vector<double> c = base.coeffs();
    c.resize(std::max(c.size(), e.size()), 0.0);
    for (std::size_t k = 0; k < e.size(); ++k) c[k] += scale * e[k];
    ChebMeasure mu(base.support(), std::move(c));
    if (mu.min_pullback() < -1e-12) continue;
    out.push_back(std::move(mu));
  }
  return out;
}

std::vector<ChebMeasure> shift_family(const EquilibriumResult& eq, int count,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> shift(-0.5, 0.5), dilate(std::log(0.7),
                                                                  std::log(1.4));
  const ChebMeasure& base = eq.measure;
  const double wall = eq.potential.wall();
  const bool walled = std::isfinite(wall);
  const double pivot = walled ? wall : base.support().mid();
  std::vector<ChebMeasure> out;
  for (int i = 0; i < count; ++i) {
    double m = shift(rng) * base.support().half();
    const double alpha = std::exp(dilate(rng));
    if (walled) m = std::abs(m);
    out.push_back(base.affine_image(alpha, pivot * (1.0 - alpha) + m));
  }
  return out;
}

}  // namespace freeineq
