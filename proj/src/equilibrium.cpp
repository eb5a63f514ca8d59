#include "freeineq/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/roots.hpp>

namespace freeineq {

namespace {

constexpr int kConditionNodes = 1024;
constexpr int kInnerNodes = 512;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double signed_pow(double x, double p) { return std::copysign(std::pow(std::abs(x), p), x); }

bool same_exponent(double p, double q) { return std::abs(p - q) < 1e-14; }

double poly_eval(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
  return s;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

struct Moments {
  double g0, g1;      // integrals of V' and V' cos
  double h0, h1, h2;  // integrals of V'', V'' cos, V'' cos^2
};

Moments condition_moments(const Potential& V, double beta, double c) {
  Moments m{0, 0, 0, 0, 0};
  for (int j = 0; j < kConditionNodes; ++j) {
    const double th = kPi * (j + 0.5) / kConditionNodes;
    const double ct = std::cos(th);
    const double x = beta + c * ct;
    const double d1 = V.d1(x);
    const double d2 = V.d2(x);
    m.g0 += d1;
    m.g1 += d1 * ct;
    m.h0 += d2;
    m.h1 += d2 * ct;
    m.h2 += d2 * ct * ct;
  }
  const double w = kPi / kConditionNodes;
  m.g0 *= w;
  m.g1 *= w;
  m.h0 *= w;
  m.h1 *= w;
  m.h2 *= w;
  return m;
}

double minimizer_of(const Potential& V) {
  const bool walled = std::isfinite(V.wall());
  double lo = walled ? V.wall() + 1.0 : -1.0;
  double hi = walled ? V.wall() + 2.0 : 1.0;
  for (int i = 0; i < 60 && V.d1(hi) < 0.0; ++i) hi = walled ? V.wall() + 2.0 * (hi - V.wall()) : 2.0 * hi;
  for (int i = 0; i < 60 && V.d1(lo) > 0.0; ++i) lo = walled ? V.wall() + 0.5 * (lo - V.wall()) : 2.0 * lo;
  if (V.d1(lo) > 0.0) return walled ? V.wall() : lo;
  if (V.d1(hi) < 0.0) return hi;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++i) {
    const double m = 0.5 * (lo + hi);
    if (V.d1(m) > 0.0) hi = m; else lo = m;
  }
  return 0.5 * (lo + hi);
}

// Width c of the soft-edge support centred at beta from a log-spaced scan of
// the first condition.
double scan_half_width(const Potential& V, double beta) {
  auto g1 = [&](double c) { return c / (2.0 * kPi) * condition_moments(V, beta, c).g1 - 1.0; };
  double prev_c = 1e-4;
  double prev = g1(prev_c);
  for (int i = 1; i <= 160; ++i) {
    const double c = 1e-4 * std::pow(10.0, i * 0.05);
    if (std::isfinite(V.wall()) && beta - c <= V.wall()) break;
    const double g = g1(c);
    if (prev < 0.0 && g >= 0.0) {
      boost::math::tools::eps_tolerance<double> tol(50);
      std::uintmax_t iters = 200;
      auto r = boost::math::tools::toms748_solve(g1, prev_c, c, prev, g, tol, iters);
      return 0.5 * (r.first + r.second);
    }
    prev_c = c;
    prev = g;
  }
  throw Error("solver_bracket", "no bracket found for the support half-width");
}

SupportSolveInfo solve_hard_edge(const Potential& V) {
  const double w = V.wall();
  // Single condition with the left endpoint pinned at the wall.
  auto g = [&](double c) {
    double s = 0.0;
    for (int j = 0; j < kConditionNodes; ++j) {
      const double th = kPi * (j + 0.5) / kConditionNodes;
      const double ct = std::cos(th);
      s += V.d1(w + c + c * ct) * (1.0 + ct);
    }
    return c / (2.0 * kPi) * s * kPi / kConditionNodes - 1.0;
  };
  double prev_c = 1e-6;
  double prev = g(prev_c);
  for (int i = 1; i <= 240; ++i) {
    const double c = 1e-6 * std::pow(10.0, i * 0.05);
    const double v = g(c);
    if (prev < 0.0 && v >= 0.0) {
      boost::math::tools::eps_tolerance<double> tol(52);
      std::uintmax_t iters = 200;
      auto r = boost::math::tools::toms748_solve(g, prev_c, c, prev, v, tol, iters);
      const double cc = 0.5 * (r.first + r.second);
      return {SupportInterval(w, w + 2.0 * cc), static_cast<int>(iters), std::abs(g(cc)), true};
    }
    prev_c = c;
    prev = v;
  }
  throw Error("solver_bracket", "no bracket found for the hard-edge support");
}

}  // namespace

std::string to_string(PotentialFamily f) {
  switch (f) {
    case PotentialFamily::quadratic: return "quadratic";
    case PotentialFamily::even_power: return "even_power";
    case PotentialFamily::quadratic_plus_convex: return "quadratic_plus_convex";
    case PotentialFamily::polynomial: return "polynomial";
    case PotentialFamily::linear_minus_log: return "linear_minus_log";
    case PotentialFamily::custom: return "custom";
  }
  return "custom";
}

Potential Potential::quadratic(double rho) {
  if (!(rho > 0.0)) throw Error("invalid_potential", "quadratic potential needs rho > 0");
  Potential V;
  V.family_ = PotentialFamily::quadratic;
  V.name_ = "quadratic";
  V.params_ = {{"rho", rho}};
  V.v_ = [rho](double x) { return rho * x * x; };
  V.dv_ = [rho](double x) { return 2.0 * rho * x; };
  V.d2v_ = [rho](double) { return 2.0 * rho; };
  return V;
}

Potential Potential::even_power(double rho, double p) {
  if (!(rho > 0.0) || !(p >= 2.0)) {
    throw Error("invalid_potential", "power potential needs rho > 0 and p >= 2");
  }
  Potential V;
  V.family_ = PotentialFamily::even_power;
  V.name_ = "even_power";
  V.params_ = {{"rho", rho}, {"p", p}};
  V.v_ = [rho, p](double x) { return rho * std::pow(std::abs(x), p); };
  V.dv_ = [rho, p](double x) { return rho * p * signed_pow(x, p - 1.0); };
  V.d2v_ = [rho, p](double x) { return rho * p * (p - 1.0) * std::pow(std::abs(x), p - 2.0); };
  return V;
}

Potential Potential::quadratic_plus_convex(double rho, double kappa, double p) {
  if (!(rho > 0.0) || !(kappa >= 0.0) || !(p >= 2.0)) {
    throw Error("invalid_potential", "need rho > 0, kappa >= 0 and p >= 2");
  }
  Potential V;
  V.family_ = PotentialFamily::quadratic_plus_convex;
  V.name_ = "quadratic_plus_convex";
  V.params_ = {{"rho", rho}, {"kappa", kappa}, {"p", p}};
  V.v_ = [=](double x) { return rho * x * x + kappa * std::pow(std::abs(x), p); };
  V.dv_ = [=](double x) { return 2.0 * rho * x + kappa * p * signed_pow(x, p - 1.0); };
  V.d2v_ = [=](double x) {
    return 2.0 * rho + kappa * p * (p - 1.0) * std::pow(std::abs(x), p - 2.0);
  };
  return V;
}

Potential Potential::polynomial(std::vector<double> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  if (coeffs.size() < 3 || (coeffs.size() - 1) % 2 != 0 || !(coeffs.back() > 0.0)) {
    throw Error("invalid_potential",
                "polynomial potential needs even degree >= 2 and positive leading coefficient");
  }
  Potential V;
  V.family_ = PotentialFamily::polynomial;
  V.name_ = "polynomial";
  for (std::size_t k = 0; k < coeffs.size(); ++k) V.params_["c" + std::to_string(k)] = coeffs[k];
  auto d1 = poly_derivative(coeffs);
  auto d2 = poly_derivative(d1);
  V.v_ = [coeffs](double x) { return poly_eval(coeffs, x); };
  V.dv_ = [d1](double x) { return poly_eval(d1, x); };
  V.d2v_ = [d2](double x) { return poly_eval(d2, x); };
  return V;
}

Potential Potential::linear_minus_log(double r, double s) {
  if (!(r > 0.0) || !(s >= 0.0)) throw Error("invalid_potential", "need r > 0 and s >= 0");
  Potential V;
  V.family_ = PotentialFamily::linear_minus_log;
  V.name_ = "linear_minus_log";
  V.params_ = {{"r", r}, {"s", s}};
  V.wall_ = 0.0;
  V.v_ = [r, s](double x) { return s == 0.0 ? r * x : r * x - s * std::log(x); };
  V.dv_ = [r, s](double x) { return r - s / x; };
  V.d2v_ = [s](double x) { return s / (x * x); };
  return V;
}

Potential Potential::custom(std::string name, Fn v, Fn dv, Fn d2v, double wall) {
  Potential V;
  V.family_ = PotentialFamily::custom;
  V.name_ = std::move(name);
  V.v_ = std::move(v);
  V.dv_ = std::move(dv);
  V.d2v_ = std::move(d2v);
  V.wall_ = wall;
  return V;
}

double Potential::param(const std::string& key) const {
  auto it = params_.find(key);
  if (it == params_.end()) throw Error("invalid_potential", "potential has no parameter " + key);
  return it->second;
}

bool Potential::repels_wall() const {
  if (!std::isfinite(wall_)) return false;
  if (family_ == PotentialFamily::linear_minus_log) return param("s") > 0.0;
  return d1(wall_ + 1e-12) < -1e6;
}

Potential Potential::affine(double alpha, double beta) const {
  if (alpha == 0.0) throw Error("invalid_argument", "affine change needs alpha != 0");
  Potential base = *this;
  double w = -std::numeric_limits<double>::infinity();
  if (std::isfinite(wall_)) {
    if (alpha < 0.0) throw Error("invalid_argument", "a walled potential cannot be reflected");
    w = (wall_ - beta) / alpha;
  }
  Potential V = custom(
      name_ + "@affine", [base, alpha, beta](double x) { return base.value(alpha * x + beta); },
      [base, alpha, beta](double x) { return alpha * base.d1(alpha * x + beta); },
      [base, alpha, beta](double x) { return alpha * alpha * base.d2(alpha * x + beta); }, w);
  V.params_ = {{"alpha", alpha}, {"beta", beta}};
  return V;
}

Potential Potential::plus_constant(double c) const {
  Potential V = *this;
  auto v = v_;
  V.v_ = [v, c](double x) { return v(x) + c; };
  V.params_["shift"] = (params_.count("shift") ? params_.at("shift") : 0.0) + c;
  return V;
}

bool Potential::certifies(double rho, double p, std::string* method, double probe) const {
  auto symbolic = [&](bool ok) {
    if (method) *method = "symbolic";
    return ok;
  };
  switch (family_) {
    case PotentialFamily::quadratic:
      if (same_exponent(p, 2.0)) return symbolic(rho <= param("rho"));
      if (rho <= 0.0) return symbolic(true);
      break;
    case PotentialFamily::even_power: {
      const double p0 = param("p");
      if (same_exponent(p, p0)) return symbolic(rho <= param("rho"));
      if (rho <= 0.0) return symbolic(true);
      break;
    }
    case PotentialFamily::quadratic_plus_convex: {
      const double p0 = param("p");
      if (same_exponent(p, 2.0)) return symbolic(rho <= param("rho"));
      if (same_exponent(p, p0)) return symbolic(rho <= param("kappa"));
      if (rho <= 0.0) return symbolic(true);
      break;
    }
    case PotentialFamily::linear_minus_log:
      return symbolic(rho <= 0.0);
    default:
      break;
  }
  if (method) *method = "sampled";
  const bool walled = std::isfinite(wall_);
  const double lo = walled ? wall_ + probe * 1e-3 : -probe;
  const double hi = walled ? wall_ + probe : probe;
  for (int i = 0; i < 1000; ++i) {
    const double x = lo + (hi - lo) * i / 999.0;
    const double need = rho * p * (p - 1.0) * std::pow(std::abs(x), p - 2.0);
    const double have = d2(x);
    if (have - need < -1e-10 * (1.0 + std::abs(have))) return false;
  }
  return true;
}

void Potential::check_growth() const {
  if (family_ == PotentialFamily::custom) return;
  for (double sgn : {1.0, -1.0}) {
    if (std::isfinite(wall_) && sgn < 0.0) continue;
    const double g1 = value(sgn * 1e3) - 2.0 * std::log(1e3);
    const double g2 = value(sgn * 1e6) - 2.0 * std::log(1e6);
    if (!(g2 > g1) || !(g2 > 0.0)) {
      throw Error("growth", "potential " + name_ + " fails the growth condition");
    }
  }
}

// ---------------------------------------------------------------------------

std::pair<double, double> support_conditions(const Potential& V, SupportInterval s) {
  const double beta = s.mid(), c = s.half();
  const Moments m = condition_moments(V, beta, c);
  const double first = c / (2.0 * kPi) * (m.g0 + m.g1) - 1.0;
  const double second = c / (2.0 * kPi) * (m.g0 - m.g1) + 1.0;
  return {first, second};
}

SupportSolveInfo solve_support_detailed(const Potential& V) {
  if (!V.is_convex()) {
    throw Error("non_convex",
                "potential " + V.name() +
                    " is not certified convex; supply the support manually");
  }
  V.check_growth();
  if (std::isfinite(V.wall()) && !V.repels_wall()) return solve_hard_edge(V);

  double beta = minimizer_of(V);
  double c;
  const double curv = V.d2(beta);
  if (std::isfinite(curv) && curv > 1e-8) {
    c = 2.0 / std::sqrt(curv);
  } else {
    c = scan_half_width(V, beta);
  }
  if (std::isfinite(V.wall()) && beta - c <= V.wall()) c = 0.9 * (beta - V.wall());

  auto residual = [&](double bb, double cc, double& r1, double& r2) {
    const Moments m = condition_moments(V, bb, cc);
    r1 = cc / (2.0 * kPi) * m.g1 - 1.0;
    r2 = cc / (2.0 * kPi) * m.g0;
  };
  double r1, r2;
  residual(beta, c, r1, r2);
  int it = 0;
  for (; it < 200; ++it) {
    const double norm = std::hypot(r1, r2);
    if (norm < 1e-14) break;
    const Moments m = condition_moments(V, beta, c);
    const double j11 = c / (2.0 * kPi) * m.h1;
    const double j12 = m.g1 / (2.0 * kPi) + c / (2.0 * kPi) * m.h2;
    const double j21 = c / (2.0 * kPi) * m.h0;
    const double j22 = m.g0 / (2.0 * kPi) + c / (2.0 * kPi) * m.h1;
    const double det = j11 * j22 - j12 * j21;
    if (!std::isfinite(det) || det == 0.0) {
      throw Error("solver_singular", "singular Jacobian in the support solve");
    }
    const double db = -(j22 * r1 - j12 * r2) / det;
    const double dc = -(-j21 * r1 + j11 * r2) / det;
    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 50; ++k, lambda *= 0.5) {
      const double nb = beta + lambda * db;
      const double nc = c + lambda * dc;
      if (!(nc > 0.0)) continue;
      if (std::isfinite(V.wall()) && nb - nc <= V.wall()) continue;
      double s1, s2;
      residual(nb, nc, s1, s2);
      if (std::isfinite(s1) && std::isfinite(s2) && std::hypot(s1, s2) < norm * (1.0 - 1e-4 * lambda)) {
        beta = nb;
        c = nc;
        r1 = s1;
        r2 = s2;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  const double res = std::max(std::abs(r1), std::abs(r2));
  if (!(res < 1e-10)) {
    throw Error("solver_nonconvergence",
                "support solve stalled after " + std::to_string(it) +
                    " iterations with residuals " + fmt(r1) + ", " + fmt(r2));
  }
  return {SupportInterval(beta - c, beta + c), it, res, false};
}

SupportInterval solve_support(const Potential& V) { return solve_support_detailed(V).support; }

double robin_value(const Potential& V, const ChebMeasure& mu, double x) {
  return V.value(x) - 2.0 * log_potential(mu, x);
}

double euler_lagrange_residual(const Potential& V, const ChebMeasure& mu) {
  const auto& s = mu.support();
  const HilbertTransform H(mu);
  double worst = 0.0;
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    const double x = s.a() + s.length() * (0.05 + 0.9 * i / n);
    worst = std::max(worst, std::abs(V.d1(x) - H(x)));
  }
  return worst;
}

EquilibriumResult equilibrium_density(const Potential& V, SupportInterval support, int N) {
  const double a = support.a(), b = support.b();
  const double beta = support.mid(), c = support.half();
  const bool hard = std::isfinite(V.wall()) && !V.repels_wall() &&
                    std::abs(a - V.wall()) <= 1e-12 * std::max(1.0, b - a);
  const double near = 1e-7 * (b - a);

  // Integral over [0, pi] of (V'(y) - V'(x)) / (y - x) w(theta) with y = beta + c cos theta.
  auto inner = [&](double x, bool hard_weight) {
    const double dx = V.d1(x);
    const double d2x = V.d2(x);
    double s = 0.0;
    for (int j = 0; j < kInnerNodes; ++j) {
      const double th = kPi * (j + 0.5) / kInnerNodes;
      const double y = beta + c * std::cos(th);
      const double q = std::abs(y - x) < near ? d2x : (V.d1(y) - dx) / (y - x);
      s += hard_weight ? q * (1.0 + std::cos(th)) : q;
    }
    return s * kPi / kInnerNodes;
  };

  std::function<double(double)> pullback;
  if (hard) {
    pullback = [&](double t) {
      const double x = beta + c * std::cos(t);
      const double j = c * inner(x, true);
      return c * (1.0 - std::cos(t)) * (j / (2.0 * kPi * kPi) + V.d1(x) / (2.0 * kPi));
    };
  } else {
    pullback = [&](double t) {
      const double x = beta + c * std::cos(t);
      const double st = std::sin(t);
      return c * c * st * st * inner(x, false) / (2.0 * kPi * kPi);
    };
  }

  const int M = N + 1;
  std::vector<double> samples(M);
  for (int j = 0; j < M; ++j) {
    const double t = kPi * (j + 0.5) / M;
    samples[j] = pullback(t);
    if (samples[j] < -1e-9) {
      throw Error("negative_density",
                  "equilibrium density negative at x=" + fmt(beta + c * std::cos(t)) +
                      "; wrong support or non-convex potential");
    }
  }
  ChebMeasure raw(support, cosine_coefficients(samples));
  if (raw.min_pullback() < -1e-9) {
    throw Error("negative_density", "equilibrium density negative on the check grid");
  }

  std::vector<std::string> warnings;
  const double drift = std::abs(raw.mass() - 1.0);
  if (drift > 1e-8) {
    warnings.push_back("mass drift " + fmt(drift) + " before normalization");
  }
  ChebMeasure mu = raw.normalized();

  const double x0 = support.mid();
  const double r0 = robin_value(V, mu, x0);
  double lo = r0, hi = r0;
  for (double f : {0.25, 0.75}) {
    const double r = robin_value(V, mu, a + f * (b - a));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }

  double vint = 0.0;
  const int Q = 2048;
  for (int j = 0; j < Q; ++j) {
    const double t = kPi * (j + 0.5) / Q;
    vint += V.value(mu.to_x(t)) * mu.pullback(t);
  }
  vint *= kPi / Q;

  return EquilibriumResult{V,  support, mu, r0, hi - lo, euler_lagrange_residual(V, mu),
                           vint + log_energy(mu), drift, warnings};
}

EquilibriumResult solve_equilibrium(const Potential& V, int N) {
  return equilibrium_density(V, solve_support(V), N);
}

AffineCovarianceReport affine_covariance_check(const Potential& V, double alpha, double beta) {
  if (alpha == 0.0) throw Error("invalid_argument", "affine check needs alpha != 0");
  const EquilibriumResult base = solve_equilibrium(V);
  const EquilibriumResult moved = solve_equilibrium(V.affine(alpha, beta));
  const ChebMeasure pushed = base.measure.affine_image(1.0 / alpha, -beta / alpha);

  const double lo = std::min(pushed.support().a(), moved.support.a());
  const double hi = std::max(pushed.support().b(), moved.support.b());
  double dist = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double x = lo + (hi - lo) * i / 2000.0;
    dist = std::max(dist, std::abs(pushed.cdf(x) - moved.measure.cdf(x)));
  }
  const double mismatch = std::abs(base.energy - (moved.energy - std::log(std::abs(alpha))));
  return {alpha,    beta, base.support, moved.support, dist, base.energy, moved.energy,
          mismatch, dist <= 1e-8 && mismatch <= 1e-8};
}

}  // namespace freeineq
