#include "freeineq/positive_axis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace freeineq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void require_positive_axis(const SupportInterval& s) {
  if (s.a() < 0.0) {
    throw Error("domain", "measure on the positive axis has support starting at " + fmt(s.a()));
  }
}

ChebMeasure trimmed(const ChebMeasure& mu) {
  double scale = 0.0;
  for (double c : mu.coeffs()) scale = std::max(scale, std::abs(c));
  int n = mu.degree();
  while (n > 8 && std::abs(mu.coeffs()[n]) < 1e-18 * scale) --n;
  return mu.with_degree(n);
}

int default_size(int degree) { return std::clamp(4 * (degree + 1) + 31, 511, 4095); }

// Midpoint rule in t against the pullback of mu.
double integrate_pullback(const ChebMeasure& mu, const std::function<double(double)>& f, int Q) {
  double s = 0.0;
  for (int j = 0; j < Q; ++j) {
    const double t = kPi * (j + 0.5) / Q;
    s += f(mu.to_x(t)) * mu.pullback(t);
  }
  return s * kPi / Q;
}

// Integral of an even function against the symmetric measure.
double integrate_even(const SymmetricMeasure& sym, const std::function<double(double)>& f,
                      int Q) {
  return integrate_pullback(sym.carrier(), f, Q);
}

double plus_cross_term(const ChebMeasure& half, int Q) {
  std::vector<double> u(Q), w(Q);
  for (int j = 0; j < Q; ++j) {
    const double t = kPi * (j + 0.5) / Q;
    u[j] = half.to_x(t);
    w[j] = half.pullback(t) * kPi / Q;
  }
  double s = 0.0;
  for (int i = 0; i < Q; ++i) {
    for (int j = 0; j < Q; ++j) s += w[i] * w[j] * std::log(u[i] + u[j]);
  }
  return s;
}

double symmetric_energy(const Potential& Vt, const SymmetricMeasure& sym, int Q) {
  return integrate_even(sym, [&](double x) { return Vt.value(x); }, Q) + sym.log_energy();
}

struct EnergyPair {
  double value;
  double error;
};

EnergyPair symmetric_energy_checked(const Potential& V, const SymmetricMeasure& sym) {
  const Potential Vt = tilde_potential(V);
  const double fine = symmetric_energy(Vt, sym, 2048);
  const double coarse = symmetric_energy(Vt, sym, 1024);
  return {fine, std::abs(fine - coarse) + sym.carrier().truncation_error()};
}

bool rough_edge(const ChebMeasure& mu, double t) {
  double scale = 0.0;
  for (double v : mu.coeffs()) scale += std::abs(v);
  return std::abs(mu.pullback(t)) > 1e-9 * std::max(scale, 1.0);
}

FunctionalValue finite(double fine, double coarse, Method m) {
  FunctionalValue f;
  f.value = fine;
  f.method = m;
  f.truncation_error = std::abs(fine - coarse);
  return f;
}

FunctionalValue infinite() {
  FunctionalValue f;
  f.value = kInf;
  f.infinite = true;
  return f;
}

// int (H tilde mu - tilde V')^2 d tilde mu, with H tilde mu(u) = H half(u) / 2 + int half(dv) / (u + v)
// on the positive half when the support avoids 0.
double half_fisher(const Potential& V, const ChebMeasure& half, int Q) {
  const HilbertTransform H(half);
  std::vector<double> u(Q), w(Q);
  for (int j = 0; j < Q; ++j) {
    const double t = kPi * (j + 0.5) / Q;
    u[j] = half.to_x(t);
    w[j] = half.pullback(t) * kPi / Q;
  }
  double s = 0.0;
  for (int i = 0; i < Q; ++i) {
    double reflected = 0.0;
    for (int j = 0; j < Q; ++j) reflected += w[j] / (u[i] + u[j]);
    const double t = kPi * (i + 0.5) / Q;
    const double r = 0.5 * H.at_angle(t) + reflected - u[i] * V.d1(u[i] * u[i]);
    s += w[i] * r * r;
  }
  return s;
}

double whole_fisher(const Potential& V, const ChebMeasure& whole, int Q) {
  const HilbertTransform H(whole);
  double s = 0.0;
  for (int j = 0; j < Q; ++j) {
    const double t = kPi * (j + 0.5) / Q;
    const double x = whole.to_x(t);
    const double r = H.at_angle(t) - x * V.d1(x * x);
    s += whole.pullback(t) * r * r;
  }
  return s * kPi / Q;
}

double direct_fisher(const Potential& V, const ChebMeasure& mu, int Q) {
  const HilbertTransform H(mu);
  double s = 0.0;
  for (int j = 0; j < Q; ++j) {
    const double t = kPi * (j + 0.5) / Q;
    const double x = mu.to_x(t);
    const double r = H.at_angle(t) - V.d1(x);
    s += x * mu.pullback(t) * r * r;
  }
  return s * kPi / Q;
}

double weighted_derivative_integral(const ChebMeasure& mu, const TestFunction& f, int power) {
  const int Q = std::max(1024, 8 * (f.degree() + mu.degree() + 1));
  return integrate_pullback(mu, [&](double x) {
    const double d = f.derivative(x);
    return std::pow(x, power) * d * d;
  }, Q);
}

InequalityReport lower_report(std::string kind, double lhs, double rhs, double tol) {
  InequalityReport r;
  r.kind = std::move(kind);
  r.lhs = lhs;
  r.rhs = rhs;
  r.gap = lhs - rhs;
  r.tolerance = tol;
  r.verdict = classify(r.gap, tol);
  return r;
}

InequalityReport upper_report(std::string kind, double lhs, double rhs, double tol) {
  InequalityReport r;
  r.kind = std::move(kind);
  r.lhs = lhs;
  r.rhs = rhs;
  r.gap = rhs - lhs;
  r.tolerance = tol;
  r.verdict = classify(r.gap, tol);
  return r;
}

}  // namespace

const ChebMeasure& SymmetricMeasure::carrier() const { return whole ? *whole : *half; }

double SymmetricMeasure::cdf(double x) const {
  if (whole) return whole->cdf(x);
  if (x >= 0.0) return 0.5 + 0.5 * half->cdf(x);
  return 0.5 - 0.5 * half->cdf(-x);
}

double SymmetricMeasure::quantile(double q) const {
  if (whole) return whole->quantile(q);
  if (q >= 0.5) return half->quantile(std::min(1.0, 2.0 * q - 1.0));
  return -half->quantile(std::min(1.0, 1.0 - 2.0 * q));
}

double SymmetricMeasure::density(double x) const {
  if (whole) {
    if (!whole->support().contains(x)) return 0.0;
    return whole->density_unchecked(x);
  }
  const double u = std::abs(x);
  if (!half->support().contains(u)) return 0.0;
  return 0.5 * half->density_unchecked(u);
}

double SymmetricMeasure::log_energy() const {
  if (whole) return freeineq::log_energy(*whole);
  return 0.5 * freeineq::log_energy(*half) - 0.5 * plus_cross_term(*half, 1024);
}

ChebMeasure SymmetricMeasure::positive_half() const {
  if (half) return *half;
  const double R = whole->support().b();
  return trimmed(cheb_from_samples([&](double u) { return 2.0 * whole->density_unchecked(u); },
                                   SupportInterval(0.0, R), 4095));
}

SymmetricMeasure symmetrize(const ChebMeasure& mu, int N) {
  const SupportInterval& s = mu.support();
  require_positive_axis(s);
  const double ra = std::sqrt(s.a()), rb = std::sqrt(s.b());
  SymmetricMeasure out{s, std::nullopt, std::nullopt};
  if (s.a() == 0.0) {
    // Under x = sqrt(b) cos t the pullback becomes h(2t): only even modes survive.
    std::vector<double> c(2 * mu.coeffs().size() - 1, 0.0);
    for (std::size_t k = 0; k < mu.coeffs().size(); ++k) c[2 * k] = mu.coeffs()[k];
    out.whole = ChebMeasure(SupportInterval(-rb, rb), std::move(c));
    return out;
  }
  // The law of sqrt(X) has pullback h(tau) 2u / sqrt((u + sqrt a)(u + sqrt b)), u = sqrt x(tau).
  const SupportInterval hs(ra, rb);
  out.half = trimmed(cheb_from_pullback([&](double t) {
    const double u = hs.mid() + hs.half() * std::cos(t);
    const double tau = mu.to_t(std::clamp(u * u, s.a(), s.b()));
    return mu.pullback(tau) * 2.0 * u / std::sqrt((u + ra) * (u + rb));
  }, hs, N > 0 ? N : default_size(mu.degree())));
  return out;
}

SymmetricMeasure symmetrize_half(const ChebMeasure& half, int N) {
  const SupportInterval& hs = half.support();
  require_positive_axis(hs);
  SymmetricMeasure out{SupportInterval(hs.a() * hs.a(), hs.b() * hs.b()), half, std::nullopt};
  if (hs.a() == 0.0) {
    const double rb = hs.b();
    out.whole = trimmed(cheb_from_samples([&](double x) {
      const double u = std::abs(x);
      return u >= rb ? 0.0 : 0.5 * half.density_unchecked(u);
    }, SupportInterval(-rb, rb), N > 0 ? N : 4095));
  }
  return out;
}

ChebMeasure desymmetrize(const SymmetricMeasure& sym, int N) {
  const SupportInterval& s = sym.positive_support;
  if (sym.whole) {
    const auto& w = sym.whole->coeffs();
    std::vector<double> c((w.size() + 1) / 2);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = w[2 * k];
    return ChebMeasure(s, std::move(c));
  }
  const ChebMeasure& half = *sym.half;
  const double ra = half.support().a(), rb = half.support().b();
  return trimmed(cheb_from_pullback([&](double tau) {
    const double x = s.mid() + s.half() * std::cos(tau);
    const double u = std::sqrt(std::max(x, 0.0));
    const double t = half.to_t(std::clamp(u, ra, rb));
    return half.pullback(t) * std::sqrt((u + ra) * (u + rb)) / (2.0 * u);
  }, s, N > 0 ? N : default_size(half.degree())));
}

double symmetrization_roundtrip_error(const ChebMeasure& mu) {
  const ChebMeasure back = desymmetrize(symmetrize(mu));
  const SupportInterval& s = mu.support();
  double err = 0.0;
  for (int j = 0; j <= 2000; ++j) {
    const double x = s.a() + s.length() * j / 2000.0;
    err = std::max(err, std::abs(mu.cdf(x) - back.cdf(x)));
  }
  return err;
}

Potential tilde_potential(const Potential& V) {
  return Potential::custom(
      V.name() + "@square", [V](double x) { return 0.5 * V.value(x * x); },
      [V](double x) { return x * V.d1(x * x); },
      [V](double x) { return V.d1(x * x) + 2.0 * x * x * V.d2(x * x); });
}

EnergyRelation energy_relation(const Potential& V, const ChebMeasure& mu) {
  EnergyRelation r;
  r.direct = energy(V, Measure(mu)).value;
  r.symmetric = 2.0 * symmetric_energy_checked(V, symmetrize(mu)).value;
  r.mismatch = std::abs(r.direct - r.symmetric);
  return r;
}

SupportInterval mp_support(double r, double s) {
  if (!(r > 0.0) || !(s >= 0.0)) throw Error("invalid_argument", "need r > 0 and s >= 0");
  const double q = std::sqrt(s + 1.0);
  return SupportInterval((q - 1.0) * (q - 1.0) / r, (q + 1.0) * (q + 1.0) / r);
}

ChebMeasure mp_density(double r, double s) {
  const SupportInterval S = mp_support(r, s);
  const double c = S.half();
  if (s == 0.0) return ChebMeasure(S, {r * c / (2.0 * kPi), -r * c / (2.0 * kPi)});
  // Coefficients decay like delta^k with delta = beta_delta(c / mid).
  const double delta = beta_delta(c / S.mid());
  const int N = std::clamp(static_cast<int>(std::ceil(std::log(1e-18) / std::log(delta))) + 16,
                           32, 8192);
  return trimmed(cheb_from_pullback([&](double t) {
    const double st = std::sin(t);
    return r * c * c * st * st / (2.0 * kPi * (S.mid() + c * std::cos(t)));
  }, S, N));
}

EquilibriumResult mp_equilibrium(double r, double s) {
  const Potential V = Potential::linear_minus_log(r, s);
  const SupportInterval S = mp_support(r, s);
  std::vector<std::string> warnings;
  const SupportInterval solved = solve_support(V);
  const double drift = std::max(std::abs(solved.a() - S.a()), std::abs(solved.b() - S.b()));
  if (drift > 1e-8 * S.b()) {
    warnings.push_back("solved support differs from the closed form by " + fmt(drift));
  }
  const ChebMeasure mu = mp_density(r, s);

  const double r0 = robin_value(V, mu, S.mid());
  double lo = r0, hi = r0;
  for (double f : {0.25, 0.75}) {
    const double v = robin_value(V, mu, S.a() + f * S.length());
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  // Residual of H tilde mu = tilde V' over the middle of the positive half.
  const SymmetricMeasure sym = symmetrize(mu);
  double residual = 0.0;
  if (sym.whole) {
    const HilbertTransform H(*sym.whole);
    const double R = sym.whole->support().b();
    for (int j = 0; j <= 400; ++j) {
      const double x = -0.9 * R + 1.8 * R * j / 400.0;
      residual = std::max(residual, std::abs(H(x) - x * V.d1(x * x)));
    }
  } else {
    const ChebMeasure& half = *sym.half;
    const HilbertTransform H(half);
    const int Q = 512;
    std::vector<double> u(Q), w(Q);
    for (int j = 0; j < Q; ++j) {
      const double t = kPi * (j + 0.5) / Q;
      u[j] = half.to_x(t);
      w[j] = half.pullback(t) * kPi / Q;
    }
    const SupportInterval& hs = half.support();
    for (int i = 0; i <= 400; ++i) {
      const double x = hs.a() + hs.length() * (0.05 + 0.9 * i / 400.0);
      double reflected = 0.0;
      for (int j = 0; j < Q; ++j) reflected += w[j] / (x + u[j]);
      residual = std::max(residual, std::abs(0.5 * H(x) + reflected - x * V.d1(x * x)));
    }
  }
  return EquilibriumResult{V,
                           S,
                           mu,
                           r0,
                           hi - lo,
                           std::max(euler_lagrange_residual(V, mu), residual),
                           energy(V, Measure(mu)).value,
                           std::abs(mu.mass() - 1.0),
                           warnings};
}

ChebMeasure sqrt_shift(const ChebMeasure& mu, double m) {
  if (!(m >= 0.0)) throw Error("invalid_argument", "shift must be nonnegative");
  const SymmetricMeasure sym = symmetrize(mu);
  if (m == 0.0) return mu;
  return desymmetrize(symmetrize_half(sym.positive_half().translated(m)));
}

double w_sqrt(const ChebMeasure& mu, const ChebMeasure& nu) {
  const SymmetricMeasure a = symmetrize(mu), b = symmetrize(nu);
  auto run = [&](int Q) {
    return integrate_even(a, [&](double x) {
      const double d = x - b.quantile(std::clamp(a.cdf(x), 0.0, 1.0));
      return d * d;
    }, Q);
  };
  return std::sqrt(std::max(run(2048), 0.0));
}

double w_sqrt_direct(const ChebMeasure& mu, const ChebMeasure& nu) {
  require_positive_axis(mu.support());
  require_positive_axis(nu.support());
  auto run = [&](int Q) {
    return integrate_pullback(mu, [&](double x) {
      const double y = nu.quantile(std::clamp(mu.cdf(x), 0.0, 1.0));
      const double d = std::sqrt(x) - std::sqrt(y);
      return d * d;
    }, Q);
  };
  return std::sqrt(std::max(run(2048), 0.0));
}

FunctionalValue fisher_plus(const Potential& V, const ChebMeasure& mu) {
  require_positive_axis(mu.support());
  const SymmetricMeasure sym = symmetrize(mu);
  if (sym.whole) {
    if (rough_edge(*sym.whole, 0.0)) return infinite();
    FunctionalValue f = finite(2.0 * whole_fisher(V, *sym.whole, 1024),
                               2.0 * whole_fisher(V, *sym.whole, 512), Method::spectral);
    return f;
  }
  const ChebMeasure& half = *sym.half;
  if (rough_edge(half, 0.0) || rough_edge(half, kPi)) return infinite();
  return finite(2.0 * half_fisher(V, half, 1024), 2.0 * half_fisher(V, half, 512),
                Method::spectral);
}

FunctionalValue fisher_plus_direct(const Potential& V, const ChebMeasure& mu) {
  require_positive_axis(mu.support());
  if (rough_edge(mu, 0.0)) return infinite();
  if (mu.support().a() > 0.0 && rough_edge(mu, kPi)) return infinite();
  return finite(2.0 * direct_fisher(V, mu, 1024), 2.0 * direct_fisher(V, mu, 512),
                Method::spectral);
}

FunctionalValue relative_energy_plus(const EquilibriumResult& eq, const ChebMeasure& mu) {
  const EnergyPair e = symmetric_energy_checked(eq.potential, symmetrize(mu));
  const EnergyPair e0 = symmetric_energy_checked(eq.potential, symmetrize(eq.measure));
  FunctionalValue f;
  f.value = 2.0 * (e.value - e0.value);
  f.method = Method::spectral;
  f.truncation_error = 2.0 * (e.error + e0.error);
  return f;
}

bool plus_certifies(const Potential& V, double rho, std::string* method) {
  if (V.family() == PotentialFamily::linear_minus_log) {
    if (method) *method = "symbolic";
    return rho <= V.param("r");
  }
  if (method) *method = "sampled";
  // (V(x^2))'' = 2 V'(x^2) + 4 x^2 V''(x^2)
  for (int j = 0; j <= 4000; ++j) {
    const double x = std::pow(10.0, -3.0 + 4.0 * j / 4000.0);
    const double X = x * x;
    if (2.0 * V.d1(X) + 4.0 * X * V.d2(X) - 2.0 * rho < -1e-10) return false;
  }
  return true;
}

std::array<InequalityReport, 3> check_plus_inequalities(const EquilibriumResult& eq,
                                                        double rho, const ChebMeasure& mu) {
  const Potential& V = eq.potential;
  std::string cert;
  if (!plus_certifies(V, rho, &cert)) {
    throw Error("no_certificate",
                "no certificate that " + V.name() + "(x^2) - " + fmt(rho) + " x^2 is convex");
  }
  require_positive_axis(mu.support());

  const FunctionalValue dE = relative_energy_plus(eq, mu);
  const double dE_direct = energy(V, Measure(mu)).value - energy(V, Measure(eq.measure)).value;
  const double W = w_sqrt(mu, eq.measure);
  const double W_direct = w_sqrt_direct(mu, eq.measure);
  const FunctionalValue I = fisher_plus(V, mu);

  const double tol = report_tolerance({dE.truncation_error, I.truncation_error});
  std::array<InequalityReport, 3> out{
      upper_report("plus_transport", rho * W * W, dE.value, tol),
      upper_report("plus_lsi", dE.value, I.infinite ? kInf : I.value / (2.0 * rho), tol),
      upper_report("plus_hwi", dE.value,
                   I.infinite ? kInf : std::sqrt(2.0 * I.value) * W - rho * W * W, tol)};
  for (InequalityReport& r : out) {
    r.inputs["potential"] = V.name();
    r.inputs["rho"] = fmt(rho);
    r.inputs["certificate"] = cert;
    r.extras["energy_gap_direct"] = dE_direct;
    r.extras["w"] = W;
    r.extras["w_direct"] = W_direct;
  }
  if (!I.infinite) {
    out[1].extras["fisher"] = I.value;
    out[2].extras["fisher"] = I.value;
  }
  return out;
}

double beta_delta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw Error("invalid_argument", "beta must lie in (0, 1]");
  return beta / (1.0 + std::sqrt(1.0 - beta * beta));
}

BetaForm beta_form(double beta, const std::vector<double>& a) {
  long double squared = 0.0L, cross = 0.0L, weighted = 0.0L;
  for (std::size_t k = a.size(); k-- > 1;) {
    const long double d = static_cast<long double>(k);
    const long double v = a[k];
    squared += d * d * v * v;
    weighted += d * v * v;
    if (k + 1 < a.size()) cross += d * (d + 1.0L) * v * a[k + 1];
  }
  return {static_cast<double>(squared + beta * cross),
          std::sqrt(std::max(0.0, 1.0 - beta * beta)) * static_cast<double>(weighted)};
}

InequalityReport check_plus_poincare(bool q_convex, double r, double s, const TestFunction& phi,
                                     PlusPoincareForm form) {
  if (!q_convex) throw Error("no_certificate", "Q must be convex");
  const SupportInterval S = mp_support(r, s);
  if (form == PlusPoincareForm::automatic) {
    form = s > 0.0 ? PlusPoincareForm::squared_weight : PlusPoincareForm::linear_weight;
  }
  if (form == PlusPoincareForm::squared_weight && s == 0.0) {
    throw Error("invalid_argument",
                "the x^2-weighted inequality admits no positive constant for V = r x");
  }
  if (form == PlusPoincareForm::linear_weight && s != 0.0) {
    throw Error("invalid_argument", "the x-weighted inequality is stated for s = 0");
  }
  const bool squared = form == PlusPoincareForm::squared_weight;
  const TestFunction f = phi.support().same_as(S, 1e-13)
                             ? phi
                             : TestFunction::interpolate([&](double x) { return phi(x); }, S,
                                                         phi.degree());
  const ChebMeasure mu = mp_density(r, s);
  const double lhs = weighted_derivative_integral(mu, f, squared ? 2 : 1);
  const double K = chebyshev_kernel_integral(f, std::max(64, 2 * f.degree() + 16));
  const double rhs = (squared ? s : r) / (4.0 * kPi * kPi) * K;

  const std::vector<double>& a = f.coeffs();
  const double beta = S.half() / S.mid();
  double lhs_c, rhs_c;
  BetaForm bf{0.0, 0.0};
  if (squared) {
    bf = beta_form(beta, a);
    lhs_c = r * S.mid() / 4.0 * bf.lhs;
    rhs_c = r * S.mid() / 4.0 * bf.rhs;
  } else {
    const BetaForm plain = beta_form(0.0, a);
    lhs_c = r / 4.0 * plain.lhs;
    rhs_c = r / 4.0 * plain.rhs;
  }

  double scale = 0.0;
  for (double c : a) scale += std::abs(c);
  InequalityReport rep = lower_report(squared ? "plus_poincare_squared" : "plus_poincare_linear",
                                      lhs, rhs, report_tolerance({1e-13 * scale * scale}));
  rep.inputs["r"] = fmt(r);
  rep.inputs["s"] = fmt(s);
  rep.inputs["degree"] = std::to_string(f.degree());
  rep.extras["beta"] = beta;
  rep.extras["lhs_coefficient"] = lhs_c;
  rep.extras["rhs_coefficient"] = rhs_c;
  rep.extras["path_mismatch"] =
      std::max(std::abs(lhs - lhs_c), std::abs(rhs - rhs_c)) / std::max(1.0, std::abs(lhs));
  if (squared) {
    rep.extras["reduced_lhs"] = bf.lhs;
    rep.extras["reduced_rhs"] = bf.rhs;
    double var = 0.0;
    for (std::size_t k = 1; k < a.size(); ++k) var += 0.5 * a[k] * a[k];
    rep.extras["arcsine_variance"] = var;
    rep.extras["arcsine_bound"] = 0.5 * s * var;
  }
  return rep;
}

InequalityReport l_beta_gap(double beta, const TestFunction& phi) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error("invalid_argument", "beta must lie in (0, 1)");
  if (!phi.support().same_as(SupportInterval(-1.0, 1.0), 1e-13)) {
    throw Error("support_mismatch", "test function must live on [-1, 1]");
  }
  const GaussRule rule = gegenbauer_rule(1.0, phi.degree() + 8);
  double lhs = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double x = rule.nodes[j];
    const double d = phi.derivative(x);
    lhs += rule.weights[j] * (1.0 + beta * x) * d * d;
  }
  lhs *= 0.5;
  const double rhs = std::sqrt(1.0 - beta * beta) * 0.5 * gegenbauer_forms(0.0, phi).kernel;
  const BetaForm bf = beta_form(beta, phi.coeffs());

  double scale = 0.0;
  for (double c : phi.coeffs()) scale += std::abs(c);
  InequalityReport rep = lower_report("l_beta", lhs, rhs, report_tolerance({1e-13 * scale * scale}));
  rep.inputs["beta"] = fmt(beta);
  rep.extras["lhs_coefficient"] = 0.5 * bf.lhs;
  rep.extras["rhs_coefficient"] = 0.5 * bf.rhs;
  rep.extras["path_mismatch"] = std::max(std::abs(lhs - 0.5 * bf.lhs), std::abs(rhs - 0.5 * bf.rhs)) /
                                std::max(1.0, std::abs(lhs));
  return rep;
}

FailureWitness linear_potential_witness(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error("invalid_argument", "gamma must lie in (0, 1)");
  const int terms = std::min(
      10000000, static_cast<int>(std::ceil(std::log(1e-20) / (2.0 * std::log(gamma)))) + 16);
  std::vector<double> a(static_cast<std::size_t>(terms) + 1, 0.0);
  for (int n = 1; n <= terms; ++n) a[n] = (n % 2 ? -1.0 : 1.0) * std::pow(gamma, n) / n;
  const BetaForm bf = beta_form(1.0, a);
  const double weighted = beta_form(0.0, a).rhs;
  FailureWitness w;
  w.gamma = gamma;
  w.terms = terms;
  w.lhs = bf.lhs;
  w.rhs = weighted;
  w.ratio = bf.lhs / weighted;
  w.closed_form = gamma * gamma / ((1.0 + gamma) * -std::log1p(-gamma * gamma));
  return w;
}

}  // namespace freeineq
