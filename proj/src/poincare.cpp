#include "freeineq/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "freeineq/functionals.hpp"

namespace freeineq {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// T_k(u) sums by Clenshaw.
double cheb_sum(const std::vector<double>& c, double u) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
    const double b0 = 2.0 * u * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return u * b1 - b2 + c[0];
}

// sum_k k c_k U_{k-1}(u)
double cheb_derivative_sum(const std::vector<double>& c, double u) {
  double s = 0.0, um1 = 0.0, u0 = 1.0;
  for (std::size_t k = 1; k < c.size(); ++k) {
    s += static_cast<double>(k) * c[k] * u0;
    const double next = 2.0 * u * u0 - um1;
    um1 = u0;
    u0 = next;
  }
  return s;
}

double u_poly(int n, double x) {
  if (n < 0) return 0.0;
  double a = 1.0, b = 2.0 * x;
  if (n == 0) return a;
  for (int k = 1; k < n; ++k) {
    const double c = 2.0 * x * b - a;
    a = b;
    b = c;
  }
  return b;
}

InequalityReport lower_bound_report(std::string kind, double lhs, double rhs, double tol) {
  InequalityReport r;
  r.kind = std::move(kind);
  r.lhs = lhs;
  r.rhs = rhs;
  r.gap = lhs - rhs;
  r.tolerance = tol;
  r.verdict = classify(r.gap, tol);
  return r;
}

std::string require_certificate(const Potential& V, double rho, double p) {
  std::string method;
  if (!V.certifies(rho, p, &method)) {
    throw Error("no_certificate", "no certificate that " + V.name() + " - " + fmt(rho) +
                                      "|x|^" + fmt(p) + " is convex");
  }
  return method;
}

TestFunction on_support(const TestFunction& phi, const SupportInterval& s) {
  if (phi.support().same_as(s, 1e-13)) return phi;
  return TestFunction::interpolate([&](double x) { return phi(x); }, s, phi.degree());
}

void require_unit_interval(const TestFunction& phi) {
  if (!phi.support().same_as(SupportInterval(-1.0, 1.0), 1e-13)) {
    throw Error("support_mismatch", "test function must live on [-1, 1]");
  }
}

double sup_derivative_bound(const TestFunction& phi) {
  double s = 0.0;
  const auto& c = phi.coeffs();
  for (std::size_t k = 1; k < c.size(); ++k) s += static_cast<double>(k * k) * std::abs(c[k]);
  return s / phi.support().half();
}

// Monic recurrence coefficient b_n of the Gegenbauer weight, n >= 1.
double gegenbauer_b(double lambda, int n) {
  if (n == 1) return 1.0 / (2.0 * (1.0 + lambda));
  return n * (n + 2.0 * lambda - 1.0) / (4.0 * (n + lambda) * (n + lambda - 1.0));
}

double nu_normalizer(double lambda) {
  return 1.0 / boost::math::beta(0.5, lambda + 0.5);
}

double nu_density(double lambda, double x) {
  return nu_normalizer(lambda) * std::pow(std::max(0.0, 1.0 - x * x), lambda - 0.5);
}

// Discrete form of a Chebyshev measure exact for polynomials of low degree.
struct Discrete {
  std::vector<double> x;
  std::vector<double> w;
};

Discrete discretize(const ChebMeasure& mu, int M) {
  Discrete d;
  double total = 0.0, hmax = 0.0;
  for (int j = 0; j < M; ++j) hmax = std::max(hmax, std::abs(mu.pullback(kPi * (j + 0.5) / M)));
  for (int j = 0; j < M; ++j) {
    const double t = kPi * (j + 0.5) / M;
    double h = mu.pullback(t);
    if (h < -1e-10 * hmax) throw Error("negative_density", "measure has a negative pullback");
    h = std::max(h, 0.0);
    if (h == 0.0) continue;
    d.x.push_back(mu.to_x(t));
    d.w.push_back(h);
    total += h;
  }
  for (double& w : d.w) w /= total;
  return d;
}

double atomic_poincare(const std::vector<Atom>& atoms) {
  const int K = static_cast<int>(atoms.size());
  if (K < 2) throw Error("degenerate_variance", "a single atom has zero variance");
  double total = 0.0;
  for (const Atom& a : atoms) total += a.w;
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(K, K), V = Eigen::MatrixXd::Zero(K, K);
  Eigen::VectorXd w(K);
  for (int i = 0; i < K; ++i) w(i) = atoms[i].w / total;
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      if (i == j) continue;
      const double d = atoms[i].x - atoms[j].x;
      if (std::abs(d) == 0.0) throw Error("invalid_measure", "repeated atom location");
      const double a = 2.0 * w(i) * w(j) / (d * d);
      E(i, j) -= a;
      E(i, i) += a;
    }
  }
  V = Eigen::MatrixXd(w.asDiagonal()) - w * w.transpose();
  // Restrict to the complement of constants.
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(K, K);
  basis.col(0).setOnes();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  const Eigen::MatrixXd Q = Eigen::MatrixXd(qr.householderQ()).rightCols(K - 1);
  const Eigen::MatrixXd A = Q.transpose() * E * Q;
  const Eigen::MatrixXd B = Q.transpose() * V * Q;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(A, B);
  if (ges.info() != Eigen::Success) throw Error("degenerate_variance", "variance form is singular");
  return ges.eigenvalues().minCoeff();
}

double variance_of(const Measure& mu) {
  if (const auto* g = std::get_if<GridMeasure>(&mu); g && !g->has_density()) {
    double m1 = 0.0, m2 = 0.0, total = 0.0;
    for (const Atom& a : g->atoms()) {
      total += a.w;
      m1 += a.w * a.x;
      m2 += a.w * a.x * a.x;
    }
    m1 /= total;
    return m2 / total - m1 * m1;
  }
  const ChebMeasure c = as_cheb(mu);
  const int M = c.degree() + 8;
  const double mass = integrate(Measure(c), [](double) { return 1.0; }, M);
  const double m1 = integrate(Measure(c), [](double x) { return x; }, M) / mass;
  return integrate(Measure(c), [&](double x) { return (x - m1) * (x - m1); }, M) / mass;
}

}  // namespace

// ---------------------------------------------------------------------------

TestFunction::TestFunction(SupportInterval support, std::vector<double> coeffs)
    : support_(support), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw Error("invalid_argument", "non-finite test function coefficient");
  }
}

TestFunction TestFunction::interpolate(const std::function<double(double)>& f,
                                       SupportInterval support, int degree) {
  if (degree < 0) throw Error("invalid_argument", "negative degree");
  const int M = degree + 1;
  std::vector<double> samples(M);
  for (int j = 0; j < M; ++j) {
    samples[j] = f(support.mid() + support.half() * std::cos(kPi * (j + 0.5) / M));
  }
  return TestFunction(support, cosine_coefficients(samples));
}

TestFunction TestFunction::monomial(SupportInterval support, int power) {
  return interpolate([power](double x) { return std::pow(x, power); }, support, power);
}

TestFunction TestFunction::chebyshev(SupportInterval support, int n) {
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  return TestFunction(support, c);
}

double TestFunction::operator()(double x) const {
  return cheb_sum(coeffs_, (x - support_.mid()) / support_.half());
}

double TestFunction::derivative(double x) const {
  return cheb_derivative_sum(coeffs_, (x - support_.mid()) / support_.half()) / support_.half();
}

double TestFunction::difference_quotient(double x, double y) const {
  if (std::abs(x - y) < 1e-7 * support_.length()) return derivative(0.5 * (x + y));
  return ((*this)(x) - (*this)(y)) / (x - y);
}

// ---------------------------------------------------------------------------

InequalityReport first_poincare(const EquilibriumResult& eq, double rho, const TestFunction& phi) {
  const std::string cert = require_certificate(eq.potential, rho, 2.0);
  const TestFunction f = on_support(phi, eq.support);
  const auto& a = f.coeffs();

  const int nodes = std::max(512, 2 * (f.degree() + eq.measure.degree()) + 16);
  const double lhs =
      integrate(Measure(eq.measure), [&](double x) { return std::pow(f.derivative(x), 2); }, nodes);

  double weighted = 0.0, squared = 0.0;
  for (std::size_t k = 1; k < a.size(); ++k) {
    weighted += static_cast<double>(k) * a[k] * a[k];
    squared += static_cast<double>(k * k) * a[k] * a[k];
  }
  const double rhs = 0.5 * rho * weighted;
  const double quad = first_poincare_quadrature_rhs(eq, rho, f);

  const double scale = std::pow(sup_derivative_bound(f), 2);
  InequalityReport r = lower_bound_report(
      "poincare1", lhs, rhs, report_tolerance({kPi * eq.measure.truncation_error() * scale}));
  r.inputs["potential"] = eq.potential.name();
  r.inputs["rho"] = fmt(rho);
  r.inputs["certificate"] = cert;
  r.inputs["degree"] = std::to_string(f.degree());
  r.extras["rhs_quadrature"] = quad;
  r.extras["path_mismatch"] = std::abs(quad - rhs) / std::max(1.0, std::abs(rhs));
  r.extras["reduced_lhs"] = squared;
  r.extras["reduced_rhs"] = weighted;
  return r;
}

double first_poincare_quadrature_rhs(const EquilibriumResult& eq, double rho,
                                     const TestFunction& phi, int nodes) {
  return rho / (2.0 * kPi * kPi) * chebyshev_kernel_integral(on_support(phi, eq.support), nodes);
}

double chebyshev_kernel_integral(const TestFunction& f, int nodes) {
  const SupportInterval& s = f.support();
  const int M = nodes > 0 ? nodes : std::max(32, 2 * f.degree() + 8);
  const double a = s.a(), b = s.b();
  std::vector<double> x(M), root(M), jac(M);
  for (int i = 0; i < M; ++i) {
    const double t = kPi * (i + 0.5) / M;
    x[i] = s.mid() + s.half() * std::cos(t);
    root[i] = std::sqrt((x[i] - a) * (b - x[i]));
    jac[i] = s.half() * std::sin(t);
  }
  double sum = 0.0;
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      const double q = f.difference_quotient(x[i], x[j]);
      const double numerator = -2.0 * a * b + (a + b) * (x[i] + x[j]) - 2.0 * x[i] * x[j];
      sum += q * q * numerator / (2.0 * root[i] * root[j]) * jac[i] * jac[j];
    }
  }
  const double h = kPi / M;
  return sum * h * h;
}

// ---------------------------------------------------------------------------

KernelValue number_kernel(double lambda, double x, double y) {
  if (!(lambda >= 0.0)) throw Error("invalid_argument", "lambda must be nonnegative");
  if (std::abs(x) > 1.0 + 1e-12 || std::abs(y) > 1.0 + 1e-12) {
    throw Error("domain", "kernel arguments must lie in [-1, 1]");
  }
  x = std::clamp(x, -1.0, 1.0);
  y = std::clamp(y, -1.0, 1.0);
  if (lambda == 0.0) return {lambda, 1.0 - x * y, "closed-form"};
  if (lambda == 1.0) return {lambda, 0.5, "closed-form"};

  // With A = 1 - xy + sqrt((1-x^2)(1-y^2)) and u = (x-y)^2 / A^2, the substitution
  // t = 1 / (1 - (1-u) w) turns f_lambda(u) into
  // (1-u)^{2 lambda - 1} int_0^1 [w(1-w)]^{lambda-1} (1 - (1-u) w)^{1-lambda} dw,
  // and 1 - u = 2 sqrt(...) / A cancels the outer singular factor.
  const double S = std::sqrt((1.0 - x * x) * (1.0 - y * y));
  const double A = 1.0 - x * y + S;
  if (A <= 0.0) {
    return {lambda, lambda < 1.0 ? 0.0 : std::numeric_limits<double>::infinity(), "closed-form"};
  }
  const double u = (x - y) * (x - y) / (A * A);
  // On each half the singular part c s^{lambda-1} is integrated exactly and the
  // quadrature sees only the remainder.
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(12);
  auto remainder = [&](auto integrand) {
    return ts.integrate([&](double s) { return s < 1e-250 ? 0.0 : integrand(s); }, 0.0, 0.5, 1e-14);
  };
  const double head = std::pow(0.5, lambda) / lambda;
  // 1 - (1-u) w = (1 - w) + u w
  const double left = head + remainder([&](double s) {
    return std::pow(s, lambda - 1.0) *
           (std::pow(1.0 - s, lambda - 1.0) * std::pow(1.0 - s + u * s, 1.0 - lambda) - 1.0);
  });
  const double edge = lambda < 1.0 ? std::pow(u, 1.0 - lambda) : 0.0;
  const double right = edge * head + remainder([&](double s) {
    return std::pow(1.0 - s, lambda - 1.0) * std::pow(s / (s + u * (1.0 - s)), lambda - 1.0) -
           edge * std::pow(s, lambda - 1.0);
  });
  const double g = left + right;
  const double front = std::exp(std::lgamma(2.0 * lambda) - 2.0 * std::lgamma(lambda)) /
                       std::pow(2.0, lambda);
  return {lambda, front * std::pow(A, 1.0 - lambda) * g, "quadrature"};
}

GaussRule gegenbauer_rule(double lambda, int n) {
  if (n < 1) throw Error("invalid_argument", "need at least one node");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n), off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(gegenbauer_b(lambda, k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()(i);
    r.weights[i] = std::pow(es.eigenvectors()(0, i), 2);
  }
  return r;
}

double gegenbauer(double lambda, int n, double x) {
  if (n == 0) return 1.0;
  if (lambda == 0.0) return std::cos(n * std::acos(std::clamp(x, -1.0, 1.0))) / n;
  double prev = 1.0, cur = 2.0 * lambda * x;
  for (int k = 2; k <= n; ++k) {
    const double next = (2.0 * x * (k + lambda - 1.0) * cur - (k + 2.0 * lambda - 2.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

double gegenbauer_norm(double lambda, int n) {
  static std::mutex guard;
  static std::map<std::pair<double, int>, double> cache;
  const auto key = std::make_pair(lambda, n);
  {
    std::lock_guard<std::mutex> lock(guard);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const GaussRule r = gegenbauer_rule(lambda, n + 2);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    s += r.weights[i] * std::pow(gegenbauer(lambda, n, r.nodes[i]), 2);
  }
  std::lock_guard<std::mutex> lock(guard);
  cache.emplace(key, s);
  return s;
}

GegenbauerForms gegenbauer_forms(double lambda, const TestFunction& phi) {
  if (!(lambda >= 0.0)) throw Error("invalid_argument", "lambda must be nonnegative");
  require_unit_interval(phi);
  const int d = phi.degree();
  const GaussRule r = gegenbauer_rule(lambda, d + 2);
  GegenbauerForms f{std::vector<double>(d + 1, 0.0), 0.0, 0.0, 0.0};
  for (int n = 0; n <= d; ++n) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      s += r.weights[i] * phi(r.nodes[i]) * gegenbauer(lambda, n, r.nodes[i]);
    }
    f.alpha[n] = s / std::sqrt(gegenbauer_norm(lambda, n));
    if (n == 0) continue;
    const double a2 = f.alpha[n] * f.alpha[n];
    f.jacobi += n * (n + 2.0 * lambda) * a2;
    f.kernel += 2.0 * n * a2;
    f.variance += a2;
  }
  return f;
}

double kernel_form_quadrature(double lambda, const TestFunction& phi, int nodes) {
  require_unit_interval(phi);
  const GaussRule r = gegenbauer_rule(lambda, nodes);
  double s = 0.0;
  for (int i = 0; i < nodes; ++i) {
    for (int j = i; j < nodes; ++j) {
      const double xi = r.nodes[i], xj = r.nodes[j];
      const double q = i == j ? phi.derivative(xi) : (phi(xi) - phi(xj)) / (xi - xj);
      const double term = r.weights[i] * r.weights[j] * q * q * number_kernel(lambda, xi, xj).value;
      s += i == j ? term : 2.0 * term;
    }
  }
  return s;
}

std::pair<InequalityReport, InequalityReport> spectral_gap_checks(double lambda,
                                                                  const TestFunction& phi) {
  const GegenbauerForms f = gegenbauer_forms(lambda, phi);
  const double tol = std::max(1e-9, 1e-12 * f.jacobi);
  auto first = lower_bound_report("jacobi_vs_number", f.jacobi,
                                  0.5 * (2.0 * lambda + 1.0) * f.kernel, tol);
  auto second = lower_bound_report("number_vs_variance", f.kernel, 2.0 * f.variance, tol);
  for (auto* r : {&first, &second}) {
    r->inputs["lambda"] = fmt(lambda);
    r->inputs["degree"] = std::to_string(phi.degree());
    r->extras["variance"] = f.variance;
  }
  return {first, second};
}

double watson_orthogonality_check(int k, int l) {
  if (k < 1 || l < 1 || k > 12 || l > 12) {
    throw Error("invalid_argument", "indices must lie in 1..12");
  }
  const int M = 64;
  std::vector<double> c(M);
  for (int i = 0; i < M; ++i) c[i] = std::cos(kPi * (i + 0.5) / M);
  auto quotient = [](int n, double x, double y) {
    if (std::abs(x - y) < 2e-7) return n * u_poly(n - 1, 0.5 * (x + y));
    const double tx = std::cos(n * std::acos(x)), ty = std::cos(n * std::acos(y));
    return (tx - ty) / (x - y);
  };
  double s = 0.0;
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      s += quotient(k, c[i], c[j]) * quotient(l, c[i], c[j]) * (1.0 - c[i] * c[j]);
    }
  }
  const double h = kPi / M;
  return s * h * h;
}

// ---------------------------------------------------------------------------

double poincare_constant(const Measure& mu, int N) {
  if (N < 1 || N > 64) throw Error("invalid_argument", "polynomial degree must lie in 1..64");
  if (const auto* g = std::get_if<GridMeasure>(&mu)) {
    if (!g->has_density()) return atomic_poincare(g->atoms());
    if (g->has_atoms()) {
      throw Error("unsupported", "mixed atomic and continuous measures are not supported");
    }
  }
  const ChebMeasure c = as_cheb(mu);
  const int M = std::max(96, N + (c.degree() + 1) / 2 + 16);
  const Discrete d = discretize(c, M);
  const int K = static_cast<int>(d.x.size());
  if (K <= N) throw Error("degenerate_variance", "too few support points for the degree");

  // Lanczos on diag(x) with full re-orthogonalization gives the recurrence.
  Eigen::MatrixXd q(K, N + 2);
  Eigen::VectorXd alpha(N + 1), beta = Eigen::VectorXd::Zero(N + 2);
  for (int i = 0; i < K; ++i) q(i, 0) = std::sqrt(d.w[i]);
  q.col(0).normalize();
  const Eigen::Map<const Eigen::VectorXd> X(d.x.data(), K);
  for (int n = 0; n <= N; ++n) {
    Eigen::VectorXd r = X.cwiseProduct(q.col(n));
    alpha(n) = q.col(n).dot(r);
    for (int pass = 0; pass < 2; ++pass) {
      for (int m = 0; m <= n; ++m) r -= q.col(m).dot(r) * q.col(m);
    }
    beta(n + 1) = r.norm();
    if (beta(n + 1) < 1e-14) throw Error("degenerate_variance", "Lanczos broke down");
    q.col(n + 1) = r / beta(n + 1);
  }

  // Orthonormal polynomials and derivatives at the nodes, degrees 1..N.
  Eigen::MatrixXd P(K, N + 1), D(K, N + 1);
  for (int i = 0; i < K; ++i) {
    double pm = 0.0, p = 1.0, dm = 0.0, dp = 0.0;
    P(i, 0) = 1.0;
    D(i, 0) = 0.0;
    for (int n = 0; n < N; ++n) {
      const double pn = ((d.x[i] - alpha(n)) * p - beta(n) * pm) / beta(n + 1);
      const double dn = ((d.x[i] - alpha(n)) * dp + p - beta(n) * dm) / beta(n + 1);
      pm = p;
      p = pn;
      dm = dp;
      dp = dn;
      P(i, n + 1) = p;
      D(i, n + 1) = dp;
    }
  }

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < K; ++i) {
    const Eigen::VectorXd row = P.row(i).tail(N).transpose();
    G.noalias() += d.w[i] * row * row.transpose();
  }
  const double span = c.support().length();
  Eigen::MatrixXd Q(N, static_cast<Eigen::Index>(K) * K);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      const double s = std::sqrt(d.w[i] * d.w[j]);
      const Eigen::Index col = static_cast<Eigen::Index>(i) * K + j;
      if (std::abs(d.x[i] - d.x[j]) < 1e-7 * span) {
        Q.col(col) = s * D.row(i).tail(N).transpose();
      } else {
        Q.col(col) = s * (P.row(i).tail(N) - P.row(j).tail(N)).transpose() / (d.x[i] - d.x[j]);
      }
    }
  }
  const Eigen::MatrixXd E = Q * Q.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram(G);
  if (gram.eigenvalues().minCoeff() < 1e-10) {
    throw Error("degenerate_variance", "variance form is not positive definite");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(E, G);
  if (ges.info() != Eigen::Success) throw Error("eigensolver", "generalized eigensolve failed");
  return ges.eigenvalues().minCoeff();
}

PoincareBounds poincare_bounds(const Measure& mu, int N) {
  PoincareBounds b;
  b.diameter = mass_hull(mu).length();
  b.variance = variance_of(mu);
  b.lower = 2.0 / (b.diameter * b.diameter);
  b.upper = 1.0 / b.variance;
  b.constant = poincare_constant(mu, N);
  if (b.constant < b.lower * (1.0 - 1e-8) || b.constant > b.upper * (1.0 + 1e-8)) {
    throw Error("bounds_inconsistent", "Poincare constant " + fmt(b.constant) +
                                           " outside [" + fmt(b.lower) + ", " + fmt(b.upper) + "]");
  }
  return b;
}

PoincareBounds poincare_bounds(const EquilibriumResult& eq, int p, double rho, int N) {
  if (p < 1 || !(rho > 0.0)) throw Error("invalid_argument", "need p >= 1 and rho > 0");
  require_certificate(eq.potential, rho, 2.0 * p);
  PoincareBounds b = poincare_bounds(Measure(eq.measure), N);
  const double binom = boost::math::binomial_coefficient<double>(2 * p, p);
  b.lower_convex = std::pow(p * rho * binom, 1.0 / p) / 8.0;
  if (b.constant < *b.lower_convex * (1.0 - 1e-8)) {
    throw Error("bounds_inconsistent", "Poincare constant below the convexity bound");
  }
  return b;
}

InequalityReport arcsine_comparison(const EquilibriumResult& eq, double rho,
                                    const TestFunction& phi) {
  const std::string cert = require_certificate(eq.potential, rho, 2.0);
  const TestFunction f = on_support(phi, eq.support);
  const auto& a = f.coeffs();
  const int nodes = std::max(512, 2 * (f.degree() + eq.measure.degree()) + 16);
  const double lhs =
      integrate(Measure(eq.measure), [&](double x) { return std::pow(f.derivative(x), 2); }, nodes);
  double sq = 0.0, plain = 0.0;
  for (std::size_t n = 1; n < a.size(); ++n) {
    sq += static_cast<double>(n * n) * a[n] * a[n];
    plain += a[n] * a[n];
  }
  const double scale = std::pow(sup_derivative_bound(f), 2);
  InequalityReport r = lower_bound_report(
      "arcsine_comparison", lhs, rho * 0.5 * plain,
      report_tolerance({kPi * eq.measure.truncation_error() * scale}));
  r.inputs["potential"] = eq.potential.name();
  r.inputs["rho"] = fmt(rho);
  r.inputs["certificate"] = cert;
  r.extras["arcsine_variance"] = 0.5 * plain;
  r.extras["reduced_lhs"] = sq;
  r.extras["reduced_rhs"] = plain;
  return r;
}

std::pair<InequalityReport, InequalityReport> brascamp_lieb_compare(double lambda,
                                                                    const TestFunction& phi) {
  if (!(lambda >= 0.5)) {
    throw Error("invalid_argument", "the classical comparison needs lambda >= 1/2");
  }
  require_unit_interval(phi);
  const GaussRule r = gegenbauer_rule(lambda, phi.degree() + 40);
  double m1 = 0.0, m2 = 0.0, jac = 0.0, classic = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double x = r.nodes[i], w = r.weights[i];
    const double v = phi(x), d2 = std::pow(phi.derivative(x), 2), s = 1.0 - x * x;
    m1 += w * v;
    m2 += w * v * v;
    jac += w * d2 * s;
    classic += w * d2 * s * s / (1.0 + x * x);
  }
  const double var = std::max(0.0, m2 - m1 * m1);
  const double tol = std::max(1e-9, 1e-12 * jac);
  auto first = lower_bound_report("jacobi_gap", jac, (2.0 * lambda + 1.0) * var, tol);
  auto second = lower_bound_report("brascamp_lieb", classic, (2.0 * lambda - 1.0) * var, tol);
  for (auto* rep : {&first, &second}) {
    rep->inputs["lambda"] = fmt(lambda);
    rep->extras["variance"] = var;
  }
  return {first, second};
}

BrascampLiebWitness brascamp_lieb_witness(double lambda, double lo, double hi) {
  if (!(lambda > 0.5)) throw Error("invalid_argument", "witnesses need lambda > 1/2");
  if (!(lo >= -1.0 && hi <= 1.0 && lo < hi)) throw Error("invalid_argument", "bad bump interval");
  const double L = hi - lo;
  auto bump = [=](double x) {
    if (x <= lo || x >= hi) return 0.0;
    return std::pow((x - lo) * (hi - x), 2);
  };
  auto phi = [=](double x) {
    const double s = std::clamp(x, lo, hi) - lo;
    return L * L * s * s * s / 3.0 - L * std::pow(s, 4) / 2.0 + std::pow(s, 5) / 5.0;
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  auto against_nu = [&](const std::function<double(double)>& f) {
    auto g = [&](double x) { return f(x) * nu_density(lambda, x); };
    double s = ts.integrate(g, lo, hi);
    if (lo > -1.0) s += ts.integrate(g, -1.0, lo);
    if (hi < 1.0) s += ts.integrate(g, hi, 1.0);
    return s;
  };
  const double m1 = against_nu(phi);
  const double m2 = against_nu([&](double x) { return phi(x) * phi(x); });
  const double jac = against_nu([&](double x) { return std::pow(bump(x), 2) * (1.0 - x * x); });
  const double classic = against_nu(
      [&](double x) { return std::pow(bump(x), 2) * std::pow(1.0 - x * x, 2) / (1.0 + x * x); });
  return {lo, hi, m2 - m1 * m1, jac / (2.0 * lambda + 1.0), classic / (2.0 * lambda - 1.0)};
}

std::pair<BrascampLiebWitness, BrascampLiebWitness> brascamp_lieb_witness_pair(double lambda) {
  if (!(lambda > 0.5)) throw Error("invalid_argument", "witnesses need lambda > 1/2");
  const double inner = 1.0 / (2.0 * lambda);
  const double crossover = 1.0 / std::sqrt(2.0 * lambda);
  return {brascamp_lieb_witness(lambda, -inner, inner),
          brascamp_lieb_witness(lambda, 0.5 * (crossover + 1.0), 1.0)};
}

}  // namespace freeineq
