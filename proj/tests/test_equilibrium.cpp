#include <doctest.h>

#include <cmath>
#include <functional>

#include "freeineq/equilibrium.hpp"
#include "freeineq/functionals.hpp"

using namespace freeineq;

namespace {

// rho x^2 + t x^4 has density (2 rho + 4 t x^2 + 2 t b^2) sqrt(b^2 - x^2) / (2 pi) on
// [-b, b], where rho b^2 / 2 + 3 t b^4 / 4 = 1.
double even_quartic_edge(double rho, double t) {
  if (t == 0.0) return std::sqrt(2.0 / rho);
  const double b2 = (-rho / 2.0 + std::sqrt(rho * rho / 4.0 + 3.0 * t)) / (1.5 * t);
  return std::sqrt(b2);
}

double even_quartic_density(double rho, double t, double x) {
  const double b = even_quartic_edge(rho, t);
  return (2.0 * rho + 4.0 * t * x * x + 2.0 * t * b * b) * std::sqrt(b * b - x * x) / (2.0 * kPi);
}

// 2 p.v. int f(y) / (x - y) dy over [-b, b] for a density vanishing like a square root at
// both edges; independent of the spectral machinery.
double pv_transform(const std::function<double(double)>& f, double b, double x, int n = 400000) {
  const double fx = f(x);
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const double t = kPi * (j + 0.5) / n;
    const double y = b * std::cos(t);
    const double w = b * std::sin(t);
    s += (f(y) - fx) / (x - y) * w;
  }
  s *= kPi / n;
  return 2.0 * (s + fx * std::log((x + b) / (b - x)));
}

}  // namespace

TEST_CASE("supports of quadratic and quartic potentials") {
  for (double rho : {0.5, 1.0, 2.0, 4.0}) {
    const SupportInterval S = solve_support(Potential::quadratic(rho));
    CHECK(std::abs(S.a() + std::sqrt(2.0 / rho)) < 1e-12);
    CHECK(std::abs(S.b() - std::sqrt(2.0 / rho)) < 1e-12);
  }
  const double b4 = std::pow(4.0 / 3.0, 0.25);
  CHECK(std::abs(even_quartic_edge(0.0, 1.0) - b4) < 1e-15);
  const SupportInterval S4 = solve_support(Potential::even_power(1.0, 4.0));
  CHECK(std::abs(S4.b() - b4) < 1e-10);
  CHECK(std::abs(S4.a() + b4) < 1e-10);

  const SupportInterval S24 = solve_support(Potential::quadratic_plus_convex(1.0, 1.0, 4.0));
  CHECK(std::abs(S24.b() - even_quartic_edge(1.0, 1.0)) < 1e-10);

  const auto [c1, c2] = support_conditions(Potential::quadratic(2.0), SupportInterval(-1.0, 1.0));
  CHECK(std::abs(c1) < 1e-12);
  CHECK(std::abs(c2) < 1e-12);
}

TEST_CASE("closed-form quartic density satisfies the Euler-Lagrange equation") {
  for (auto [rho, t] : {std::pair{0.0, 1.0}, {1.0, 1.0}}) {
    const double b = even_quartic_edge(rho, t);
    auto f = [=](double x) { return even_quartic_density(rho, t, x); };
    for (double x : {-0.7 * b, 0.1 * b, 0.5 * b}) {
      CHECK(std::abs(pv_transform(f, b, x) - (2.0 * rho * x + 4.0 * t * x * x * x)) < 1e-6);
    }
  }
}

TEST_CASE("equilibrium densities") {
  const EquilibriumResult sc = equilibrium_density(Potential::quadratic(2.0), SupportInterval(-1.0, 1.0));
  CHECK(sc.el_residual < 1e-8);
  for (double x : {-0.9, -0.3, 0.0, 0.6}) {
    CHECK(std::abs(sc.measure.density(x) - 2.0 / kPi * std::sqrt(1.0 - x * x)) < 1e-12);
  }
  CHECK(std::abs(sc.robin_constant - (1.0 + std::log(4.0))) < 1e-10);

  const EquilibriumResult q = solve_equilibrium(Potential::even_power(1.0, 4.0));
  const EquilibriumResult qc = solve_equilibrium(Potential::quadratic_plus_convex(1.0, 1.0, 4.0));
  const double b = q.support.b();
  const double bc = qc.support.b();
  for (double u : {-0.9, -0.45, 0.0, 0.2, 0.85}) {
    CHECK(std::abs(q.measure.density(u * b) - even_quartic_density(0.0, 1.0, u * b)) < 1e-8);
    CHECK(std::abs(qc.measure.density(u * bc) - even_quartic_density(1.0, 1.0, u * bc)) < 1e-8);
  }
  CHECK(q.el_residual < 1e-8);
  CHECK(std::abs(q.measure.mass() - 1.0) < 1e-12);

  const EquilibriumResult mp = solve_equilibrium(Potential::linear_minus_log(1.0, 3.0));
  CHECK(std::abs(mp.support.a() - 1.0) < 1e-10);
  CHECK(std::abs(mp.support.b() - 9.0) < 1e-10);
  for (double x : {1.5, 3.0, 5.0, 8.5}) {
    CHECK(std::abs(mp.measure.density(x) - std::sqrt((x - 1.0) * (9.0 - x)) / (2.0 * kPi * x)) < 1e-8);
  }
}

TEST_CASE("energies and Robin constants") {
  // E(rho x^2) = 3/4 + log(2 rho) / 2.
  for (double rho : {0.5, 1.0, 2.0, 4.0}) {
    const EquilibriumResult eq = solve_equilibrium(Potential::quadratic(rho));
    CHECK(std::abs(eq.energy - (0.75 + 0.5 * std::log(2.0 * rho))) < 1e-12);
    CHECK(eq.robin_spread < 1e-10);
    for (double u : {-0.5, 0.25, 0.9}) {
      const double x = u * eq.support.b();
      CHECK(std::abs(robin_value(eq.potential, eq.measure, x) - eq.robin_constant) < 1e-10);
    }
    CHECK(euler_lagrange_residual(eq.potential, eq.measure) < 1e-10);
  }
}

TEST_CASE("affine covariance") {
  const auto half = affine_covariance_check(Potential::quadratic(2.0), 2.0, 0.0);
  CHECK(half.transformed_support.same_as(SupportInterval(-0.5, 0.5), 1e-12));
  CHECK(std::abs(half.energy_transformed - half.energy_original - std::log(2.0)) < 1e-10);
  CHECK(half.passed);

  const auto id = affine_covariance_check(Potential::quadratic(2.0), 1.0, 0.0);
  CHECK(id.energy_mismatch < 1e-12);
  CHECK(id.cdf_distance < 1e-12);

  const auto moved = affine_covariance_check(Potential::quadratic(1.0), 1.0, 3.0);
  CHECK(std::abs(moved.transformed_support.a() - (moved.original_support.a() - 3.0)) < 1e-10);
  CHECK(std::abs(moved.transformed_support.b() - (moved.original_support.b() - 3.0)) < 1e-10);
  CHECK(std::abs(moved.energy_transformed - moved.energy_original) < 1e-10);
  CHECK(moved.passed);

  const auto quartic = affine_covariance_check(Potential::even_power(1.0, 4.0), 0.5, -0.2);
  CHECK(quartic.passed);
  CHECK_THROWS_AS(affine_covariance_check(Potential::quadratic(1.0), 0.0, 1.0), Error);
}

TEST_CASE("potential certificates and growth") {
  std::string method;
  CHECK(Potential::quadratic(2.0).certifies(2.0, 2.0, &method));
  CHECK(!Potential::quadratic(2.0).certifies(2.5, 2.0));
  CHECK(Potential::even_power(1.0, 4.0).certifies(1.0, 4.0));
  CHECK(!Potential::even_power(1.0, 4.0).certifies(0.1, 2.0));
  CHECK(Potential::quadratic_plus_convex(1.0, 1.0, 4.0).certifies(1.0, 2.0));
  CHECK(Potential::linear_minus_log(1.0, 1.0).is_convex());
  CHECK_THROWS_AS(Potential::polynomial({0.0, 1.0}).check_growth(), Error);
  CHECK_THROWS_AS(solve_equilibrium(Potential::polynomial({0.0, 0.0, 0.0, 1.0})), Error);
  CHECK_NOTHROW(Potential::quadratic(0.1).check_growth());
}
