#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "freeineq/poincare.hpp"
#include "test_measures.hpp"

using namespace freeineq;

namespace {

const SupportInterval kUnit(-1.0, 1.0);

TestFunction random_phi(std::mt19937_64& rng, SupportInterval s, int degree) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> c(degree + 1);
  for (int k = 0; k <= degree; ++k) c[k] = g(rng) / (1.0 + k);
  return TestFunction(s, c);
}

// H_lambda at (0.1, 0.2), (-0.7, 0.6), (0.95, -0.99), (0.3, 0.3), from the Euler form
// B(l, l) 2F1(l-1, l; 2l; 1-u) evaluated at 40 digits.
struct KernelRow {
  double lambda;
  std::array<double, 4> values;
};
const KernelRow kKernelTable[] = {
    {0.25, {0.75358898863665998, 1.0823992766822062, 1.3824955710557537, 0.71067136965355831}},
    {0.5, {0.6325791154305872, 0.83374157089638076, 0.98498096504957193, 0.60729655725856827}},
    {0.75, {0.55505565480590601, 0.64495753250758485, 0.70177440097421897, 0.54345230683009957}},
    {1.5, {0.42500382159716736, 0.3014882908862072, 0.25381609927932066, 0.44490590275352987}},
    {2.5, {0.33742150656542226, 0.11022144715905732, 0.065407038038650865, 0.39112606835475153}},
};
const std::pair<double, double> kKernelPoints[] = {{0.1, 0.2}, {-0.7, 0.6}, {0.95, -0.99}, {0.3, 0.3}};

}  // namespace

TEST_CASE("test functions") {
  const SupportInterval s(-2.0, 3.0);
  const auto cube = TestFunction::monomial(s, 3);
  for (double x : {-2.0, -0.3, 1.7, 3.0}) {
    CHECK(cube(x) == doctest::Approx(x * x * x).epsilon(1e-13));
    CHECK(cube.derivative(x) == doctest::Approx(3 * x * x).epsilon(1e-13));
  }
  CHECK(cube.difference_quotient(1.0, 2.0) == doctest::Approx(7.0));
  CHECK(cube.difference_quotient(1.0, 1.0 + 1e-9) == doctest::Approx(3.0));
  const auto t3 = TestFunction::chebyshev(kUnit, 3);
  CHECK(t3(0.5) == doctest::Approx(4 * 0.125 - 1.5));
  CHECK(t3.derivative(1.0) == doctest::Approx(9.0));
}

TEST_CASE("first Poincare inequality") {
  const auto eq = solve_equilibrium(Potential::quadratic(2.0));
  const auto lin = first_poincare(eq, 2.0, TestFunction::monomial(kUnit, 1));
  CHECK(std::abs(lin.gap) < 1e-8);
  CHECK(lin.verdict == Verdict::equality);
  CHECK(lin.lhs == doctest::Approx(1.0));

  const auto c = first_poincare(eq, 2.0, TestFunction(kUnit, {3.0}));
  CHECK(c.lhs == 0.0);
  CHECK(c.rhs == 0.0);

  const auto t3 = first_poincare(eq, 2.0, TestFunction::chebyshev(kUnit, 3));
  CHECK(t3.extras.at("reduced_lhs") / t3.extras.at("reduced_rhs") == doctest::Approx(3.0));
  CHECK(t3.lhs / t3.rhs == doctest::Approx(3.0).epsilon(1e-10));

  std::mt19937_64 rng(17);
  for (const Potential& V : {Potential::quadratic(1.0), Potential::even_power(1.0, 4.0),
                             Potential::quadratic_plus_convex(1.0, 1.0, 4.0)}) {
    const auto e = solve_equilibrium(V);
    const double rho = V.family() == PotentialFamily::even_power ? 0.0 : 1.0;
    for (int i = 0; i < 20; ++i) {
      const auto phi = random_phi(rng, i % 2 ? e.support : SupportInterval(-0.5, 0.7), 2 + i % 9);
      const auto r = first_poincare(e, rho, phi);
      CHECK(r.extras.at("path_mismatch") < 1e-6);
      CHECK(r.gap >= -1e-8);
    }
  }
  CHECK_THROWS_AS(first_poincare(solve_equilibrium(Potential::even_power(1.0, 4.0)), 1.0,
                                 TestFunction::monomial(kUnit, 1)),
                  Error);
}

TEST_CASE("number kernel") {
  CHECK(number_kernel(0.0, 0.3, -0.2).value == 1.06);
  CHECK(number_kernel(0.0, 0.3, -0.2).method == "closed-form");
  CHECK(number_kernel(1.0, 0.9, -0.4).value == 0.5);
  CHECK(number_kernel(0.5, 0.0, 0.0).value == doctest::Approx(2.0 / kPi).epsilon(1e-13));
  CHECK(number_kernel(0.5, 0.0, 0.0).method == "quadrature");
  for (const KernelRow& row : kKernelTable) {
    for (int i = 0; i < 4; ++i) {
      const auto [x, y] = kKernelPoints[i];
      const double h = number_kernel(row.lambda, x, y).value;
      CHECK(std::abs(h - number_kernel(row.lambda, y, x).value) < 1e-10);
      CHECK(h == doctest::Approx(row.values[i]).epsilon(1e-12));
    }
  }
  // Continuity at the closed-form values of lambda.
  CHECK(std::abs(number_kernel(1e-7, 0.3, -0.2).value - 1.06) < 1e-6);
  CHECK(std::abs(number_kernel(1.0 + 1e-7, 0.3, -0.2).value - 0.5) < 1e-6);
  CHECK_THROWS_AS(number_kernel(-0.1, 0.0, 0.0), Error);
  CHECK_THROWS_AS(number_kernel(0.5, 1.5, 0.0), Error);
}

TEST_CASE("Gegenbauer machinery") {
  for (double l : {0.25, 0.5, 1.0, 2.0}) {
    double rising = 1.0, fact = 1.0;
    for (int n = 1; n <= 10; ++n) {
      rising *= 2 * l + n - 1;
      fact *= n;
      CHECK(gegenbauer_norm(l, n) == doctest::Approx(l / (n + l) * rising / fact).epsilon(1e-12));
    }
  }
  CHECK(gegenbauer_norm(0.0, 3) == doctest::Approx(1.0 / 18.0));
  const auto rule = gegenbauer_rule(1.0, 12);
  double m2 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) m2 += rule.weights[i] * std::pow(rule.nodes[i], 2);
  CHECK(m2 == doctest::Approx(0.25));
}

TEST_CASE("kernel form equals the number operator form") {
  std::mt19937_64 rng(23);
  for (double l : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    for (int i = 0; i < 3; ++i) {
      const auto phi = random_phi(rng, kUnit, 3 + i);
      const double coeff = gegenbauer_forms(l, phi).kernel;
      const double quad = kernel_form_quadrature(l, phi, 96);
      CHECK(std::abs(quad - coeff) < 1e-5 * coeff);
    }
  }
}

TEST_CASE("spectral gap checks") {
  const auto x = TestFunction::monomial(kUnit, 1);
  const auto [j0, n0] = spectral_gap_checks(0.0, x);
  CHECK(n0.lhs == doctest::Approx(1.0));
  CHECK(n0.rhs == doctest::Approx(1.0));
  CHECK(n0.verdict == Verdict::equality);
  CHECK(j0.verdict == Verdict::equality);

  const auto [j1, n1] = spectral_gap_checks(1.0, TestFunction(kUnit, {0.0, 2.0}));
  CHECK(n1.verdict == Verdict::equality);
  CHECK(j1.verdict == Verdict::equality);
  CHECK(n1.extras.at("variance") == doctest::Approx(1.0));

  const auto [jc, nc] = spectral_gap_checks(0.7, TestFunction(kUnit, {2.0}));
  CHECK(jc.lhs == 0.0);
  CHECK(nc.lhs == 0.0);

  std::mt19937_64 rng(5);
  for (double l : {0.0, 0.3, 1.0, 3.0}) {
    for (int i = 0; i < 10; ++i) {
      const auto [a, b] = spectral_gap_checks(l, random_phi(rng, kUnit, 2 + i));
      CHECK(a.gap >= -1e-12);
      CHECK(b.gap >= -1e-12);
    }
  }
}

TEST_CASE("Watson orthogonality") {
  for (int k = 1; k <= 8; ++k) {
    for (int l = 1; l <= 8; ++l) {
      const double expected = k == l ? kPi * kPi * k : 0.0;
      CHECK(std::abs(watson_orthogonality_check(k, l) - expected) < 1e-6);
    }
  }
  CHECK_THROWS_AS(watson_orthogonality_check(0, 3), Error);
}

TEST_CASE("Poincare constants") {
  const Measure sc(testm::semicircle(0.0, 2.0));
  for (int N : {4, 8, 16, 32}) CHECK(std::abs(poincare_constant(sc, N) - 1.0) < 1e-8);

  const Measure two(GridMeasure::atomic({{0.0, 0.5}, {1.0, 0.5}}));
  CHECK(poincare_constant(two) == doctest::Approx(2.0).epsilon(1e-12));
  const Measure skew(GridMeasure::atomic({{-1.0, 0.2}, {2.0, 0.8}}));
  CHECK(poincare_constant(skew) == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
  CHECK_THROWS_AS(poincare_constant(Measure(GridMeasure::atomic({{0.0, 1.0}}))), Error);

  const Measure arc(testm::arcsine());
  double prev = 1e300;
  for (int N : {2, 4, 8, 16, 32}) {
    const double p = poincare_constant(arc, N);
    CHECK(p <= prev + 1e-12);
    prev = p;
  }
  CHECK(prev >= 0.5);
  CHECK(prev <= 2.0);
  CHECK(prev == doctest::Approx(1.75216596951323).epsilon(1e-10));

  std::mt19937_64 rng(31);
  const ChebMeasure base = testm::perturb(testm::semicircle(0.2, 0.8), rng);
  const double p0 = poincare_constant(Measure(base), 16);
  for (auto [a, b] : {std::pair{2.0, 1.0}, {-0.5, 3.0}, {0.1, -2.0}}) {
    const double pa = poincare_constant(Measure(base.affine_image(a, b)), 16);
    CHECK(std::abs(pa * a * a - p0) < 1e-8 * p0);
  }
}

TEST_CASE("Poincare bounds") {
  const auto sc = poincare_bounds(Measure(testm::semicircle(0.0, 2.0)));
  CHECK(sc.lower == doctest::Approx(0.125));
  CHECK(sc.upper == doctest::Approx(1.0));
  CHECK(std::abs(sc.constant - sc.upper) < 1e-8);

  const auto two = poincare_bounds(Measure(GridMeasure::atomic({{0.0, 0.5}, {1.0, 0.5}})));
  CHECK(two.lower == doctest::Approx(2.0));
  CHECK(two.upper == doctest::Approx(4.0));
  CHECK(two.constant == doctest::Approx(two.lower));

  for (double rho : {1.0, 2.0}) {
    const auto b = poincare_bounds(solve_equilibrium(Potential::quadratic(rho)), 1, rho);
    REQUIRE(b.lower_convex.has_value());
    CHECK(*b.lower_convex == doctest::Approx(rho / 4.0));
    CHECK(b.constant >= *b.lower_convex);
    CHECK(b.constant == doctest::Approx(2.0 * rho));
  }
  const auto q = poincare_bounds(solve_equilibrium(Potential::even_power(1.0, 4.0)), 2, 1.0, 24);
  CHECK(*q.lower_convex == doctest::Approx(std::sqrt(12.0) / 8.0));

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0), w(0.1, 1.0);
  for (int i = 0; i < 10; ++i) {
    const Measure mu(testm::perturb(testm::semicircle(u(rng), 1.0 + 0.5 * u(rng)), rng, 8));
    const auto b = poincare_bounds(mu, 24);
    CHECK(b.lower <= b.constant);
    CHECK(b.constant <= b.upper * (1 + 1e-10));
  }
  for (int i = 0; i < 10; ++i) {
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int k = 0; k < 2 + i % 4; ++k) {
      atoms.push_back({3.0 * u(rng) + k * 0.01, w(rng)});
      total += atoms.back().w;
    }
    for (Atom& a : atoms) a.w /= total;
    const auto b = poincare_bounds(Measure(GridMeasure::atomic(atoms)));
    CHECK(b.lower <= b.constant * (1 + 1e-10));
    CHECK(b.constant <= b.upper * (1 + 1e-10));
  }
}

TEST_CASE("arcsine comparison") {
  const auto eq = solve_equilibrium(Potential::quadratic(2.0));
  const auto t1 = arcsine_comparison(eq, 2.0, TestFunction::chebyshev(kUnit, 1));
  CHECK(t1.extras.at("reduced_lhs") == doctest::Approx(t1.extras.at("reduced_rhs")));
  CHECK(t1.verdict == Verdict::equality);
  const auto t5 = arcsine_comparison(eq, 2.0, TestFunction::chebyshev(kUnit, 5));
  CHECK(t5.extras.at("reduced_lhs") / t5.extras.at("reduced_rhs") == doctest::Approx(25.0));
  CHECK(t5.lhs / t5.rhs == doctest::Approx(25.0));
  const auto c = arcsine_comparison(eq, 2.0, TestFunction(kUnit, {1.0}));
  CHECK(c.gap == 0.0);

  std::mt19937_64 rng(8);
  const auto quartic = solve_equilibrium(Potential::quadratic_plus_convex(1.0, 1.0, 4.0));
  for (int i = 0; i < 10; ++i) {
    CHECK(arcsine_comparison(quartic, 1.0, random_phi(rng, quartic.support, 6)).gap >= -1e-9);
  }
}

TEST_CASE("Brascamp-Lieb comparison") {
  const auto [jac, bl] = brascamp_lieb_compare(1.0, TestFunction::monomial(kUnit, 1));
  CHECK(jac.lhs == doctest::Approx(0.75));
  CHECK(jac.rhs == doctest::Approx(0.75));
  CHECK(jac.verdict == Verdict::equality);
  CHECK(bl.gap > 0.0);

  const auto [c1, c2] = brascamp_lieb_compare(2.0, TestFunction(kUnit, {1.0}));
  CHECK(c1.lhs == 0.0);
  CHECK(c2.lhs == 0.0);
  CHECK_THROWS_AS(brascamp_lieb_compare(0.3, TestFunction(kUnit, {1.0})), Error);

  std::mt19937_64 rng(9);
  for (double l : {0.5, 1.0, 2.5}) {
    for (int i = 0; i < 5; ++i) {
      const auto [a, b] = brascamp_lieb_compare(l, random_phi(rng, kUnit, 4 + i));
      CHECK(a.gap >= -1e-10);
      CHECK(b.gap >= -1e-10);
    }
  }

  const auto [inner, outer] = brascamp_lieb_witness_pair(1.0);
  CHECK(inner.hi == doctest::Approx(0.5));
  CHECK(outer.lo > 1.0 / std::sqrt(2.0));
  for (const auto& w : {inner, outer}) {
    CHECK(w.variance > 0.0);
    CHECK(w.variance <= w.bound_jacobi);
    CHECK(w.variance <= w.bound_classic);
  }
  CHECK(inner.bound_jacobi < inner.bound_classic);
  CHECK(outer.bound_classic < outer.bound_jacobi);
}
