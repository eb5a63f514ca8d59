#include <doctest.h>

#include <cmath>

#include "freeineq/inequalities.hpp"

using namespace freeineq;

TEST_CASE("c_p closed forms") {
  CHECK(constant_cp(2.0) == 1.0);
  // p = 4: 6y^2 - 4y + 1 at y = 1/3 after x = -y.  p = 3: minimum 2 - sqrt 2 at y = 1 - 1/sqrt 2.
  CHECK(std::abs(constant_cp(4.0) - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(constant_cp(3.0) - (2.0 - std::sqrt(2.0))) < 1e-12);
  for (double p : {1.1, 1.5, 2.0, 3.0, 4.0}) CHECK(constant_cp(p) > 0.0);
  CHECK_THROWS_AS(constant_cp(1.0), Error);
}

TEST_CASE("c_p below two is attained at the edge of the search window") {
  // (1+x)^p - x^p - p x^{p-1} ~ p(p-1)/2 x^{p-2} -> 0 as x -> inf when p < 2.
  for (double p : {1.1, 1.5}) {
    const double at_edge = std::pow(51.0, p) - std::pow(50.0, p) - p * std::pow(50.0, p - 1.0);
    CHECK(std::abs(constant_cp(p) - at_edge) < 1e-3 * at_edge);
    CHECK(at_edge < p * (p - 1.0) / 2.0 * std::pow(50.0, p - 2.0) * 1.01);
  }
}

TEST_CASE("sharpness for translations of the semicircle") {
  for (double rho : {1.0, 2.0}) {
    const auto eq = solve_equilibrium(Potential::quadratic(rho));
    for (double m : {0.25, 0.5, 1.0}) {
      const Measure mu(eq.measure.translated(m));
      const auto t = check_transport(eq, rho, 2.0, mu);
      const auto l = check_lsi(eq, rho, mu);
      const auto h = check_hwi(eq, rho, mu);
      const double scale = rho * m * m;
      CHECK(std::abs(t.lhs - scale) < 1e-9);
      CHECK(std::abs(t.rhs - scale) < 1e-9);
      CHECK(std::abs(t.gap) <= 1e-6 * scale);
      CHECK(std::abs(l.gap) <= 1e-6 * scale);
      CHECK(std::abs(h.gap) <= 1e-6 * scale);
      CHECK(t.verdict == Verdict::equality);
      CHECK(l.verdict == Verdict::equality);
      CHECK(h.verdict == Verdict::equality);
    }
    const Measure same(eq.measure);
    CHECK(check_transport(eq, rho, 2.0, same).verdict == Verdict::equality);
    CHECK(check_lsi(eq, rho, same).verdict == Verdict::equality);
    CHECK(check_hwi(eq, rho, same).verdict == Verdict::equality);
  }
}

TEST_CASE("inequalities hold on the randomized family") {
  struct Case {
    Potential V;
    double rho;
    double p;
  };
  const std::vector<Case> cases{{Potential::quadratic(2.0), 2.0, 2.0},
                                {Potential::even_power(1.0, 4.0), 1.0, 4.0},
                                {Potential::quadratic_plus_convex(1.0, 1.0, 4.0), 1.0, 2.0},
                                {Potential::quadratic_plus_convex(1.0, 1.0, 4.0), 1.0, 4.0}};
  for (const Case& c : cases) {
    const auto eq = solve_equilibrium(c.V);
    auto family = perturbation_family(eq, 12, kDefaultSeed);
    const auto shifts = shift_family(eq, 4, kDefaultSeed);
    family.insert(family.end(), shifts.begin(), shifts.end());
    for (const ChebMeasure& m : family) {
      const Measure mu(m);
      const auto t = check_transport(eq, c.rho, c.p, mu);
      const auto l = check_lsi(eq, c.rho, mu, c.p);
      const auto h = check_hwi(eq, c.rho, mu, c.p);
      CHECK(t.gap >= -1e-8);
      CHECK(l.gap >= -1e-8);
      CHECK(h.gap >= -1e-8);
      CHECK(h.extras.at("chain_ok") == 1.0);
      if (c.p != 2.0) CHECK(l.rhs >= l.extras.at("rhs_young") - 1e-12);
    }
  }
}

TEST_CASE("quartic against a narrow semicircle") {
  const auto eq = solve_equilibrium(Potential::even_power(1.0, 4.0));
  const Measure mu(ChebMeasure(SupportInterval(-0.5, 0.5), {1.0 / kPi, 0.0, -1.0 / kPi}));
  const auto r = check_transport(eq, 1.0, 4.0, mu);
  CHECK(r.gap >= 0.0);
  CHECK(r.extras.at("c_p") == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("certificates are required") {
  const auto eq = solve_equilibrium(Potential::even_power(1.0, 4.0));
  const Measure mu(eq.measure.translated(0.1));
  CHECK_THROWS_AS(check_transport(eq, 1.0, 2.0, mu), Error);
  CHECK_THROWS_AS(check_lsi(eq, 0.5, mu), Error);
}

TEST_CASE("HWI with a negative curvature certificate") {
  const auto eq = solve_equilibrium(Potential::quadratic(0.9));
  const auto family = perturbation_family(eq, 5, 99);
  for (const ChebMeasure& m : family) {
    const Measure mu(m);
    const auto strong = check_hwi(eq, 0.9, mu);
    const auto weak = check_hwi(eq, -1.0, mu);
    CHECK(strong.gap >= -1e-8);
    CHECK(weak.gap >= strong.gap - 1e-12);
    CHECK(weak.extras.count("chain_ok") == 0);
  }
}

TEST_CASE("log-Sobolev constant from a transport constant") {
  CHECK(lsi_constant_from_transport(1.0, 1.0).K == doctest::Approx(1.0));
  CHECK(lsi_constant_from_transport(1.0, -0.5).K == doctest::Approx(1.0 / 128.0));
  CHECK(lsi_constant_from_transport(32.0, 0.0).K == doctest::Approx(1.0));
  const auto k = lsi_constant_from_transport(1.0, -0.5);
  CHECK(k.delta == doctest::Approx(4.0));
  // 4 C d^2 / ((C + rho) d - 1) is smallest at d = 2 / (C + rho).
  auto bound = [](double C, double rho, double d) { return 4 * C * d * d / ((C + rho) * d - 1); };
  CHECK(bound(1.0, -0.5, k.delta) < bound(1.0, -0.5, 3.9));
  CHECK(bound(1.0, -0.5, k.delta) < bound(1.0, -0.5, 4.1));
  CHECK(1.0 / (4.0 * bound(1.0, -0.5, k.delta)) == doctest::Approx(k.K_from_min));
  CHECK_THROWS_AS(lsi_constant_from_transport(0.4, -0.5), Error);
}

TEST_CASE("Brunn-Minkowski") {
  const Potential q = Potential::quadratic(2.0);
  for (double a : {0.2, 0.5, 0.9}) {
    const auto r = check_brunn_minkowski(q, q, q, a);
    CHECK(r.verdict == Verdict::equality);
  }
  // Harmonic mean of curvatures is the infimal convolution of two quadratics.
  const double a = 0.5;
  const double rho3 = 1.0 / (a / 1.0 + (1.0 - a) / 4.0);
  const auto r = check_brunn_minkowski(Potential::quadratic(1.0), Potential::quadratic(4.0),
                                       Potential::quadratic(rho3), a);
  CHECK(r.gap > 0.0);
  // E(rho x^2) = 3/4 + log(2 rho) / 2.
  auto E = [](double rho) { return 0.75 + 0.5 * std::log(2.0 * rho); };
  CHECK(std::abs(r.gap - (a * E(1.0) + (1 - a) * E(4.0) - E(rho3))) < 1e-10);

  CHECK_THROWS_AS(check_brunn_minkowski(Potential::quadratic(1.0), Potential::quadratic(4.0),
                                        Potential::quadratic(a * 1.0 + (1 - a) * 4.0), a),
                  Error);

  const Potential V1 = Potential::quadratic(1.0).plus_constant(1.0);
  const Potential V2 = Potential::quadratic(1.0);
  const Potential V3 = Potential::quadratic(1.0).plus_constant(a);
  const auto s = check_brunn_minkowski(V1, V2, V3, a);
  CHECK(std::abs(s.lhs - (E(1.0) + a)) < 1e-10);
  CHECK(s.verdict == Verdict::equality);
}

TEST_CASE("Pinsker counterexample") {
  double prev_bound = 1e300;
  for (int n : {4, 8, 16, 32, 64, 128}) {
    const auto r = pinsker_counterexample(n);
    CHECK(std::abs(r.energy_gap - r.closed_form) < 1e-12);
    CHECK(r.uniform_distance >= r.uniform_dist_lb * (1.0 - 1e-12));
    CHECK(r.bound_holds);
    CHECK(r.min_pullback >= -1e-14);
    CHECK(r.ratio_bound < prev_bound);
    prev_bound = r.ratio_bound;
  }
  const auto r4 = pinsker_counterexample(4);
  CHECK(r4.closed_form == doctest::Approx(9.5621e-5).epsilon(1e-4));
  CHECK(r4.uniform_dist_lb == doctest::Approx(0.688467 / (60 * kPi)).epsilon(1e-6));
  CHECK_THROWS_AS(pinsker_counterexample(3), Error);
}

TEST_CASE("arcsine total variation example") {
  for (int n : {1, 5, 10, 50}) {
    const auto r = arcsine_tv_example(n);
    // One cosine mode of size 1/pi: (pi^2 / (2n)) / pi^2.
    CHECK(std::abs(r.energy_gap - 1.0 / (2.0 * n)) < 1e-12);
    CHECK(r.tv >= 0.25 - 1e-6);
    CHECK(std::abs(r.tv - 1.0 / kPi) < 1e-8);
  }
}

TEST_CASE("families are deterministic") {
  const auto eq = solve_equilibrium(Potential::even_power(1.0, 4.0));
  const auto a = perturbation_family(eq, 5, 42);
  const auto b = perturbation_family(eq, 5, 42);
  for (int i = 0; i < 5; ++i) {
    CHECK(a[i].coeffs() == b[i].coeffs());
    CHECK(std::abs(a[i].mass() - 1.0) < 1e-12);
    CHECK(a[i].min_pullback() >= -1e-12);
  }
  const auto mp = solve_equilibrium(Potential::linear_minus_log(1.0, 0.0));
  for (const auto& m : shift_family(mp, 10, 42)) CHECK(m.support().a() >= 0.0);
}
