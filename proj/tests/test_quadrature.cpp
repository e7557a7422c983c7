#include "berger/harmonics.hpp"
#include "berger/quadrature.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace berger;

namespace {

constexpr double kPi2 = oracle::pi * oracle::pi;

Polynomial mono(int n, std::vector<int> e) { return Polynomial::monomial(n, std::move(e), 1); }

}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("sphere volume") {
    CHECK(sphere_volume(1) == doctest::Approx(2 * kPi2).epsilon(1e-15));
    CHECK(sphere_volume(2) == doctest::Approx(std::pow(oracle::pi, 3)).epsilon(1e-15));
    for (int m = 1; m <= 5; ++m) CHECK(sphere_volume(m) == doctest::Approx(oracle::sphere_volume(m)).epsilon(1e-14));
  }

  TEST_CASE("sphere moments against Monte Carlo") {
    CHECK(sphere_moment({0, 0, 0, 0}) == doctest::Approx(2 * kPi2));
    CHECK(sphere_moment_exact({0, 0, 0, 0}) == 2);
    CHECK(sphere_moment_exact({4, 0, 0, 0}) == Rational(1, 4));
    CHECK(sphere_moment_exact({2, 2, 0, 0}) == Rational(1, 12));
    CHECK(sphere_moment_exact({1, 2, 0, 0}) == 0);
    CHECK_THROWS_AS(sphere_moment_exact({-2, 0, 0, 0}), Error);
    const auto [e4, se4] = oracle::monte_carlo([](const Vec& x) { return std::pow(x[0], 4); }, 4, 2000000, 1,
                                               oracle::sphere_volume(1));
    CHECK(std::abs(e4 - kPi2 / 4) < 3 * se4);
    const auto [e22, se22] = oracle::monte_carlo([](const Vec& x) { return x[0] * x[0] * x[1] * x[1]; }, 4, 2000000,
                                                 2, oracle::sphere_volume(1));
    CHECK(std::abs(e22 - kPi2 / 12) < 3 * se22);
  }

  TEST_CASE("ball moments") {
    CHECK(ball_moment_exact({0, 0, 0, 0}) == Rational(1, 2));
    // Ratio of radial powers of the pair (x1, x3) over the ball, s = 2, m = 1.
    auto pair_power = [](int k) {
      Rational total = 0;
      for (int i = 0; i <= k; ++i)
        total += Rational(binomial(k, i)) * ball_moment_exact({2 * i, 0, 2 * (k - i), 0});
      return total;
    };
    CHECK(pair_power(3) / pair_power(1) == Rational(3, 10));
    CHECK(pair_power(1) / pair_power(0) == Rational(1, 3));
  }

  TEST_CASE("integrals with the Berger measure") {
    const BergerContext ctx(1, 4.0);
    const Estimate e = integrate_sphere([](const Vec&) { return 1.0; }, torus_product_rule(1, 4, 2), ctx);
    CHECK(e.value == doctest::Approx(4 * kPi2).epsilon(1e-14));
    const Polynomial f = f2s(1, 1, 1);
    CHECK(sphere_integral_exact(f * f) == Rational(1, 3));
    CHECK(integrate_sphere(f * f, exact_moment_rule(1), BergerContext(1, 1.0)).value ==
          doctest::Approx(kPi2 / 3).epsilon(1e-14));
  }

  TEST_CASE("ambient hessian norm ratio") {
    for (int m = 1; m <= 3; ++m)
      for (int s = 1; s <= 3; ++s) {
        const Polynomial f = f2s(s, 1, m);
        Polynomial h2(f.nvars());
        for (const auto& row : hessian(f))
          for (const auto& entry : row) h2 += entry * entry;
        const Rational ratio = sphere_integral_exact(h2) / sphere_integral_exact(f * f);
        CHECK(ratio == Rational(8 * s * (2 * s - 1) * (m + 2 * s - 1) * (m + 2 * s)));
      }
    // Independent numerical check at s = 1, m = 1: |Hess f|^2 = 8 and int f^2 = pi^2/3.
    const auto [ef, sef] = oracle::monte_carlo(
        [](const Vec& x) { return std::pow(x[0] * x[0] - x[2] * x[2], 2); }, 4, 1000000, 3, oracle::sphere_volume(1));
    CHECK(std::abs(8 * oracle::sphere_volume(1) / ef - 48.0) < 48.0 * 3 * sef / ef);
  }

  TEST_CASE("product rules are exact on monomials") {
    std::mt19937_64 rng(9);
    for (int m = 1; m <= 3; ++m) {
      const int n = 2 * m + 2;
      const QuadratureRule rule = product_rule_for_degree(m, 8);
      double wsum = 0.0;
      for (double w : rule.weights) {
        CHECK(w > 0);
        wsum += w;
      }
      CHECK(wsum == doctest::Approx(oracle::sphere_volume(m)).epsilon(1e-12));
      std::uniform_int_distribution<int> pick(0, n - 1);
      for (int t = 0; t < 20; ++t) {
        std::vector<int> e(n, 0);
        for (int d = 0; d < 8; ++d) ++e[pick(rng)];
        const Polynomial p = mono(n, e);
        const double exact = sphere_moment(e);
        const double quad = integrate_sphere(p, rule, BergerContext(m, 1.0)).value;
        CHECK(std::abs(quad - exact) < 1e-12 * oracle::sphere_volume(m));
      }
    }
    CHECK(hopf_product_rule(3, 9).nodes.size() == 3u * 81u);
  }

  TEST_CASE("monte carlo rule") {
    const BergerContext ctx(2, 1.0);
    const QuadratureRule mc = monte_carlo_rule(2, 1000000, 42);
    const Estimate e = integrate_sphere([](const Vec&) { return 1.0; }, mc, ctx);
    CHECK(std::abs(e.value - std::pow(oracle::pi, 3)) <= 3 * e.std_error + 1e-9);
    const Estimate again = integrate_sphere([](const Vec&) { return 1.0; }, monte_carlo_rule(2, 1000000, 42), ctx);
    CHECK(again.value == e.value);
    const QuadratureRule mc1 = monte_carlo_rule(1, 400000, 7);
    const Estimate x2 = integrate_sphere([](const Vec& x) { return x[0] * x[0]; }, mc1, BergerContext(1, 1.0));
    CHECK(x2.std_error > 0);
    CHECK(std::abs(x2.value - kPi2 / 2) < 3 * x2.std_error);
    const Estimate x2b = integrate_sphere([](const Vec& x) { return x[0] * x[0]; }, monte_carlo_rule(1, 400000, 7),
                                          BergerContext(1, 1.0));
    CHECK(x2b.value == x2.value);
  }

  TEST_CASE("rule_from_json") {
    CHECK(rule_from_json({{"rule", "exact"}}, 1, 4).kind == RuleKind::ExactMoments);
    CHECK(rule_from_json({{"rule", "torus"}}, 2, 6).kind == RuleKind::TorusProduct);
    const QuadratureRule mc = rule_from_json({{"rule", "mc"}, {"n", 100}, {"seed", 3}}, 1, 4);
    CHECK(mc.samples == 100u);
    CHECK(mc.seed == 3u);
    CHECK_THROWS_AS(rule_from_json({{"rule", "simpson"}}, 1, 4), Error);
    CHECK_THROWS_AS(hopf_product_rule(0, 4), Error);
  }
}
