#include "berger/functionals.hpp"

#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

using namespace berger;

namespace {

constexpr double kPi2 = oracle::pi * oracle::pi;

double vol_mu(int m, double mu) { return std::sqrt(std::abs(mu)) * oracle::sphere_volume(m); }

std::vector<FunctionalId> all_functionals() {
  return {FunctionalId::energy(), FunctionalId::volume(), FunctionalId::generalized(0.5),
          FunctionalId::generalized(-1.0)};
}

}  // namespace

TEST_SUITE("functionals") {
  TEST_CASE("functional ids") {
    CHECK(functional_from_name("energy", std::nullopt).kind == FunctionalKind::Energy);
    CHECK(functional_from_name("egl", 2.0).lambda == 2.0);
    CHECK_THROWS_AS(functional_from_name("egl", std::nullopt), Error);
    CHECK_THROWS_AS(FunctionalId::generalized(0.0), Error);
    CHECK_THROWS_AS(functional_from_name("bending", std::nullopt), Error);
  }

  TEST_CASE("functionals at the Hopf field") {
    for (int m : {1, 2}) {
      for (double mu : {1.0, 4.0, -1.0, -0.5}) {
        const BergerContext ctx(m, mu);
        const HopfAmbientField v(ctx);
        const QuadratureRule rule = product_rule_for_degree(m, 4);
        const double e = evaluate_functional(v, FunctionalId::energy(), ctx, rule);
        CHECK(e == doctest::Approx(0.5 * (2 * m + 1 + 2 * m * std::abs(mu)) * vol_mu(m, mu)).epsilon(1e-12));
        const double f = evaluate_functional(v, FunctionalId::volume(), ctx, rule);
        CHECK(f == doctest::Approx(std::pow(1 + std::abs(mu), m) * vol_mu(m, mu)).epsilon(1e-12));
        if (mu > 0) {
          const double eg = evaluate_functional(v, FunctionalId::generalized(mu), ctx, rule);
          CHECK(eg == doctest::Approx(e).epsilon(1e-12));
        }
      }
    }
    const BergerContext round(1, 1.0);
    const QuadratureRule rule = product_rule_for_degree(1, 4);
    CHECK(evaluate_functional(HopfAmbientField(round), FunctionalId::energy(), round, rule) ==
          doctest::Approx(5 * kPi2).epsilon(1e-12));
    CHECK(evaluate_functional(HopfAmbientField(round), FunctionalId::volume(), round, rule) ==
          doctest::Approx(4 * kPi2).epsilon(1e-12));
  }

  TEST_CASE("C_2s coefficients") {
    const C2sCoefficients a = hess_c2s_coefficients(2, 1, -1.0, std::nullopt);
    CHECK(a.energy == doctest::Approx(-4.0));
    CHECK_FALSE(a.e_lambda.has_value());
    const C2sCoefficients b = hess_c2s_coefficients(1, 1, 1.0, 1.0);
    REQUIRE(b.e_lambda.has_value());
    CHECK(*b.e_lambda == doctest::Approx(8.0));
    CHECK(*b.generalized == doctest::Approx(8.0));
    const C2sCoefficients c = hess_c2s_coefficients(1, 1, -1.0, -1.0);
    CHECK(c.f_vol == doctest::Approx(4.0));
    CHECK(c.volume == doctest::Approx(-4.0));
    CHECK(c.energy == doctest::Approx(0.0));
    CHECK(*c.e_lambda == doctest::Approx(0.0));
    CHECK_THROWS_AS(hess_c2s_coefficients(1, 1, 0.0, std::nullopt), Error);
  }

  TEST_CASE("A_a Hessian against the closed form") {
    std::mt19937_64 rng(3);
    for (int m : {1, 2}) {
      for (double mu : {-1.0, -0.25, -3.0}) {
        const BergerContext ctx(m, mu);
        const Vec a = oracle::random_vec(2 * m + 2, rng);
        const TangentField f = field_Aa(a, ctx);
        // |A_a|^2 averages to |a|^2 m / (m + 1) over the round sphere.
        const double norm = a.squaredNorm() * m / (m + 1.0) * vol_mu(m, mu);
        const double energy = norm * ((1 - 2 * m) * mu + 2 + (mu - 1) * (mu - 1) / mu);
        const double hess = hess_hopf_closed(f, FunctionalId::energy(), ctx, exact_moment_rule(m));
        CHECK(oracle::relative(hess, energy) < 1e-10);
        CHECK(aa_lorentz_coefficients(m, mu).energy * norm == doctest::Approx(energy).epsilon(1e-12));
        const double vol = hess_hopf_closed(f, FunctionalId::volume(), ctx, exact_moment_rule(m));
        CHECK(std::abs(vol - aa_lorentz_coefficients(m, mu).volume * norm) < 1e-10 * std::max(1.0, std::abs(vol)));
      }
    }
    // m = 1, mu = -1: coefficient (1/2)(1 + 2 - 4) = -1/2 of |a|^2 vol.
    const BergerContext ctx(1, -1.0);
    Vec a = Vec::Zero(4);
    a[1] = 1.0;
    CHECK(hess_hopf_closed(field_Aa(a, ctx), FunctionalId::energy(), ctx, exact_moment_rule(1)) ==
          doctest::Approx(-0.5 * 2 * kPi2).epsilon(1e-12));
  }

  TEST_CASE("sigma2 against eigenvalues") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    for (int n : {3, 5}) {
      for (int t = 0; t < 10; ++t) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) m(i, j) = normal(rng);
        const Eigen::VectorXcd ev = Eigen::EigenSolver<Mat>(m).eigenvalues();
        std::complex<double> s2 = 0;
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) s2 += ev[i] * ev[j];
        CHECK(sigma2(m) == doctest::Approx(s2.real()).epsilon(1e-10));
        const double tr = m.trace();
        CHECK(2 * sigma2(m) == doctest::Approx(tr * tr - (m * m).trace()).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("first variation vanishes") {
    for (double mu : {1.0, -1.0, 2.0, -3.0}) {
      const BergerContext ctx(1, mu);
      const TangentField a = field_C2s(1, 1, ctx);
      const QuadratureRule rule = fd_rule_for(a);
      for (const FunctionalId& id : all_functionals()) {
        const SecondVariation sv = second_variation_fd(a, id, ctx, rule);
        CHECK(std::abs(sv.first) <= 1e-6);
      }
    }
  }

  TEST_CASE("finite differences against the Hopf Hessian") {
    const BergerContext round(1, 1.0);
    Vec a(4);
    a << 0.3, -1.0, 0.5, 0.2;
    const TangentField f = field_Aa(a, round);
    const double closed = hess_hopf_closed(f, FunctionalId::energy(), round, exact_moment_rule(1));
    const SecondVariation sv = second_variation_fd(f, FunctionalId::energy(), round, fd_rule_for(f));
    CHECK(oracle::relative(sv.second, closed) < 1e-4);
    for (double mu : {-1.0, 2.6}) {
      const BergerContext ctx(1, mu);
      const TangentField c = field_C2s(2, 1, ctx);
      const ExactFieldMoments mom = field_moments_exact(c);
      for (const FunctionalId& id : all_functionals()) {
        const double exact = hess_hopf_from_moments(mom.values(), id, ctx);
        const double fd = second_variation_fd(c, id, ctx, fd_rule_for(c)).second;
        const double scale = mom.values().ia * std::sqrt(std::abs(mu));
        CHECK(relative_error(fd, exact, scale) < 1e-3);
      }
    }
  }

  TEST_CASE("generalized energy at lambda = mu has the energy Hessian") {
    for (double mu : {0.5, 2.0}) {
      const BergerContext ctx(2, mu);
      const TangentField c = field_C2s(2, 1, ctx);
      CHECK(hess_hopf_closed(c, FunctionalId::generalized(mu), ctx, exact_moment_rule(2)) ==
            doctest::Approx(hess_hopf_closed(c, FunctionalId::energy(), ctx, exact_moment_rule(2))).epsilon(1e-12));
    }
  }

  TEST_CASE("generalized energy sign on C_2 and C_4 at lambda = mu = -1") {
    const BergerContext ctx(1, -1.0);
    const FunctionalId id = FunctionalId::generalized(-1.0);
    const TangentField c2 = field_C2s(1, 1, ctx);
    const double norm2 = field_moments_exact(c2).values().ia;
    CHECK(std::abs(second_variation_fd(c2, id, ctx, fd_rule_for(c2)).second) < 1e-3 * norm2);
    const TangentField c4 = field_C2s(2, 1, ctx);
    CHECK(*hess_c2s_coefficients(2, 1, -1.0, -1.0).e_lambda < 0);
    CHECK(second_variation_fd(c4, id, ctx, fd_rule_for(c4)).second < 0);
  }

  TEST_CASE("general forms agree with the Hopf Hessian") {
    std::mt19937_64 rng(9);
    for (double mu : {1.0, -1.0, 0.25}) {
      const BergerContext ctx(1, mu);
      const TangentField a = field_Aa(oracle::random_vec(4, rng), ctx);
      for (const FunctionalId& id : all_functionals()) {
        const double closed = hess_hopf_closed(a, id, ctx, exact_moment_rule(1));
        const double general = hess_general_forms(a, id, ctx, fd_rule_for(a));
        const double scale = field_moments_exact(a).values().ia * std::sqrt(std::abs(mu));
        CHECK(relative_error(general, closed, scale) < 1e-8);
      }
    }
  }

  TEST_CASE("omega vanishes on horizontal directions") {
    std::mt19937_64 rng(10);
    for (double mu : {1.0, -1.0, 2.6}) {
      const BergerContext ctx(1, mu);
      for (const FunctionalId& id : all_functionals()) {
        for (int i = 0; i < 10; ++i) {
          const Vec p = oracle::random_unit(4, rng);
          Vec x = oracle::random_vec(4, rng);
          x -= x.dot(p) * p;
          x -= x.dot(oracle::j(p)) * oracle::j(p);
          CHECK(std::abs(omega_fd(p, x, id, ctx)) < 1e-6);
        }
      }
    }
  }

  TEST_CASE("s3 cancellation") {
    for (int level : {1, 2}) {
      const DbarCReport r = hess_s3_dbarC(s3_eigenpair(level), 3.0, 1.0);
      CHECK(r.dbarc_round == 0);
      CHECK(r.sum_b2 == Rational(2 * level) * r.norm_a2);
      CHECK(r.cross == Rational(level) * r.norm_a2);
    }
    CHECK(hess_s3_dbarC(s3_eigenpair(1), 3.0, 1.0).hessian < 0);
    CHECK(s3_coefficient(1, 3.0, 1.0) == doctest::Approx(std::sqrt(1.0 / 3.0) * (2 - 3.0)));
  }

  TEST_CASE("hessian report") {
    const BergerContext ctx(1, -1.0);
    const HessianReport r = hessian_report(field_C2s(2, 1, ctx), FunctionalId::energy(), ctx);
    REQUIRE(r.coefficient.has_value());
    CHECK(*r.coefficient == doctest::Approx(-4.0));
    CHECK(r.verdict == "negative");
    CHECK(r.rel_err < 1e-3);
    CHECK(r.to_json().at("verdict") == "negative");
    CHECK(HessianReport::csv_header().rfind("functional,m,mu,lambda,direction,closed_form,fd,exact,rel_err,verdict", 0) ==
          0);
  }

  TEST_CASE("relative error") {
    CHECK(relative_error(1.0, 2.0, 0.0) == doctest::Approx(0.5));
    CHECK(relative_error(1e-9, 0.0, 1.0) == doctest::Approx(1e-9));
  }
}
