#include "berger/fields.hpp"
#include "berger/geometry.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace berger;

namespace {

Vec basis(int n, int i) {
  Vec v = Vec::Zero(n);
  v[i] = 1.0;
  return v;
}

// Central-difference directional derivative of an ambient field, step 1e-5.
Vec fd_directional(const AmbientField& y, const Vec& p, const Vec& x) {
  const double h = 1e-5;
  return (y.value(p + h * x) - y.value(p - h * x)) / (2.0 * h);
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("complex structure on basis vectors") {
    CHECK(complex_structure(basis(4, 0), 1).isApprox(basis(4, 2)));
    CHECK(complex_structure(basis(4, 2), 1).isApprox(-basis(4, 0)));
    std::mt19937_64 rng(3);
    const Vec u = oracle::random_vec(6, rng);
    CHECK(std::abs(complex_structure(u, 2).dot(u)) < 1e-14);
    CHECK((complex_structure(u, 2) - oracle::j(u)).norm() < 1e-15);
    CHECK_THROWS_AS(complex_structure(u, 1), Error);
  }

  TEST_CASE("hopf field examples") {
    const SpherePoint e1(basis(4, 0));
    CHECK(hopf_field(e1, BergerContext(1, 1.0)).vec().isApprox(basis(4, 2)));
    CHECK(hopf_field(e1, BergerContext(1, 4.0)).vec().isApprox(basis(4, 2) / 2.0));
    const BergerContext lor(1, -1.0);
    const TangentVector v = hopf_field(SpherePoint(basis(4, 1)), lor);
    CHECK(v.vec().isApprox(basis(4, 3)));
    CHECK(g_mu(v, v, lor) == doctest::Approx(-1.0));
  }

  TEST_CASE("context and type invariants") {
    CHECK_THROWS_AS(BergerContext(1, 0.0), Error);
    CHECK_THROWS_AS(BergerContext(0, 1.0), Error);
    const BergerContext c(2, -3.0);
    CHECK(c.eps() == -1);
    CHECK(c.abs_mu() == 3.0);
    CHECK_THROWS_AS(SpherePoint(Vec::Ones(4)), Error);
    CHECK_THROWS_AS(TangentVector(SpherePoint(basis(4, 0)), basis(4, 0)), Error);
  }

  TEST_CASE("project_tangent") {
    const SpherePoint p(basis(4, 0));
    CHECK(project_tangent(p, basis(4, 0)).vec().norm() < 1e-15);
    CHECK(project_tangent(p, basis(4, 1)).vec().isApprox(basis(4, 1)));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
      const SpherePoint q(oracle::random_unit(6, rng));
      const Vec t = project_tangent(q, oracle::random_vec(6, rng)).vec();
      CHECK(std::abs(t.dot(q.position())) < 1e-13);
      CHECK((project_tangent(q, t).vec() - t).norm() < 1e-14);
    }
  }

  TEST_CASE("g_mu scales the vertical direction only") {
    const BergerContext ctx(1, -2.0);
    const SpherePoint p(basis(4, 0));
    const TangentVector v(p, basis(4, 2)), h(p, basis(4, 1));
    CHECK(g_mu(v, v, ctx) == doctest::Approx(-2.0));
    CHECK(g_mu(h, v, ctx) == doctest::Approx(0.0));
    CHECK(g_mu(h, h, ctx) == doctest::Approx(1.0));
  }

  TEST_CASE("nabla of the Hopf field") {
    std::mt19937_64 rng(11);
    const BergerContext round(1, 1.0);
    const HopfAmbientField v(round);
    for (int i = 0; i < 20; ++i) {
      const SpherePoint p(oracle::random_unit(4, rng));
      Vec x = project_tangent(p, oracle::random_vec(4, rng)).vec();
      x -= x.dot(oracle::j(p.position())) * oracle::j(p.position());
      const TangentVector tx(p, x);
      CHECK((nabla(tx, v).vec() - oracle::j(x)).norm() < 1e-12);
      CHECK(nabla(hopf_field(p, round), v).vec().norm() < 1e-12);
      const double mu = 2.6;
      const BergerContext ctx(1, mu);
      CHECK((nabla_mu(tx, v, ctx).vec() - mu * oracle::j(x)).norm() < 1e-12);
    }
  }

  TEST_CASE("nabla of A_a matches a finite-difference oracle") {
    std::mt19937_64 rng(13);
    const BergerContext ctx(1, 1.0);
    const TangentField a = field_Aa(oracle::random_vec(4, rng), ctx);
    for (int i = 0; i < 20; ++i) {
      const SpherePoint p(oracle::random_unit(4, rng));
      const TangentVector x = project_tangent(p, oracle::random_vec(4, rng));
      Vec d = fd_directional(a, p.position(), x.vec());
      d -= d.dot(p.position()) * p.position();
      CHECK((nabla(x, a).vec() - d).norm() < 1e-6);
    }
  }

  TEST_CASE("adapted frame") {
    for (double mu : {1.0, -1.0, 2.6, -0.25}) {
      const BergerContext ctx(2, mu);
      std::mt19937_64 rng(17);
      for (int i = 0; i < 30; ++i) {
        const SpherePoint p(oracle::random_unit(6, rng));
        const AdaptedFrame f = adapted_frame(p, ctx);
        CHECK((f.vertical.vec() - oracle::j(p.position()) / std::sqrt(std::abs(mu))).norm() < 1e-14);
        REQUIRE(f.horizontal.size() == 4);
        std::vector<TangentVector> all{f.vertical};
        all.insert(all.end(), f.horizontal.begin(), f.horizontal.end());
        for (std::size_t a = 0; a < all.size(); ++a)
          for (std::size_t b = 0; b < all.size(); ++b) {
            const double expected = a != b ? 0.0 : (a == 0 ? (mu > 0 ? 1.0 : -1.0) : 1.0);
            CHECK(std::abs(g_mu(all[a], all[b], ctx) - expected) < 1e-12);
          }
        CHECK((oracle::j(f.horizontal[0].vec()) - f.horizontal[1].vec()).norm() < 1e-12);
      }
    }
    const AdaptedFrame e = adapted_frame(SpherePoint(basis(4, 0)), BergerContext(1, 1.0));
    CHECK(std::abs(e.horizontal[0].vec()[0]) < 1e-15);
    CHECK(std::abs(e.horizontal[0].vec()[2]) < 1e-15);
  }

  TEST_CASE("quaternion frame against quaternion multiplication") {
    const auto [e1, e2] = s3_quaternion_frame(SpherePoint(basis(4, 0)));
    CHECK(e1.vec().isApprox(basis(4, 1)));
    CHECK(e2.vec().isApprox(basis(4, 3)));
    std::mt19937_64 rng(19);
    for (int i = 0; i < 50; ++i) {
      const Vec p = oracle::random_unit(4, rng);
      const auto [a, b] = s3_quaternion_frame(SpherePoint(p));
      CHECK((a.vec() - oracle::left_mul(2, p)).norm() < 1e-14);
      CHECK((b.vec() - oracle::left_mul(3, p)).norm() < 1e-14);
      CHECK((oracle::left_mul(1, p) - oracle::j(p)).norm() < 1e-14);
      CHECK(std::abs(a.vec().dot(b.vec())) < 1e-14);
    }
    CHECK_THROWS_AS(s3_quaternion_frame(SpherePoint(basis(6, 0))), Error);
  }

  TEST_CASE("quaternion bracket by finite differences") {
    // [E1, E2](f) = E1(E2 f) - E2(E1 f) for f = x1, with E_i f = <grad f, E_i>.
    std::mt19937_64 rng(23);
    auto e1f = [](const Vec& q) { return oracle::left_mul(2, q)[0]; };
    auto e2f = [](const Vec& q) { return oracle::left_mul(3, q)[0]; };
    auto derivative = [](const std::function<double(const Vec&)>& g, const Vec& p, const Vec& x) {
      const double h = 1e-5;
      return (g(p + h * x) - g(p - h * x)) / (2 * h);
    };
    for (int i = 0; i < 200; ++i) {
      const Vec p = oracle::random_unit(4, rng);
      const double lhs = derivative(e2f, p, oracle::left_mul(2, p)) - derivative(e1f, p, oracle::left_mul(3, p));
      CHECK(std::abs(lhs - (-2.0 * oracle::j(p)[0])) < 1e-8);
    }
  }

  TEST_CASE("nabla_mu reduces to nabla at mu = 1") {
    std::mt19937_64 rng(29);
    const BergerContext ctx(1, 1.0);
    const TangentField a = field_Aa(oracle::random_vec(4, rng), ctx);
    for (int i = 0; i < 100; ++i) {
      const SpherePoint p(oracle::random_unit(4, rng));
      const TangentVector x = project_tangent(p, oracle::random_vec(4, rng));
      CHECK((nabla_mu(x, a, ctx).vec() - nabla(x, a).vec()).norm() < 1e-12);
    }
  }
}
