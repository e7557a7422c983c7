#include "berger/fields.hpp"
#include "berger/harmonics.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace berger;

namespace {

Vec basis(int n, int i) {
  Vec v = Vec::Zero(n);
  v[i] = 1.0;
  return v;
}

// nabla^mu_{V^mu} Y for horizontal Y, from a central difference of Y along Jp
// and the correction term (mu - 1) J Y.
Vec vertical_covariant_oracle(const AmbientField& y, const Vec& p, double mu) {
  const double h = 1e-5;
  const Vec jp = oracle::j(p);
  Vec d = (y.value(p + h * jp) - y.value(p - h * jp)) / (2 * h);
  d -= d.dot(p) * p;
  return (d + (mu - 1.0) * oracle::j(y.value(p))) / std::sqrt(std::abs(mu));
}

}  // namespace

TEST_SUITE("fields") {
  TEST_CASE("A_a examples") {
    const BergerContext ctx(1, 1.0);
    const SpherePoint e1(basis(4, 0));
    CHECK(field_Aa(basis(4, 0), ctx).value(e1.position()).norm() < 1e-15);
    CHECK(field_Aa(basis(4, 1), ctx).value(e1.position()).isApprox(basis(4, 1)));
    CHECK_THROWS_AS(field_Aa(basis(6, 0), ctx), Error);
  }

  TEST_CASE("constructed fields are horizontal") {
    std::mt19937_64 rng(1);
    for (int m : {1, 2}) {
      for (double mu : {1.0, -1.0, 2.6}) {
        const BergerContext ctx(m, mu);
        const int n = 2 * m + 2;
        std::vector<TangentField> fields{field_Aa(oracle::random_vec(n, rng), ctx), field_C2s(1, 1, ctx),
                                         field_C2s(3, m + 1, ctx)};
        if (m == 1) {
          fields.push_back(field_s3(s3_eigenpair(1), ctx));
          fields.push_back(field_s3(s3_eigenpair(2), ctx));
          fields.push_back(field_s3_frame(ctx));
        }
        for (const TangentField& f : fields) {
          for (int i = 0; i < 20; ++i) {
            const Vec p = oracle::random_unit(n, rng);
            const Vec a = f.value(p);
            const double scale = std::max(1.0, a.norm());
            CHECK(std::abs(a.dot(p)) < 1e-12 * scale);
            CHECK(std::abs(a.dot(oracle::j(p))) < 1e-12 * scale);
          }
        }
      }
    }
  }

  TEST_CASE("C_2 at e1 is the projected gradient") {
    const BergerContext ctx(1, 1.0);
    const Vec p = basis(4, 0);
    // grad(x1^2 - x3^2) = (2, 0, 0, 0) at e1, which is normal; C_2 vanishes there.
    CHECK(field_C2s(1, 1, ctx).value(p).norm() < 1e-15);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 20; ++i) {
      const Vec q = oracle::random_unit(4, rng);
      Vec g(4);
      g << 2 * q[0], 0, -2 * q[2], 0;
      g -= g.dot(q) * q;
      g -= g.dot(oracle::j(q)) * oracle::j(q);
      CHECK((field_C2s(1, 1, ctx).value(q) - g).norm() < 1e-13);
    }
  }

  TEST_CASE("C_2s is independent of mu") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
      const Vec p = oracle::random_unit(6, rng);
      CHECK((field_C2s(2, 1, BergerContext(2, 1.0)).value(p) - field_C2s(2, 1, BergerContext(2, -0.3)).value(p))
                .norm() < 1e-13);
    }
  }

  TEST_CASE("vertical derivative of C_2s") {
    std::mt19937_64 rng(4);
    for (int s = 1; s <= 3; ++s)
      for (double mu : {-2.0, -1.0, 1.0, 2.0, 3.5}) {
        const BergerContext ctx(1, mu);
        const TangentField c = field_C2s(s, 1, ctx);
        for (int i = 0; i < 20; ++i) {
          const Vec p = oracle::random_unit(4, rng);
          const Vec expected = (mu - 2 * s) / std::sqrt(std::abs(mu)) * oracle::j(c.value(p));
          const Vec lib = nabla_mu(hopf_field(SpherePoint(p), ctx), c, ctx).vec();
          CHECK((lib - expected).norm() < 1e-8 * std::max(1.0, expected.norm()));
          CHECK((vertical_covariant_oracle(c, p, mu) - expected).norm() < 1e-6 * std::max(1.0, expected.norm()));
        }
      }
  }

  TEST_CASE("s3 eigenpairs") {
    for (int level : {1, 2}) {
      const S3EigenPair pair = s3_eigenpair(level);
      const Polynomial vva = vertical_derivative(vertical_derivative(pair.a1));
      CHECK(vva == Rational(-level * level) * pair.a1);
      CHECK(vertical_derivative(pair.a1) == Rational(level) * pair.a2);
      CHECK(laplacian(pair.a1).is_zero());
      CHECK(pair.a1.degree() == level);
    }
    CHECK_THROWS_AS(s3_eigenpair(3), Error);
    CHECK_THROWS_AS(s3_eigenpair_from(Polynomial::variable(4, 0) * Polynomial::variable(4, 0), 2), Error);
  }

  TEST_CASE("s3 field is a1 E1 + a2 E2") {
    std::mt19937_64 rng(5);
    const BergerContext ctx(1, 2.0);
    const S3EigenPair pair = s3_eigenpair(2);
    const TangentField a = field_s3(pair, ctx);
    for (int i = 0; i < 20; ++i) {
      const Vec p = oracle::random_unit(4, rng);
      const Vec expected = pair.a1.evaluate(p) * oracle::left_mul(2, p) + pair.a2.evaluate(p) * oracle::left_mul(3, p);
      CHECK((a.value(p) - expected).norm() < 1e-13);
      CHECK((field_s3_frame(ctx).value(p) - oracle::left_mul(2, p)).norm() < 1e-14);
    }
    CHECK_THROWS_AS(field_s3(pair, BergerContext(2, 1.0)), Error);
  }

  TEST_CASE("s3 fields along the fibre") {
    std::mt19937_64 rng(6);
    const BergerContext round(1, 1.0);
    for (int level : {0, 1, 2}) {
      const TangentField a = level == 0 ? field_s3_frame(round) : field_s3(s3_eigenpair(level), round);
      for (int i = 0; i < 20; ++i) {
        const Vec p = oracle::random_unit(4, rng);
        const Vec expected = -(level + 1.0) * oracle::j(a.value(p));
        CHECK((vertical_covariant_oracle(a, p, 1.0) - expected).norm() < 1e-6);
      }
    }
  }

  TEST_CASE("jacobian matches finite differences") {
    std::mt19937_64 rng(7);
    const TangentField c = field_C2s(2, 2, BergerContext(2, 1.0));
    for (int i = 0; i < 10; ++i) {
      const Vec x = oracle::random_vec(6, rng);
      const Mat fd = c.AmbientField::jacobian(x);
      CHECK((c.jacobian(x) - fd).norm() < 1e-6 * std::max(1.0, fd.norm()));
    }
  }

  TEST_CASE("descriptor serialization") {
    const TangentField c = field_C2s(2, 1, BergerContext(1, 1.0));
    const auto j = c.descriptor().to_json();
    CHECK(j.at("family") == "C2s");
    CHECK(j.at("s") == 2);
  }
}
