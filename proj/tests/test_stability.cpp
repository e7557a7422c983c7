#include "berger/stability.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace berger;

namespace {

// Energy coefficient of C_2s evaluated independently.
double energy_coefficient(int s, int m, double mu) {
  return 2.0 / mu * (mu * mu * (1 - m) + mu * (2.0 * s - 1) * (m + 1) + 2.0 * s * s);
}

double e_lambda(int s, int m, double mu, double lambda) {
  return mu * (1 - 2 * m) + (2 * s - mu) * (2 * s - mu) / lambda + 2 * (2 * s - 1) * (m + 1) + 4 * s;
}

}  // namespace

TEST_SUITE("stability") {
  TEST_CASE("classify_s3 examples") {
    const auto a = classify_s3(1.0, 0.5);
    CHECK(a.region == Region::Stable);
    CHECK_FALSE(a.witness.has_value());
    const auto b = classify_s3(3.0, 0.5);
    CHECK(b.region == Region::Unstable);
    REQUIRE(b.witness.has_value());
    CHECK(b.witness->family == "s3");
    CHECK(b.witness->s == 1);
    CHECK(b.witness->coefficient < 0);
    const auto c = classify_s3(5.0, 2.0);
    CHECK(c.region == Region::Unstable);
    REQUIRE(c.witness.has_value());
    CHECK(c.witness->s == 2);
    CHECK(c.witness->revalidated);
    const auto d = classify_s3(1.0, 1.5);
    CHECK(d.region == Region::Unstable);
    REQUIRE(d.witness.has_value());
    CHECK(d.witness->s == 0);
  }

  TEST_CASE("classify_s3 is a partition on a grid") {
    for (int i = 1; i <= 120; ++i)
      for (int j = 1; j <= 60; ++j) {
        const double mu = 0.05 * i, lambda = 0.05 * j;
        const auto c = classify_s3(mu, lambda);
        CHECK_FALSE(c.doubly_classified);
        CHECK(c.region != Region::Unknown);
        if (c.region == Region::Unstable) {
          REQUIRE(c.witness.has_value());
          CHECK(c.witness->coefficient < 0);
        }
      }
  }

  TEST_CASE("classify_general examples") {
    const auto a = classify_general(2, -1.0, FunctionalId::energy());
    CHECK(a.region == Region::Unstable);
    REQUIRE(a.witness.has_value());
    CHECK(a.witness->revalidated);
    CHECK(classify_general(3, -5.0, FunctionalId::generalized(1.0)).region == Region::Stable);
    const auto c = classify_general(2, -0.5, FunctionalId::energy());
    CHECK(c.region == Region::Unstable);
    CHECK(std::find(c.flags.begin(), c.flags.end(), "aa-lorentz") != c.flags.end());
    const auto d = classify_general(2, -2.0, FunctionalId::energy());
    CHECK(std::find(d.flags.begin(), d.flags.end(), "aa-lorentz") == d.flags.end());
    CHECK(classify_general(1, 1.0, FunctionalId::generalized(0.5)).region == Region::Stable);
    CHECK(classify_general(2, 3.0, FunctionalId::energy()).region == Region::Unknown);
    CHECK(classify_general(2, 1.0, FunctionalId::generalized(-0.5)).region == Region::Unstable);
  }

  TEST_CASE("instability witness") {
    const auto w = instability_witness(1, -1.0, FunctionalId::energy(), 64);
    REQUIRE(w.has_value());
    CHECK(w->s == 2);
    CHECK(w->coefficient == doctest::Approx(-4.0));
    CHECK(revalidate_witness(*w, 1, -1.0, FunctionalId::energy()) < 0);
    CHECK_FALSE(instability_witness(2, 3.0, FunctionalId::energy(), 64).has_value());
    const auto g = instability_witness(1, -1.0, FunctionalId::generalized(-1.0), 64);
    REQUIRE(g.has_value());
    int expected = 1;
    while (e_lambda(expected, 1, -1.0, -1.0) >= 0) ++expected;
    CHECK(g->s == expected);
  }

  TEST_CASE("witness coefficients match the energy formula") {
    for (int m : {1, 2, 3})
      for (double mu : {-3.0, -0.4, 0.7, 2.0})
        for (int s = 1; s <= 6; ++s)
          CHECK(c2s_witness_coefficient(m, mu, FunctionalId::energy(), s) ==
                doctest::Approx(energy_coefficient(s, m, mu)));
  }

  TEST_CASE("energy witness bound on a log grid") {
    for (int m : {1, 2, 3})
      for (int i = 0; i < 50; ++i) {
        const double mu = -std::pow(10.0, -1.5 + 2.1 * i / 49.0);
        const auto w = instability_witness(m, mu, FunctionalId::energy(), 200);
        REQUIRE(w.has_value());
        CHECK(w->s <= static_cast<int>(std::ceil((m + 1) * std::abs(mu))) + 2);
        CHECK(energy_coefficient(w->s, m, mu) < 0);
        for (int s = 1; s < w->s; ++s) CHECK(energy_coefficient(s, m, mu) >= 0);
      }
  }

  TEST_CASE("boundary intersection") {
    const auto [mu, lambda] = boundary_intersection();
    CHECK(std::abs(mu - 8.0 / 3.0) < 1e-12);
    CHECK(std::abs(lambda - 1.0 / 6.0) < 1e-12);
    const auto curves = boundary_curves(0.05, 6.0, 3.0, 200);
    REQUIRE(curves.size() == 3);
    for (double x = 4.01; x < 20; x += 0.37) CHECK((x - 3) * (x - 3) / (x - 2) > x - 4);
  }

  TEST_CASE("phase grid") {
    const PhaseGrid g = figure1_grid(1, 0.05, 6.0, 0.05, 3.0, 60);
    CHECK(g.doubly == 0);
    CHECK(g.unknown == 0);
    CHECK(g.stable + g.unstable == 3600);
    CHECK(g.boundaries.size() == 3);
    const std::string csv = grid_csv(g);
    CHECK(csv.rfind("mu,lambda,region,predicate,witness_family,witness_s", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3601);
    const std::string svg = grid_svg(g);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("data-curve=\"frame\"") != std::string::npos);
    CHECK(grid_svg(g) == svg);
  }

  TEST_CASE("lorentzian half plane") {
    const PhaseGrid g = figure1_grid(1, -6.0, -0.05, -3.0, 3.0, 41);
    for (std::size_t i = 0; i < g.mu.size(); ++i)
      for (std::size_t j = 0; j < g.lambda.size(); ++j) {
        const auto& c = g.at(i, j);
        if (g.lambda[j] > 0) CHECK(c.region == Region::Stable);
        if (g.lambda[j] < 0) {
          CHECK(c.region == Region::Unstable);
          CHECK(c.witness.has_value());
        }
      }
  }

  TEST_CASE("m = 2 grid has unknown cells") {
    const PhaseGrid g = figure1_grid(2, 0.05, 6.0, 0.05, 3.0, 30);
    CHECK(g.unknown > 0);
    CHECK(g.doubly == 0);
  }
}
