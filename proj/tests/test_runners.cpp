#include "berger/runners.hpp"
#include "berger/types.hpp"

#include <doctest.h>

using namespace berger;
using nlohmann::json;

TEST_SUITE("runners") {
  TEST_CASE("config resolution") {
    const json v = resolve_config("verify", json::object());
    CHECK(v.at("m") == json::array({1}));
    CHECK(v.at("points") == 200);
    const json h = resolve_config("hessian", {{"mu", -2}});
    CHECK(h.at("mu") == json::array({-2.0}));
    CHECK_THROWS_AS(resolve_config("verify", {{"bogus", 1}}), Error);
    CHECK_THROWS_AS(resolve_config("hessian", {{"functional", "egl"}}), Error);
    CHECK_THROWS_AS(resolve_config("hessian", {{"family", "s3"}, {"m", 2}}), Error);
    CHECK_THROWS_AS(resolve_config("region", {{"res", 1}}), Error);
    CHECK_THROWS_AS(resolve_config("plot", json::object()), Error);
  }

  TEST_CASE("verify runner") {
    const RunResult r = run_verify({{"identity", json::array({"hess-ratio", "sigma2"})}, {"m", {1, 2}}});
    CHECK(r.exit_code == 0);
    CHECK(r.report.at("header").at("schema") == kReportSchema);
    CHECK(r.report.at("summary").at("failed") == 0);
    const RunResult csv = run_verify({{"identity", json::array({"hess-ratio"})}, {"format", "csv"}});
    CHECK(csv.output.find("identity,statement,params,residual,tolerance,pass") != std::string::npos);
  }

  TEST_CASE("every identity suite passes at the defaults") {
    for (const std::string& name : identity_names()) {
      CAPTURE(name);
      json cfg = resolve_config("verify", {{"identity", json::array({name})}, {"points", 50}});
      for (const IdentityCheck& c : run_identity(name, cfg)) {
        CAPTURE(c.name);
        CAPTURE(c.params.dump());
        CHECK(c.pass);
      }
    }
  }

  TEST_CASE("hessian runner") {
    const RunResult r = run_hessian({{"family", "C2s"}, {"s", {2}}, {"m", {1}}, {"mu", {-1}}, {"format", "json"}});
    CHECK(r.exit_code == 0);
    const json rows = r.report.at("rows");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].at("verdict") == "negative");
    CHECK(rows[0].at("coefficient").get<double>() == doctest::Approx(-4.0));
    const RunResult s3 = run_hessian(
        {{"family", "s3"}, {"level", {1}}, {"mu", {3}}, {"lambda", {1}}, {"functional", {"egl"}}, {"format", "json"}});
    CHECK(s3.exit_code == 0);
    CHECK(s3.report.at("rows")[0].at("verdict") == "negative");
  }

  TEST_CASE("region runner") {
    const RunResult r = run_region({{"res", 40}});
    CHECK(r.exit_code == 0);
    CHECK(r.svg.find("<svg") != std::string::npos);
    CHECK(r.report.at("doubly_classified") == 0);
    CHECK(run_region({{"res", 40}}).output == r.output);
    const RunResult m2 = run_region({{"m", 2}, {"res", 20}});
    CHECK(m2.report.at("unknown").get<int>() > 0);
  }
}
