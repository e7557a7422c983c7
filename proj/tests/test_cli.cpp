#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(BERGER_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("version") {
    const Run r = run("--version");
    CHECK(r.code == 0);
    CHECK(r.out.find("berger") != std::string::npos);
  }

  TEST_CASE("verify") {
    CHECK(run("verify --m 1 --mu 1 -1 2").code == 0);
    const Run r = run("verify --identity hess-ratio --s 1..3 --m 1..3 --format csv");
    CHECK(r.code == 0);
    CHECK(r.out.find("hess-ratio") != std::string::npos);
    CHECK(r.out.find(",pass\n") != std::string::npos);
    CHECK(r.out.find(",fail\n") == std::string::npos);
  }

  TEST_CASE("malformed input exits 2 without output") {
    for (const char* args : {"verify --bogus", "verify --m x", "hessian --family nope", "region --res 1", "frobnicate",
                             "hessian --mu 1..2", "verify --identity no-such-identity", ""}) {
      CAPTURE(args);
      const Run r = run(args);
      CHECK(r.code == 2);
      CHECK(r.out.empty());
    }
  }

  TEST_CASE("hessian examples") {
    const Run a = run("hessian --family C2s --s 2 --m 1 --mu -1 --functional energy");
    CHECK(a.code == 0);
    CHECK(a.out.find("negative") != std::string::npos);
    const Run b = run("hessian --family Aa --m 1 --mu -1 --functional volume --format json");
    CHECK(b.code == 0);
    CHECK(b.out.find("\"verdict\"") != std::string::npos);
    const Run c = run("hessian --family s3 --level 1 --mu 3 --lambda 1 --functional egl");
    CHECK(c.code == 0);
    CHECK(c.out.find("negative") != std::string::npos);
  }

  TEST_CASE("region output is deterministic") {
    const auto dir = std::filesystem::temp_directory_path() / "berger_cli_test";
    std::filesystem::create_directories(dir);
    const std::string svg1 = (dir / "a.svg").string(), svg2 = (dir / "b.svg").string();
    const Run a = run("region --m 1 --mu 0.05..6 --lambda 0.05..3 --res 60 --svg " + svg1);
    const Run b = run("region --m 1 --mu 0.05..6 --lambda 0.05..3 --res 60 --svg " + svg2);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
    CHECK(slurp(svg1) == slurp(svg2));
    CHECK(slurp(svg1).find("<svg") != std::string::npos);
    const Run m2 = run("region --m 2 --mu 0.05..6 --lambda 0.05..3 --res 20 --format json");
    CHECK(m2.code == 0);
    CHECK(m2.out.find("\"unknown\"") != std::string::npos);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("out and report files") {
    const auto dir = std::filesystem::temp_directory_path() / "berger_cli_out";
    std::filesystem::create_directories(dir);
    const auto out = dir / "rows.csv", report = dir / "report.json";
    const Run r = run("hessian --family C2s --s 1..3 --mu -1 --out " + out.string() + " --report " + report.string());
    CHECK(r.code == 0);
    CHECK(slurp(out).find("functional,m,mu,lambda") != std::string::npos);
    CHECK(slurp(report).find("berger-report/1") != std::string::npos);
    std::filesystem::remove_all(dir);
  }
}
