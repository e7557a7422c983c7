#include "berger_c.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw UsageError("not a number: '" + text + "'");
  return v;
}

int parse_int(const std::string& text) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw UsageError("not an integer: '" + text + "'");
  }
  if (used != text.size()) throw UsageError("not an integer: '" + text + "'");
  return v;
}

bool split_range(const std::string& token, std::string& lo, std::string& hi) {
  const auto pos = token.find("..");
  if (pos == std::string::npos) return false;
  lo = token.substr(0, pos);
  hi = token.substr(pos + 2);
  return true;
}

// "1..3" expands to 1, 2, 3.
json int_list(const std::vector<std::string>& tokens) {
  json out = json::array();
  for (const auto& t : tokens) {
    std::string lo, hi;
    if (split_range(t, lo, hi)) {
      const int a = parse_int(lo), b = parse_int(hi);
      if (b < a) throw UsageError("empty range '" + t + "'");
      for (int k = a; k <= b; ++k) out.push_back(k);
    } else {
      out.push_back(parse_int(t));
    }
  }
  return out;
}

json double_list(const std::vector<std::string>& tokens, const char* flag) {
  json out = json::array();
  for (const auto& t : tokens) {
    std::string lo, hi;
    if (split_range(t, lo, hi)) throw UsageError(std::string(flag) + " takes a list of values here, not a range");
    out.push_back(parse_double(t));
  }
  return out;
}

// "0.05..6" or two values "0.05 6".
json range_pair(const std::vector<std::string>& tokens, const char* flag) {
  std::string lo, hi;
  if (tokens.size() == 1 && split_range(tokens[0], lo, hi)) return json::array({parse_double(lo), parse_double(hi)});
  if (tokens.size() == 2) return json::array({parse_double(tokens[0]), parse_double(tokens[1])});
  throw UsageError(std::string(flag) + " expects a range lo..hi");
}

std::vector<std::string> split_commas(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    std::size_t start = 0;
    while (start <= t.size()) {
      const auto end = t.find(',', start);
      const std::string part = t.substr(start, end == std::string::npos ? std::string::npos : end - start);
      if (!part.empty()) out.push_back(part);
      if (end == std::string::npos) break;
      start = end + 1;
    }
  }
  return out;
}

struct Flags {
  std::vector<std::string> m, mu, lambda, s, level, functional, identity, a, oracles;
  std::string family, rule, format, out, svg, report;
  int n = -1, res = -1, points = -1, axis = -1, s_max = -1;
  long long seed = -1;
  double tol = -1.0;
  bool no_spot_check = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--m", f.m, "sphere index m (S^{2m+1}); ranges like 1..3 expand");
  app->add_option("--mu", f.mu, "Berger parameter(s) mu (nonzero)");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--tol", f.tol, "tolerance override");
  app->add_option("--out", f.out, "write the output to this file instead of stdout");
  app->add_option("--report", f.report, "also write the JSON report to this file");
}

void write_file(const std::string& path, const char* data, std::size_t size) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os.write(data, static_cast<std::streamsize>(size));
}

json build_config(const std::string& command, const Flags& f) {
  json c = json::object();
  if (command == "region") {
    if (!f.m.empty()) {
      if (f.m.size() != 1) throw UsageError("region takes a single --m");
      c["m"] = parse_int(f.m[0]);
    }
    if (!f.mu.empty()) c["mu"] = range_pair(f.mu, "--mu");
    if (!f.lambda.empty()) c["lambda"] = range_pair(f.lambda, "--lambda");
    if (f.res >= 0) c["res"] = f.res;
    if (f.s_max >= 0) c["s_max"] = f.s_max;
    if (f.no_spot_check) c["spot_check"] = false;
  } else {
    if (!f.m.empty()) c["m"] = int_list(f.m);
    if (!f.mu.empty()) c["mu"] = double_list(f.mu, "--mu");
    if (!f.s.empty()) c["s"] = int_list(f.s);
    if (!f.level.empty()) c["level"] = int_list(f.level);
    if (!f.rule.empty()) c["rule"] = f.rule;
    if (f.n >= 0) c["n"] = f.n;
  }
  if (command == "verify") {
    if (!f.identity.empty()) c["identity"] = split_commas(f.identity);
    if (f.points >= 0) c["points"] = f.points;
  }
  if (command == "hessian") {
    if (!f.lambda.empty()) c["lambda"] = double_list(f.lambda, "--lambda");
    if (!f.family.empty()) c["family"] = f.family;
    if (!f.functional.empty()) c["functional"] = split_commas(f.functional);
    if (!f.oracles.empty()) c["oracles"] = split_commas(f.oracles);
    if (!f.a.empty()) c["a"] = double_list(f.a, "--a");
    if (f.axis >= 0) c["axis"] = f.axis;
  }
  if (f.seed >= 0) c["seed"] = f.seed;
  if (f.tol > 0) c["tol"] = f.tol;
  if (!f.format.empty()) c["format"] = f.format;
  return c;
}

int execute(const std::string& command, const Flags& f) {
  json config;
  try {
    config = build_config(command, f);
  } catch (const UsageError& e) {
    std::cerr << "berger: " << e.what() << "\n";
    return kExitUsage;
  }

  berger_result* result = nullptr;
  const std::string text = config.dump();
  const berger_status status = berger_run(command.c_str(), text.c_str(), &result);
  if (status != BERGER_OK) {
    std::cerr << "berger: " << berger_status_name(status) << ": " << berger_last_error() << "\n";
    return status == BERGER_INTERNAL || status == BERGER_DOMAIN_VIOLATION ? 1 : kExitUsage;
  }

  int code = berger_result_exit_code(result);
  try {
    std::size_t size = 0;
    const char* data = berger_result_output(result, &size);
    if (f.out.empty())
      std::fwrite(data, 1, size, stdout);
    else
      write_file(f.out, data, size);
    if (!f.svg.empty()) {
      data = berger_result_svg(result, &size);
      write_file(f.svg, data, size);
    }
    if (!f.report.empty()) {
      data = berger_result_report(result, &size);
      write_file(f.report, data, size);
    }
  } catch (const std::exception& e) {
    std::cerr << "berger: " << e.what() << "\n";
    code = 1;
  }
  berger_result_destroy(result);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hessians of the energy, volume and generalized energy at Hopf fields on Berger spheres"};
  app.set_version_flag("--version", std::string("berger ") + berger_version());
  app.require_subcommand(1);

  Flags f;

  auto* verify = app.add_subcommand("verify", "run the identity suites");
  add_common(verify, f);
  verify->add_option("--s", f.s, "half degrees s of f_2s; ranges like 1..3 expand");
  verify->add_option("--level", f.level, "S^3 eigenpair levels");
  verify->add_option("--identity", f.identity, "identity suites to run (default: all)");
  verify->add_option("--points", f.points, "random points per pointwise identity");
  verify->add_option("--rule", f.rule, "quadrature rule")->check(CLI::IsMember({"exact", "hopf", "torus", "mc"}));
  verify->add_option("--n", f.n, "quadrature node count");
  verify->add_option("--format", f.format, "output format")->check(CLI::IsMember({"json", "csv"}));

  auto* hessian = app.add_subcommand("hessian", "evaluate Hessians with oracle cross-checks");
  add_common(hessian, f);
  hessian->add_option("--lambda", f.lambda, "lambda values for the generalized energy");
  hessian->add_option("--s", f.s, "half degrees s of C_2s");
  hessian->add_option("--family", f.family, "direction family")->check(CLI::IsMember({"Aa", "C2s", "s3"}));
  hessian->add_option("--level", f.level, "S^3 levels (0 = frame field E_1)");
  hessian->add_option("--axis", f.axis, "axis j of f_2s");
  hessian->add_option("--a", f.a, "vector a for A_a (2m+2 values)");
  hessian->add_option("--functional", f.functional, "functionals")
      ->check(CLI::IsMember({"energy", "volume", "egl"}));
  hessian->add_option("--oracles", f.oracles, "oracles to run: fd, general");
  hessian->add_option("--rule", f.rule, "node rule for the oracles")->check(CLI::IsMember({"exact", "hopf", "torus", "mc"}));
  hessian->add_option("--n", f.n, "quadrature node count");
  hessian->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv", "json"}));

  auto* region = app.add_subcommand("region", "classify the (mu, lambda) plane for the generalized energy");
  add_common(region, f);
  region->add_option("--lambda", f.lambda, "lambda range lo..hi");
  region->add_option("--res", f.res, "grid points per axis");
  region->add_option("--s-max", f.s_max, "largest s tried by the witness search");
  region->add_option("--svg", f.svg, "also write the SVG diagram to this file");
  region->add_flag("--no-spot-check", f.no_spot_check, "skip the finite-difference witness spot check");
  region->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv", "svg", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  for (auto* sub : {verify, hessian, region})
    if (sub->parsed()) return execute(sub->get_name(), f);
  return kExitUsage;
}
