#include "berger/runners.hpp"

#include "berger/functionals.hpp"
#include "berger/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace berger {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

json as_list(const json& v) { return v.is_array() ? v : json::array({v}); }

std::vector<double> doubles(const json& cfg, const char* key) {
  std::vector<double> out;
  for (const auto& v : as_list(cfg.at(key))) {
    if (!v.is_number()) bad(std::string("'") + key + "' must hold numbers");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(std::string("'") + key + "' must be finite");
    out.push_back(d);
  }
  return out;
}

std::vector<int> ints(const json& cfg, const char* key) {
  std::vector<int> out;
  for (const auto& v : as_list(cfg.at(key))) {
    if (!v.is_number_integer()) bad(std::string("'") + key + "' must hold integers");
    out.push_back(v.get<int>());
  }
  return out;
}

std::vector<std::string> strings(const json& cfg, const char* key) {
  std::vector<std::string> out;
  for (const auto& v : as_list(cfg.at(key))) {
    if (!v.is_string()) bad(std::string("'") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

json defaults_for(const std::string& command) {
  if (command == "verify")
    return {{"m", json::array({1})},          {"mu", json::array({1.0, -1.0, 2.0})}, {"s", json::array({1, 2, 3})}, {"identity", json(identity_names())},
            {"points", 200},     {"seed", 1},              {"tol", nullptr}, {"format", "json"},
            {"level", json::array({1, 2})},   {"rule", "exact"},        {"n", 0}};
  if (command == "hessian")
    return {{"m", json::array({1})},
            {"mu", json::array({-1.0})},
            {"lambda", json::array()},
            {"s", json::array({1})},
            {"family", "C2s"},
            {"level", json::array({1, 2})},
            {"axis", 1},
            {"a", nullptr},
            {"functional", json::array({"energy"})},
            {"rule", "exact"},
            {"n", 0},
            {"seed", 1},
            {"tol", 1e-3},
            {"first_tol", 1e-6},
            {"oracles", json::array({"fd", "general"})},
            {"format", "csv"}};
  if (command == "region")
    return {{"m", 1},          {"mu", json::array({0.05, 6.0})}, {"lambda", json::array({0.05, 3.0})}, {"res", 300},
            {"s_max", 64},     {"seed", 1},         {"format", "csv"},       {"spot_check", true}};
  bad("unknown command '" + command + "'");
}

std::string header_lines(const json& header) {
  return "# berger " + header.at("version").get<std::string>() + " " + header.at("command").get<std::string>() +
         "\n# config " + header.at("config").dump() + "\n";
}

json make_header(const std::string& command, const json& resolved) {
  return {{"schema", kReportSchema}, {"tool", "berger"}, {"version", library_version()}, {"command", command},
          {"config", resolved}};
}

std::vector<double> aa_default(int n) {
  static const double pattern[4] = {1.0, 0.5, 0.0, -0.25};
  std::vector<double> a(n);
  for (int i = 0; i < n; ++i) a[i] = pattern[i % 4];
  return a;
}

std::vector<TangentField> directions(const json& cfg, int m) {
  const BergerContext ctx(m, 1.0);
  const std::string family = cfg.at("family");
  std::vector<TangentField> out;
  if (family == "Aa") {
    std::vector<double> a = cfg.at("a").is_null() ? aa_default(ctx.dim()) : doubles(cfg, "a");
    if (static_cast<int>(a.size()) != ctx.dim()) bad("'a' must have 2m+2 components");
    out.push_back(field_Aa(Eigen::Map<const Vec>(a.data(), a.size()), ctx));
  } else if (family == "C2s") {
    for (int s : ints(cfg, "s")) out.push_back(field_C2s(s, cfg.at("axis").get<int>(), ctx));
  } else if (family == "s3") {
    if (m != 1) bad("the s3 family needs m = 1");
    for (int level : ints(cfg, "level"))
      out.push_back(level == 0 ? field_s3_frame(ctx) : field_s3(s3_eigenpair(level), ctx));
  }
  return out;
}

QuadratureRule oracle_rule(const json& cfg, const TangentField& a) {
  if (cfg.at("rule") == "exact") return fd_rule_for(a);
  json j{{"rule", cfg.at("rule")}, {"seed", cfg.at("seed")}};
  if (cfg.at("n").get<int>() > 0) j["n"] = cfg.at("n");
  return rule_from_json(j, a.m(), 2 * a.degree() + 2);
}

}  // namespace

const char* library_version() { return BERGER_VERSION; }

json IdentityCheck::to_json() const {
  json j{{"name", name}, {"statement", statement}, {"params", params}, {"residual", residual},
         {"tolerance", tolerance}, {"pass", pass}};
  if (!note.empty()) j["note"] = note;
  return j;
}

json resolve_config(const std::string& command, const json& config) {
  json out = defaults_for(command);
  if (!config.is_null() && !config.is_object()) bad("configuration must be a JSON object");
  if (config.is_object())
    for (const auto& [key, value] : config.items()) {
      if (!out.contains(key)) bad("unknown configuration key '" + key + "' for " + command);
      if (!value.is_null()) out[key] = value;
    }

  auto check_format = [&](std::initializer_list<const char*> allowed) {
    const std::string f = out.at("format").is_string() ? out.at("format").get<std::string>() : "";
    for (const char* a : allowed)
      if (f == a) return;
    bad("unsupported format '" + f + "' for " + command);
  };

  if (command == "region") {
    if (!out.at("m").is_number_integer() || out.at("m").get<int>() < 1) bad("'m' must be a positive integer");
    const auto mu = doubles(out, "mu"), lambda = doubles(out, "lambda");
    if (mu.size() != 2 || !(mu[1] > mu[0])) bad("'mu' must be a range lo..hi with lo < hi");
    if (lambda.size() != 2 || !(lambda[1] > lambda[0])) bad("'lambda' must be a range lo..hi with lo < hi");
    if (!out.at("res").is_number_integer() || out.at("res").get<int>() < 2 || out.at("res").get<int>() > 4000)
      bad("'res' must be an integer in [2, 4000]");
    if (!out.at("s_max").is_number_integer() || out.at("s_max").get<int>() < 1) bad("'s_max' must be positive");
    out["mu"] = mu;
    out["lambda"] = lambda;
    check_format({"csv", "svg", "json"});
    return out;
  }

  for (int m : ints(out, "m"))
    if (m < 1 || m > 6) bad("'m' must lie in 1..6");
  out["m"] = ints(out, "m");
  const auto mu = doubles(out, "mu");
  if (mu.empty()) bad("'mu' needs at least one value");
  for (double v : mu)
    if (v == 0.0) bad("'mu' must be nonzero");
  out["mu"] = mu;
  for (int s : ints(out, "s"))
    if (s < 1 || s > 12) bad("'s' must lie in 1..12");
  out["s"] = ints(out, "s");
  for (int l : ints(out, "level"))
    if (l < 0 || l > 2) bad("'level' must be 0, 1 or 2");
  out["level"] = ints(out, "level");
  const std::string rule = out.at("rule").is_string() ? out.at("rule").get<std::string>() : "";
  if (rule != "exact" && rule != "hopf" && rule != "torus" && rule != "mc") bad("'rule' must be exact, hopf, torus or mc");
  if (!out.at("n").is_number_integer() || out.at("n").get<int>() < 0) bad("'n' must be a non-negative integer");
  if (!out.at("seed").is_number_integer()) bad("'seed' must be an integer");
  if (!out.at("tol").is_null() && (!out.at("tol").is_number() || !(out.at("tol").get<double>() > 0)))
    bad("'tol' must be positive");

  if (command == "verify") {
    const auto& known = identity_names();
    for (const auto& name : strings(out, "identity"))
      if (std::find(known.begin(), known.end(), name) == known.end()) bad("unknown identity '" + name + "'");
    out["identity"] = strings(out, "identity");
    if (!out.at("points").is_number_integer() || out.at("points").get<int>() < 1) bad("'points' must be positive");
    check_format({"json", "csv"});
    return out;
  }

  const std::string family = out.at("family").is_string() ? out.at("family").get<std::string>() : "";
  if (family != "Aa" && family != "C2s" && family != "s3") bad("'family' must be Aa, C2s or s3");
  const auto lambda = doubles(out, "lambda");
  for (double v : lambda)
    if (v == 0.0) bad("'lambda' must be nonzero");
  out["lambda"] = lambda;
  for (const auto& f : strings(out, "functional")) {
    if (f != "energy" && f != "volume" && f != "egl") bad("unknown functional '" + f + "'");
    if (f == "egl" && lambda.empty()) bad("the egl functional needs --lambda values");
  }
  out["functional"] = strings(out, "functional");
  for (const auto& o : strings(out, "oracles"))
    if (o != "fd" && o != "general") bad("'oracles' accepts fd and general");
  out["oracles"] = strings(out, "oracles");
  if (family == "s3")
    for (int m : ints(out, "m"))
      if (m != 1) bad("the s3 family needs m = 1");
  check_format({"csv", "json"});
  return out;
}

RunResult run_hessian(const json& config) {
  const json cfg = resolve_config("hessian", config);
  const json header = make_header("hessian", cfg);
  const double tol = cfg.at("tol").get<double>();
  const double first_tol = cfg.at("first_tol").get<double>();
  const auto oracles = strings(cfg, "oracles");
  HessianOptions options;
  options.finite_differences = std::count(oracles.begin(), oracles.end(), "fd") > 0;
  options.general_forms = std::count(oracles.begin(), oracles.end(), "general") > 0;

  std::vector<FunctionalId> ids;
  for (const auto& f : strings(cfg, "functional")) {
    if (f == "egl")
      for (double l : doubles(cfg, "lambda")) ids.push_back(FunctionalId::generalized(l));
    else
      ids.push_back(functional_from_name(f, std::nullopt));
  }

  json rows = json::array();
  std::string csv = header_lines(header) + HessianReport::csv_header() + "\n";
  std::size_t failed = 0, errors = 0;
  for (int m : ints(cfg, "m")) {
    for (const auto& a : directions(cfg, m)) {
      const ExactFieldMoments mom = field_moments_exact(a);
      std::optional<FieldSamples> samples;
      if (options.finite_differences || options.general_forms) samples.emplace(a, oracle_rule(cfg, a));
      for (double mu : doubles(cfg, "mu")) {
        const BergerContext ctx(m, mu);
        for (const auto& id : ids) {
          const HessianReport r = hessian_report(a, mom, samples ? &*samples : nullptr, id, ctx, options);
          json row = r.to_json();
          bool ok = true;
          if (r.verdict == "error") {
            ++errors;
          } else {
            ok = r.verdict != "inconsistent" && r.rel_err <= tol &&
                 (!r.fd_first || std::abs(*r.fd_first) <= first_tol);
          }
          row["pass"] = ok;
          if (!ok) ++failed;
          rows.push_back(row);
          csv += r.csv_row() + "\n";
        }
      }
    }
  }

  RunResult out;
  out.report = {{"header", header},
                {"rows", rows},
                {"summary", {{"rows", rows.size()}, {"failed", failed}, {"errors", errors}}}};
  out.exit_code = failed ? 1 : 0;
  out.output = cfg.at("format") == "json" ? out.report.dump(2) + "\n" : csv;
  return out;
}

RunResult run_region(const json& config) {
  const json cfg = resolve_config("region", config);
  const json header = make_header("region", cfg);
  const int m = cfg.at("m");
  const auto mu = doubles(cfg, "mu"), lambda = doubles(cfg, "lambda");
  PhaseGrid grid = figure1_grid(m, mu[0], mu[1], lambda[0], lambda[1], cfg.at("res").get<int>());

  std::size_t unvalidated = 0;
  const StabilityClassification* spot = nullptr;
  std::size_t spot_index = 0;
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    const auto& c = grid.cells[i];
    if (c.region != Region::Unstable) continue;
    if (!c.witness || !c.witness->revalidated) ++unvalidated;
    else if (!spot || c.witness->s < spot->witness->s) {
      spot = &c;
      spot_index = i;
    }
  }

  json spot_json = nullptr;
  bool spot_ok = true;
  if (spot && cfg.at("spot_check").get<bool>()) {
    const std::size_t nl = grid.lambda.size();
    const double smu = grid.mu[spot_index / nl], slam = grid.lambda[spot_index % nl];
    const BergerContext ctx(m, smu);
    const Witness& w = *spot->witness;
    const TangentField a = w.family == "C2s" ? field_C2s(w.s, 1, ctx)
                           : w.s == 0        ? field_s3_frame(ctx)
                                             : field_s3(s3_eigenpair(w.s), ctx);
    const FunctionalId id = FunctionalId::generalized(slam);
    const double exact = revalidate_witness(w, m, smu, id);
    const auto sv = second_variation_fd(a, id, ctx, fd_rule_for(a));
    spot_ok = exact < 0.0 && sv.second < 0.0;
    spot_json = {{"mu", smu},        {"lambda", slam}, {"family", w.family}, {"s", w.s},
                 {"exact", exact},   {"fd", sv.second}, {"pass", spot_ok}};
  }

  const auto [imu, ilam] = boundary_intersection();
  json curves = json::array();
  for (const auto& b : grid.boundaries) curves.push_back({{"name", b.name}, {"points", b.points.size()}});

  RunResult out;
  out.report = {{"header", header},
                {"cells", grid.cells.size()},
                {"stable", grid.stable},
                {"unstable", grid.unstable},
                {"unknown", grid.unknown},
                {"doubly_classified", grid.doubly},
                {"unvalidated_witnesses", unvalidated},
                {"boundary_intersection", {imu, ilam}},
                {"boundaries", curves},
                {"spot_check", spot_json}};
  out.exit_code = (grid.doubly == 0 && unvalidated == 0 && spot_ok) ? 0 : 1;
  out.svg = "<!-- berger " + std::string(library_version()) + " region config " + cfg.dump() + " -->\n" +
            grid_svg(grid);
  const std::string format = cfg.at("format");
  if (format == "csv")
    out.output = header_lines(header) + grid_csv(grid);
  else if (format == "svg")
    out.output = out.svg;
  else
    out.output = out.report.dump(2) + "\n";
  return out;
}

RunResult run_command(const std::string& command, const json& config) {
  if (command == "verify") return run_verify(config);
  if (command == "hessian") return run_hessian(config);
  if (command == "region") return run_region(config);
  bad("unknown command '" + command + "'");
}

}  // namespace berger
