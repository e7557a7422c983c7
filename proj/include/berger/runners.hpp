#pragma once

// Command runners behind the C API and the command-line tool. Each runner
// takes a JSON configuration, validates it, and returns the formatted output
// together with a structured report and the exit code.

#include <json.hpp>

#include <string>
#include <vector>

namespace berger {

inline constexpr const char* kReportSchema = "berger-report/1";

const char* library_version();

struct RunResult {
  int exit_code = 0;  // 0 pass, 1 identity failure
  std::string output;
  std::string svg;  // region only
  nlohmann::json report;
};

/// Resolved configuration with every default filled in. Throws
/// Error(InvalidArgument) for unknown keys or malformed values.
nlohmann::json resolve_config(const std::string& command, const nlohmann::json& config);

RunResult run_verify(const nlohmann::json& config);
RunResult run_hessian(const nlohmann::json& config);
RunResult run_region(const nlohmann::json& config);
RunResult run_command(const std::string& command, const nlohmann::json& config);

struct IdentityCheck {
  std::string name;
  std::string statement;
  nlohmann::json params;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;

  nlohmann::json to_json() const;
};

/// Names accepted by the verify runner's "identity" key.
const std::vector<std::string>& identity_names();

/// Runs one identity suite over the configured grid.
std::vector<IdentityCheck> run_identity(const std::string& name, const nlohmann::json& resolved);

}  // namespace berger
