#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvlsw/model_config.hpp"

namespace mvlsw {

/// Everything a subcommand needs; also what the manifest records so a run
/// can be repeated with `replay`.
struct RunContext {
  std::string command;
  AnalysisConfig analysis;
  std::optional<nlohmann::json> model;
  std::string input;
  std::vector<std::string> group_a;
  std::vector<std::string> group_b;
  std::string kind = "windowed";  // windowed | partial | spectral
  std::vector<std::string> controls;  // "j:p" or "j:p@lag"
  bool with_null = false;
  std::size_t length = 1000;  // null-threshold only
  int channels = 1;            // null-threshold only
  int log_return = 0;          // 0 = raw input
  std::string out = ".";
  std::vector<std::string> argv;
};

nlohmann::json context_to_json(const RunContext& ctx);
RunContext context_from_json(const nlohmann::json& j);

/// Runs one subcommand; returns the process exit code. Diagnostics go to
/// `err` as a single line.
int run_context(const RunContext& ctx, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mvlsw
