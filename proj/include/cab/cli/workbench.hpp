#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cab/io/json.hpp"

namespace cab::cli {

enum class Format { Json, Text };

/// Exit status contract.
enum ExitCode : int { kOk = 0, kFailed = 1, kInputError = 2 };

struct WorkbenchConfig {
  std::vector<std::string> inputs;
  /// Unset runs every suite; an empty list runs none.
  std::optional<std::vector<std::string>> suites;
  std::string preset;
  std::uint64_t seed = 1;
  int mode_radius = 2;
  int instances = 100;
  std::optional<Window> window;
  std::string out_dir;
  Format format = Format::Json;
};

struct CommandResult {
  int exit_code = kOk;
  io::Json report;
};

/// Each command throws ParseError or DomainError for unusable input; every
/// other outcome is a report. Reports never contain timings or paths beyond
/// the given inputs, so equal configs give byte-identical output.
CommandResult cmd_verify(const WorkbenchConfig& cfg);
CommandResult cmd_hierarchy(const WorkbenchConfig& cfg);
CommandResult cmd_flow(const WorkbenchConfig& cfg);

std::string render(const io::Json& report, Format f);

/// "radius:lo:hi".
Window parse_window(std::string_view text);
/// Comma-separated suite names; "" and "none" give the empty selection.
std::vector<std::string> parse_suites(std::string_view text);

const std::vector<std::string>& suite_names();
const std::vector<std::string>& verify_presets();
const std::vector<std::string>& hierarchy_presets();
const std::vector<std::string>& flow_presets();

}  // namespace cab::cli
