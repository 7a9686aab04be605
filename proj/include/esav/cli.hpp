#pragma once

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "esav/config.hpp"

namespace esav {

/// Exit status for a successful command whose invariant monitors all passed.
inline constexpr int kExitOk = 0;
/// Command-line usage error.
inline constexpr int kExitUsage = 2;
/// Unexpected failure outside the library's error categories.
inline constexpr int kExitInternal = 3;

struct Command {
  std::string verb;  // run | convergence | compare | energy-ladder | list-examples
  std::optional<std::string> config_path;
  std::vector<Override> overrides;  // flags first, then positional key=value pairs
};

/// Parses argv. Throws ConfigError on a malformed override; CLI11 usage errors are reported
/// through the returned optional being empty after printing help or the error to `err`.
std::optional<Command> parse_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                     int& usage_status);

/// Effective configuration of a command (file, presets, overrides).
RunConfig command_config(const Command& cmd);

/// Runs the command; the result is 0 iff every run finished and every invariant monitor passed.
int dispatch(const Command& cmd, std::ostream& out, std::ostream& err);

/// Exit status for an exception escaping dispatch.
int exit_status(const std::exception& e);

/// parse_command + dispatch with every error mapped to its exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace esav
