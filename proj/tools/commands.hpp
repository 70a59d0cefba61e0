#pragma once

#include "config.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rotobs::app {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumeric = 3, kExitCertificate = 4 };

/// Command-line overrides applied on top of the configuration file.
struct CommandOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> observer;
  bool no_noise = false;
};

/// Loads the configuration (defaults when no path is given) and applies the
/// overrides. Throws ConfigError.
RunConfig resolve_config(const CommandOptions& opt);

/// Each command writes its files under cfg.out_dir and returns an exit code.
/// Exceptions propagate; run_command maps them to exit codes.
int cmd_simulate(const RunConfig& cfg, bool no_noise, std::ostream& log);
int cmd_montecarlo(const RunConfig& cfg, bool no_noise, std::ostream& log);
int cmd_linearize(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);

/// Dispatches by name ("simulate", "montecarlo", "linearize", "verify") and
/// maps errors: configuration → 2, numerical failures → 3, certificate → 4.
int run_command(const std::string& name, const CommandOptions& opt, std::ostream& out,
                std::ostream& err);

}  // namespace rotobs::app
