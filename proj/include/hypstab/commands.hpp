#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "hypstab/config.hpp"
#include "hypstab/potential.hpp"

namespace hypstab {

enum ExitCode : int {
  exit_ok = 0,
  exit_config_error = 1,
  exit_infeasible = 2,
  exit_simulation_error = 3,
  exit_oracle_disagreement = 4,
};

// Source bound and potential search as selected by lmi.mode.
struct PotentialReport {
  double C_B = 0.0;
  PotentialSearch search;
};
PotentialReport resolve_potential(const ScenarioConfig& config, const HyperbolicSystem& system);

// Each command writes its report to out and returns the exit code. Config
// problems raise ConfigError; run_command maps every outcome to a code.
int cmd_check(const ScenarioConfig& config, std::ostream& out);
int cmd_run(const ScenarioConfig& config, std::ostream& out);
int cmd_oracle(const ScenarioConfig& config, std::ostream& out);

struct CommandOptions {
  std::string config_path;
  std::optional<std::string> csv_path;
  bool quiet = false;
};

// Loads the config, applies overrides and dispatches on "check", "run" or
// "oracle". Diagnostics go to err.
int run_command(const std::string& name, const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace hypstab
