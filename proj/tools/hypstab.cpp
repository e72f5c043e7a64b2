#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hypstab/commands.hpp"
#include "hypstab/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov boundary feedback for linear symmetric hyperbolic systems"};
  app.require_subcommand(1);
  app.footer("Config keys and their defaults:\n\n" + hypstab::serialize_config(hypstab::ScenarioConfig{}) +
             "\nExit codes: 0 ok, 1 config error, 2 infeasible, 3 simulation error, 4 oracle disagreement.\n"
             "HYPSTAB_THREADS caps the worker count.");

  hypstab::CommandOptions opts;
  std::string csv;
  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"check", "search for a Lyapunov potential and report the boundary partition"},
      {"run", "simulate the controlled system and write CSV telemetry"},
      {"oracle", "compare the potential search with a brute-force grid scan (d = 2)"},
  };
  std::string chosen;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", opts.config_path, "scenario config file")->required();
    sub->add_option("--csv", csv, "CSV output path (overrides output.csv_path)");
    sub->add_flag("--quiet", opts.quiet, "suppress the report on stdout");
    sub->callback([&chosen, name = std::string(c.name)] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hypstab::exit_config_error;
  }
  if (!csv.empty()) opts.csv_path = csv;
  return hypstab::run_command(chosen, opts, std::cout, std::cerr);
}
