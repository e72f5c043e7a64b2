#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hypstab/potential.hpp"
#include "hypstab/sim.hpp"
#include "hypstab/sysdef.hpp"

namespace hypstab {

using RowMatrix = std::vector<std::vector<double>>;

enum class SystemKind { euler, explicit_matrices, random };
enum class LmiMode { plain, with_remainder };

struct EulerConfig {
  double rho_bar = 1.0;
  std::array<double, 2> v_bar{3.0, 0.0};
  double a_bar = 1.0;
  bool operator==(const EulerConfig&) const = default;
};

struct ExplicitConfig {
  std::size_t d = 0;
  std::size_t n = 0;
  std::vector<RowMatrix> jacobians;
  // empty means B = 0
  RowMatrix source;
  bool operator==(const ExplicitConfig&) const = default;
};

struct RandomConfig {
  std::uint64_t seed = 0;
  std::size_t d = 2;
  std::size_t n = 3;
  bool operator==(const RandomConfig&) const = default;
};

struct GridConfig {
  std::size_t N1 = 64;
  std::size_t N2 = 64;
  double L1 = 1.0;
  double L2 = 1.0;
  bool operator==(const GridConfig&) const = default;
};

struct TimeConfig {
  double t_end = 1.0;
  double cfl = 0.45;
  bool operator==(const TimeConfig&) const = default;
};

struct ControlConfig {
  ControlMode mode = ControlMode::scalar;
  double C = 0.0;
  // constant physical boundary state for the prescribed mode
  std::vector<double> prescribed;
  bool operator==(const ControlConfig&) const = default;
};

struct LmiConfig {
  LmiMode mode = LmiMode::plain;
  std::optional<double> C_A_override;
  bool operator==(const LmiConfig&) const = default;
};

struct OutputConfig {
  std::string csv_path;
  std::vector<double> snapshot_times;
  bool operator==(const OutputConfig&) const = default;
};

struct ScenarioConfig {
  SystemKind kind = SystemKind::euler;
  EulerConfig euler;
  ExplicitConfig explicit_system;
  RandomConfig random;
  GridConfig grid;
  TimeConfig time;
  ControlConfig control;
  LmiConfig lmi;
  OutputConfig output;
  double init_amplitude = 0.1;

  bool operator==(const ScenarioConfig&) const = default;

  // Throws ConfigError on the first violated invariant.
  void validate() const;
};

// Flat "key = value" text: dotted keys, '#' comments, numbers, bare strings,
// bracketed lists [a, b] and matrices [[a, b], [c, d]]. Unknown or repeated
// keys are errors. The result is validated.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
// Every field, 17 significant digits; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

HyperbolicSystem build_system(const ScenarioConfig& config);
// The simulation grid in the system's dimension (1 or 2).
Grid build_grid(const ScenarioConfig& config, std::size_t d);
ControlSpec build_control(const ScenarioConfig& config);

std::string to_string(SystemKind kind);
std::string to_string(ControlMode mode);
std::string to_string(LmiMode mode);

}  // namespace hypstab
