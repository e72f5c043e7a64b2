"""Lyapunov boundary feedback for linear symmetric hyperbolic systems."""

from ._core import (
    ConfigError,
    ControlMode,
    ControlSpec,
    Grid,
    HyperbolicSystem,
    LyapunovPotential,
    PotentialSearch,
    RunRecord,
    compare_with_grid_oracle,
    eigendecompose,
    euler_eigenstructure,
    euler_system,
    find_potential,
    find_potential_with_remainder,
    fit_decay_rate,
    grid_scan_lmi,
    initial_bump,
    lmi_check,
    parse_config,
    partition_counts,
    random_system,
    run,
    run_command,
    serialize_config,
)

__all__ = [
    "ConfigError",
    "ControlMode",
    "ControlSpec",
    "Grid",
    "HyperbolicSystem",
    "LyapunovPotential",
    "PotentialSearch",
    "RunRecord",
    "compare_with_grid_oracle",
    "eigendecompose",
    "euler_eigenstructure",
    "euler_system",
    "find_potential",
    "find_potential_with_remainder",
    "fit_decay_rate",
    "grid_scan_lmi",
    "initial_bump",
    "lmi_check",
    "parse_config",
    "partition_counts",
    "random_system",
    "run",
    "run_command",
    "serialize_config",
]
