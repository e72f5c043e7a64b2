#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hypstab/symlin.hpp"
#include "hypstab/sysdef.hpp"

namespace hypstab {

// Affine Lyapunov potential mu(x) = m . x together with the decay constants
// of the weighted L2 functional. C_L = C_A - C_B.
struct LyapunovPotential {
  Vector m;
  double C_A = 1.0;
  double C_B = 0.0;
  double C_L = 1.0;
  // True when m was certified against C_A Id + R + sum m_k A^(k) <= 0, i.e.
  // the remainder term is already inside the LMI and C_B is not subtracted.
  bool includes_remainder = false;

  // Validates C_A > 0, C_B >= 0, C_A > C_B.
  static LyapunovPotential make(Vector m, double C_A, double C_B = 0.0, bool includes_remainder = false);
  // Zero potential (mu = 0); used for unweighted runs. C_A = C_B = C_L = 0.
  static LyapunovPotential zero(std::size_t d);

  // m_bar = -m / C_A, the coefficients of -Id + sum m_bar_k A^(k) >= 0.
  Vector normalized_coefficients() const;
};

double potential_value(const LyapunovPotential& pot, std::span<const double> x);

// Space-dependent coefficients, used only for pointwise LMI sampling.
struct VariableSystem {
  std::size_t d = 0;
  std::size_t n = 0;
  std::function<SymMatrix(std::size_t k, std::span<const double> x)> jacobian;
  std::function<Matrix(std::span<const double> x)> source;

  static VariableSystem from_constant(const HyperbolicSystem& system);
};

// R(x) = sum_k d/dx_k A^(k)(x) - 2 B_sym(x); derivatives by central
// differences with step 1e-5 * (1 + |x_k|).
SymMatrix lmi_remainder(const VariableSystem& system, std::span<const double> x);

// max eig(C Id + sum m_k A^(k)) <= 1e-10 (1 + C).
bool lmi_check(const HyperbolicSystem& system, std::span<const double> m, double C);

// Same with R(x) added, required at every sample point.
bool lmi_check_with_remainder(const HyperbolicSystem& system, std::span<const double> m, double C,
                              std::span<const Vector> sample_points);
bool lmi_check_with_remainder(const VariableSystem& system, std::span<const double> m, double C,
                              std::span<const Vector> sample_points);

// C_B = max(0, max over samples of max eig R(x)).
double estimate_source_bound(const HyperbolicSystem& system, std::span<const Vector> sample_points);
double estimate_source_bound(const VariableSystem& system, std::span<const Vector> sample_points);

// phi(m_hat) = max eig(sum m_hat_k A^(k)) for a unit direction.
double direction_objective(const HyperbolicSystem& system, std::span<const double> direction);

// Outcome of the potential search. When infeasible, best_direction and
// best_value certify the least value the search reached.
struct PotentialSearch {
  std::optional<LyapunovPotential> potential;
  Vector best_direction;
  // plain mode: min phi over directions; remainder mode: min over m of
  // max eig(R + sum m_k A^(k)) + C_A (negative means feasible).
  double best_value = 0.0;

  bool feasible() const { return potential.has_value(); }
};

// Direction scan for min phi (720 angles in 2-D, 2000 Fibonacci points in 3-D,
// both sides in 1-D) with local refinement. Feasible iff phi* < 0; then
// C_A = C_A_override or (C_B > 0 ? 2 C_B + 1 : 1) and |m| = C_A / (-phi*) * 1.001.
PotentialSearch find_potential(const HyperbolicSystem& system, double C_B,
                               std::optional<double> C_A_override = std::nullopt);

// Search for m with C Id + R + sum m_k A^(k) <= 0, R = -2 B_sym (constant
// coefficients). C = C_A_override or 1. The returned potential has
// C_B = 0 and includes_remainder = true.
PotentialSearch find_potential_with_remainder(const HyperbolicSystem& system,
                                              std::optional<double> C_A_override = std::nullopt);

struct GridScanResult {
  bool feasible = false;
  Vector witness;
  std::size_t points_checked = 0;
};

// Brute force over m in [-range, range]^2 with spacing step, checking
// lmi_check(system, m, C) at every grid node. d = 2 only.
GridScanResult grid_scan_lmi(const HyperbolicSystem& system, double C = 1.0, double range = 10.0,
                             double step = 0.05);

struct OracleComparison {
  GridScanResult grid;
  PotentialSearch search;
  // the found potential passes lmi_check at its own C_A
  bool solver_certified = false;

  // grid feasible implies solver feasible, and solver feasible implies certified
  bool agree() const {
    return (!grid.feasible || search.feasible()) && (!search.feasible() || solver_certified);
  }
};

OracleComparison compare_with_grid_oracle(const HyperbolicSystem& system, double C = 1.0, double range = 10.0,
                                          double step = 0.05);

}  // namespace hypstab
