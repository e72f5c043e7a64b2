#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hypstab/boundary.hpp"
#include "hypstab/potential.hpp"
#include "hypstab/symlin.hpp"
#include "hypstab/sysdef.hpp"

namespace hypstab {

// Uniform cell-centred grid on [0, L_1] x ... (d = 1 or 2), at least 4
// cells per axis. Cells are stored with the first axis fastest.
class Grid {
 public:
  Grid(std::vector<std::size_t> cells, std::vector<double> lengths);

  std::size_t dimension() const { return cells_.size(); }
  const std::vector<std::size_t>& cells() const { return cells_; }
  const std::vector<double>& lengths() const { return lengths_; }
  double spacing(std::size_t k) const { return lengths_[k] / static_cast<double>(cells_[k]); }
  double min_spacing() const;
  double cell_volume() const;
  std::size_t cell_count() const;
  std::vector<std::size_t> cell_index(std::size_t linear) const;
  std::size_t stride(std::size_t axis) const;
  Vector cell_center(std::size_t linear) const;
  std::vector<BoundaryFace> boundary_faces() const { return box_faces(cells_, lengths_); }

 private:
  std::vector<std::size_t> cells_;
  std::vector<double> lengths_;
};

// Cell values w (n per cell, contiguous) and the boundary data (one
// n-vector per boundary face, in Grid::boundary_faces order).
struct SimState {
  double t = 0.0;
  std::vector<double> w;
  FaceField ghost;
};

enum class ControlMode { zero, scalar, componentwise, prescribed };

struct ControlSpec {
  ControlMode mode = ControlMode::zero;
  // gain for the scalar feedback law, in [-1, 1]
  double C = 0.0;
  // physical boundary state w_BC(t, x) for the prescribed mode; only its
  // incoming characteristic components are imposed
  std::function<Vector(double t, std::span<const double> x)> prescribed;
};

struct SimOptions {
  double cfl = 0.45;
  // wrap-around neighbours instead of controlled boundaries (testing aid)
  bool periodic = false;
  std::vector<double> snapshot_times;
};

struct StepTelemetry {
  double boundary_integral = 0.0;
  double boundary_magnitude = 0.0;
  // per index: the incoming control value of largest magnitude (0 when the
  // index has no inflow face)
  Vector controls;
};

struct RunRecord {
  std::vector<double> t;
  std::vector<double> L;
  std::vector<double> boundary_integral;
  std::vector<double> boundary_magnitude;
  std::vector<Vector> controls;
  SimState final_state;
  std::vector<SimState> snapshots;
  std::size_t steps = 0;
  double dt = 0.0;
  std::optional<double> c_fit;
  double C_L = 0.0;
};

// Midpoint rule for the integral of w^T w e^mu over the grid, summed in a
// fixed pairwise tree.
double lyapunov_value(const Grid& grid, const SimState& state, const LyapunovPotential& pot);

// w_i(0, x) = amplitude * prod_k sin^2(pi x_k / L_k) for every component.
std::vector<double> initial_bump(const Grid& grid, std::size_t n, double amplitude = 0.1);

// First-order characteristic upwinding with forward Euler. For each axis,
// A^(k) = T diag(lambda) T^T is split into positive and negative parts and
// applied to one-sided differences; boundary neighbours are the ghost values.
class Simulator {
 public:
  Simulator(HyperbolicSystem system, Grid grid, LyapunovPotential pot, ControlSpec control, SimOptions options = {});

  const HyperbolicSystem& system() const { return system_; }
  const Grid& grid() const { return grid_; }
  const BoundaryPartition& partition() const { return partition_; }
  const LyapunovPotential& potential() const { return pot_; }
  const SimOptions& options() const { return options_; }

  // cfl * min dx / max_k rho(A^(k)); infinite when every Jacobian vanishes.
  double max_stable_dt() const;
  // The CFL bound tightened so that dt * |B|_inf <= cfl as well.
  double default_dt() const;

  SimState initial_state(std::vector<double> w0) const;
  // Fill state.ghost from the control law evaluated on the current traces.
  StepTelemetry apply_boundary(SimState& state) const;
  // One explicit update using state.ghost. Throws CflViolation or NonFinite.
  SimState advance(const SimState& state, double dt) const;
  SimState step(const SimState& state, double dt) const;

  RunRecord run(std::vector<double> w0, double t_end) const;

 private:
  std::size_t face_at(std::size_t cell, std::size_t axis, int side) const;

  HyperbolicSystem system_;
  Grid grid_;
  LyapunovPotential pot_;
  ControlSpec control_;
  SimOptions options_;
  BoundaryPartition partition_;
  std::vector<Matrix> positive_part_;
  std::vector<Matrix> negative_part_;
  double rho_max_ = 0.0;
  // cell * 2d + 2 * axis + (side > 0) -> face index or npos
  std::vector<std::size_t> face_lookup_;
};

SimState step(const HyperbolicSystem& system, const Grid& grid, const SimState& state, const LyapunovPotential& pot,
              const ControlSpec& control, double dt, double cfl = 0.45);

RunRecord run(const HyperbolicSystem& system, const Grid& grid, std::vector<double> w0, const LyapunovPotential& pot,
              const ControlSpec& control, double t_end, double cfl = 0.45);

// Negated least-squares slope of log L against t, skipping the first 10% of
// samples. Needs at least 10 samples, all with L > 0.
double fit_decay_rate(std::span<const double> t, std::span<const double> L);
double fit_decay_rate(std::span<const std::pair<double, double>> series);

// CSV with header t,L,boundary_integral,control_1..control_n and 17
// significant digits.
void write_csv(std::ostream& out, const RunRecord& record);
// Plain-text dump: one line per cell with the centre coordinates followed by
// the n state components.
void write_snapshot(std::ostream& out, const Grid& grid, const SimState& state, std::size_t n);

}  // namespace hypstab
