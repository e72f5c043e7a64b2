#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hypstab/potential.hpp"
#include "hypstab/symlin.hpp"
#include "hypstab/sysdef.hpp"

namespace hypstab {

// Axis-aligned boundary face of a grid cell. The outward normal is
// side * e_axis with side = -1 (low end of the axis) or +1 (high end).
struct BoundaryFace {
  std::vector<std::size_t> cell;
  std::size_t axis = 0;
  int side = -1;
  Vector center;
  double area = 1.0;

  Vector normal() const;
  std::size_t normal_key() const { return 2 * axis + (side > 0 ? 1 : 0); }
};

// Boundary faces of the box [0, L_1] x ... with the given cells per axis,
// ordered by linear cell index (first axis fastest) and then by side
// (axis 0 low, axis 0 high, axis 1 low, ...). In 1-D faces are points of
// unit measure.
std::vector<BoundaryFace> box_faces(std::span<const std::size_t> cells, std::span<const double> lengths);

// Per-face values, one n-vector per face in partition order.
using FaceField = std::vector<Vector>;

// Inflow/outflow split of the boundary per characteristic index. Index i
// refers to the i-th eigenvalue of the normal pencil in ascending order.
struct BoundaryPartition {
  std::size_t n = 0;
  std::vector<BoundaryFace> faces;
  // eigen data per normal key (2 * axis + high); unused keys stay empty
  std::vector<EigenDecomposition> normal_eigen;
  std::vector<std::vector<std::size_t>> gamma_minus;
  std::vector<std::vector<std::size_t>> gamma_plus;

  const EigenDecomposition& eigen(std::size_t face) const { return normal_eigen[faces[face].normal_key()]; }
  double speed(std::size_t face, std::size_t i) const { return eigen(face).eigenvalues[i]; }
  // lambda_i < 0 on this face
  bool incoming(std::size_t face, std::size_t i) const { return speed(face, i) < 0.0; }
  bool has_inflow() const;
};

BoundaryPartition partition_boundary(const HyperbolicSystem& system, std::vector<BoundaryFace> faces);

// q = T^T w on every face.
FaceField characteristic_trace(const BoundaryPartition& partition, const FaceField& w);

// Physical boundary state T q~, where q~ takes controls[f][i] on incoming
// slots and q_trace[f][i] on outgoing ones.
FaceField assemble_boundary_state(const BoundaryPartition& partition, const FaceField& q_trace,
                                  const FaceField& controls);

// Broadcast per-index uniform controls to every face.
FaceField uniform_control_field(const BoundaryPartition& partition, std::span<const double> controls);

struct BoundaryIntegral {
  double value = 0.0;
  // sum of |area e^mu lambda_i q_i^2|, the scale for sign tolerances
  double magnitude = 0.0;
};

// Midpoint rule for the integral of w^T A*(n) w e^mu over the boundary.
BoundaryIntegral boundary_integral_terms(const BoundaryPartition& partition, const FaceField& trace,
                                         const LyapunovPotential& pot);
double boundary_integral(const BoundaryPartition& partition, const FaceField& trace, const LyapunovPotential& pot);

// -sum_i sum_{Gamma_i^-} area lambda_i u~_i^2 e^mu <= sum_i sum_{Gamma_i^+} area lambda_i q_i^2 e^mu,
// with tolerance 1e-12 * (|lhs| + |rhs|). controls are read on incoming
// slots only (NaN marks a missing value), trace_plus on outgoing ones.
bool control_inequality_holds(const BoundaryPartition& partition, const FaceField& controls,
                              const FaceField& trace_plus, const LyapunovPotential& pot);

// Per-index inflow weights W_i = -sum_{Gamma_i^-} area lambda_i e^mu >= 0.
Vector inflow_weights(const BoundaryPartition& partition, const LyapunovPotential& pot);
// sum_i sum_{Gamma_i^+} area lambda_i q_i^2 e^mu >= 0.
double outflow_budget(const BoundaryPartition& partition, const FaceField& trace_plus, const LyapunovPotential& pot);

// u~ = C sqrt(budget / sum_i W_i) for C in [-1, 1]. Throws NoInflow when no
// characteristic enters anywhere.
double scalar_feedback_control(const BoundaryPartition& partition, const FaceField& trace_plus,
                               const LyapunovPotential& pot, double C);

// Largest uniform per-index controls with the outflow budget shared in
// proportion to each index's inflow weight; indices without inflow get 0.
Vector uniform_componentwise_controls(const BoundaryPartition& partition, const FaceField& trace_plus,
                                      const LyapunovPotential& pot);

}  // namespace hypstab
