#include "hypstab/boundary.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hypstab/errors.hpp"

namespace hypstab {

namespace {

void require_field(const BoundaryPartition& p, const FaceField& field, const char* what) {
  if (field.size() != p.faces.size()) {
    throw SizeMismatch(std::string(what) + " must hold one entry per boundary face");
  }
  for (const auto& v : field) {
    if (v.size() != p.n) throw SizeMismatch(std::string(what) + " entries must have state size");
  }
}

double weight(const BoundaryFace& face, const LyapunovPotential& pot) {
  return face.area * std::exp(potential_value(pot, face.center));
}

}  // namespace

Vector BoundaryFace::normal() const {
  Vector nrm(center.size(), 0.0);
  nrm.at(axis) = side > 0 ? 1.0 : -1.0;
  return nrm;
}

std::vector<BoundaryFace> box_faces(std::span<const std::size_t> cells, std::span<const double> lengths) {
  const std::size_t d = cells.size();
  if (d == 0 || lengths.size() != d) throw SizeMismatch("cells and lengths must share the dimension");
  std::vector<double> dx(d);
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    if (cells[k] == 0 || !(lengths[k] > 0.0)) throw std::invalid_argument("box needs positive cells and lengths");
    dx[k] = lengths[k] / static_cast<double>(cells[k]);
    total *= cells[k];
  }

  std::vector<BoundaryFace> faces;
  std::vector<std::size_t> idx(d);
  for (std::size_t lin = 0; lin < total; ++lin) {
    std::size_t rest = lin;
    for (std::size_t k = 0; k < d; ++k) {
      idx[k] = rest % cells[k];
      rest /= cells[k];
    }
    for (std::size_t axis = 0; axis < d; ++axis) {
      for (int side : {-1, 1}) {
        const bool on_face = side < 0 ? idx[axis] == 0 : idx[axis] + 1 == cells[axis];
        if (!on_face) continue;
        BoundaryFace f;
        f.cell = idx;
        f.axis = axis;
        f.side = side;
        f.center.resize(d);
        f.area = 1.0;
        for (std::size_t k = 0; k < d; ++k) {
          if (k == axis) {
            f.center[k] = side < 0 ? 0.0 : lengths[k];
          } else {
            f.center[k] = (static_cast<double>(idx[k]) + 0.5) * dx[k];
            f.area *= dx[k];
          }
        }
        faces.push_back(std::move(f));
      }
    }
  }
  return faces;
}

bool BoundaryPartition::has_inflow() const {
  for (const auto& g : gamma_minus) {
    if (!g.empty()) return true;
  }
  return false;
}

BoundaryPartition partition_boundary(const HyperbolicSystem& system, std::vector<BoundaryFace> faces) {
  const std::size_t d = system.dimension();
  const std::size_t n = system.state_size();
  BoundaryPartition p;
  p.n = n;
  p.normal_eigen.resize(2 * d);
  std::vector<bool> have(2 * d, false);
  for (const auto& f : faces) {
    if (f.axis >= d || f.center.size() != d) throw SizeMismatch("boundary face does not match system dimension");
    if (!(f.area > 0.0)) throw std::invalid_argument("boundary face area must be positive");
    const std::size_t key = f.normal_key();
    if (!have[key]) {
      p.normal_eigen[key] = eigendecompose(system.pencil(f.normal()));
      have[key] = true;
    }
  }
  p.faces = std::move(faces);
  p.gamma_minus.assign(n, {});
  p.gamma_plus.assign(n, {});
  for (std::size_t f = 0; f < p.faces.size(); ++f) {
    for (std::size_t i = 0; i < n; ++i) {
      (p.incoming(f, i) ? p.gamma_minus[i] : p.gamma_plus[i]).push_back(f);
    }
  }
  return p;
}

FaceField characteristic_trace(const BoundaryPartition& partition, const FaceField& w) {
  require_field(partition, w, "trace");
  FaceField q(w.size());
  for (std::size_t f = 0; f < w.size(); ++f) q[f] = partition.eigen(f).T.apply_transpose(w[f]);
  return q;
}

FaceField assemble_boundary_state(const BoundaryPartition& partition, const FaceField& q_trace,
                                  const FaceField& controls) {
  require_field(partition, q_trace, "trace");
  require_field(partition, controls, "controls");
  FaceField out(q_trace.size());
  for (std::size_t f = 0; f < q_trace.size(); ++f) {
    Vector q = q_trace[f];
    for (std::size_t i = 0; i < partition.n; ++i) {
      if (partition.incoming(f, i)) q[i] = controls[f][i];
    }
    out[f] = partition.eigen(f).T.apply(q);
  }
  return out;
}

FaceField uniform_control_field(const BoundaryPartition& partition, std::span<const double> controls) {
  if (controls.size() != partition.n) throw SizeMismatch("one control per characteristic index is required");
  return FaceField(partition.faces.size(), Vector(controls.begin(), controls.end()));
}

BoundaryIntegral boundary_integral_terms(const BoundaryPartition& partition, const FaceField& trace,
                                         const LyapunovPotential& pot) {
  const FaceField q = characteristic_trace(partition, trace);
  BoundaryIntegral out;
  for (std::size_t f = 0; f < q.size(); ++f) {
    const double wgt = weight(partition.faces[f], pot);
    double face_sum = 0.0;
    double face_mag = 0.0;
    for (std::size_t i = 0; i < partition.n; ++i) {
      const double term = partition.speed(f, i) * q[f][i] * q[f][i];
      face_sum += term;
      face_mag += std::abs(term);
    }
    out.value += wgt * face_sum;
    out.magnitude += wgt * face_mag;
  }
  return out;
}

double boundary_integral(const BoundaryPartition& partition, const FaceField& trace, const LyapunovPotential& pot) {
  return boundary_integral_terms(partition, trace, pot).value;
}

Vector inflow_weights(const BoundaryPartition& partition, const LyapunovPotential& pot) {
  Vector w(partition.n, 0.0);
  for (std::size_t i = 0; i < partition.n; ++i) {
    for (std::size_t f : partition.gamma_minus[i]) w[i] -= weight(partition.faces[f], pot) * partition.speed(f, i);
  }
  return w;
}

double outflow_budget(const BoundaryPartition& partition, const FaceField& trace_plus, const LyapunovPotential& pot) {
  require_field(partition, trace_plus, "outgoing trace");
  double budget = 0.0;
  for (std::size_t i = 0; i < partition.n; ++i) {
    for (std::size_t f : partition.gamma_plus[i]) {
      const double q = trace_plus[f][i];
      budget += weight(partition.faces[f], pot) * partition.speed(f, i) * q * q;
    }
  }
  return budget;
}

bool control_inequality_holds(const BoundaryPartition& partition, const FaceField& controls,
                              const FaceField& trace_plus, const LyapunovPotential& pot) {
  if (controls.size() != partition.faces.size()) throw MissingControl("controls must cover every boundary face");
  double lhs = 0.0;
  for (std::size_t i = 0; i < partition.n; ++i) {
    for (std::size_t f : partition.gamma_minus[i]) {
      if (controls[f].size() != partition.n || std::isnan(controls[f][i])) {
        throw MissingControl("no control value for characteristic " + std::to_string(i + 1) + " on face " +
                             std::to_string(f));
      }
      const double u = controls[f][i];
      lhs -= weight(partition.faces[f], pot) * partition.speed(f, i) * u * u;
    }
  }
  const double rhs = outflow_budget(partition, trace_plus, pot);
  return lhs <= rhs + 1e-12 * (std::abs(lhs) + std::abs(rhs));
}

double scalar_feedback_control(const BoundaryPartition& partition, const FaceField& trace_plus,
                               const LyapunovPotential& pot, double C) {
  if (!(C >= -1.0 && C <= 1.0)) throw std::invalid_argument("feedback gain C must lie in [-1, 1]");
  double inflow = 0.0;
  for (double w : inflow_weights(partition, pot)) inflow += w;
  if (!(inflow > 0.0)) throw NoInflow("no characteristic enters the domain; the feedback control is undefined");
  const double budget = outflow_budget(partition, trace_plus, pot);
  return C * std::sqrt(std::max(0.0, budget) / inflow);
}

Vector uniform_componentwise_controls(const BoundaryPartition& partition, const FaceField& trace_plus,
                                      const LyapunovPotential& pot) {
  const Vector w = inflow_weights(partition, pot);
  double total = 0.0;
  for (double x : w) total += x;
  Vector u(partition.n, 0.0);
  if (!(total > 0.0)) return u;
  // share_i = budget * W_i / total, so u_i^2 W_i = share_i gives a common magnitude
  const double magnitude = std::sqrt(std::max(0.0, outflow_budget(partition, trace_plus, pot)) / total);
  for (std::size_t i = 0; i < partition.n; ++i) {
    if (w[i] > 0.0) u[i] = magnitude;
  }
  return u;
}

}  // namespace hypstab
