#include "hypstab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hypstab/errors.hpp"
#include "hypstab/parallel.hpp"

namespace hypstab {

namespace {

constexpr std::size_t kNoFace = std::numeric_limits<std::size_t>::max();

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

Matrix spectral_part(const EigenDecomposition& e, bool positive) {
  const std::size_t n = e.eigenvalues.size();
  Matrix out(n);
  for (std::size_t c = 0; c < n; ++c) {
    const double lam = positive ? std::max(e.eigenvalues[c], 0.0) : std::min(e.eigenvalues[c], 0.0);
    if (lam == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out(i, j) += lam * e.T(i, c) * e.T(j, c);
    }
  }
  return out;
}

double inf_norm(const Matrix& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) s += std::abs(m(i, j));
    r = std::max(r, s);
  }
  return r;
}

}  // namespace

Grid::Grid(std::vector<std::size_t> cells, std::vector<double> lengths)
    : cells_(std::move(cells)), lengths_(std::move(lengths)) {
  if (cells_.empty() || cells_.size() > 2) throw std::invalid_argument("grid supports d = 1 or d = 2");
  if (lengths_.size() != cells_.size()) throw SizeMismatch("grid cells and lengths differ in dimension");
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    if (cells_[k] < 4) throw std::invalid_argument("grid needs at least 4 cells per axis");
    if (!(lengths_[k] > 0.0) || !std::isfinite(lengths_[k])) {
      throw std::invalid_argument("grid lengths must be positive and finite");
    }
  }
}

double Grid::min_spacing() const {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < dimension(); ++k) h = std::min(h, spacing(k));
  return h;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (std::size_t k = 0; k < dimension(); ++k) v *= spacing(k);
  return v;
}

std::size_t Grid::cell_count() const {
  std::size_t c = 1;
  for (std::size_t n : cells_) c *= n;
  return c;
}

std::vector<std::size_t> Grid::cell_index(std::size_t linear) const {
  std::vector<std::size_t> idx(dimension());
  for (std::size_t k = 0; k < dimension(); ++k) {
    idx[k] = linear % cells_[k];
    linear /= cells_[k];
  }
  return idx;
}

std::size_t Grid::stride(std::size_t axis) const {
  std::size_t s = 1;
  for (std::size_t k = 0; k < axis; ++k) s *= cells_[k];
  return s;
}

Vector Grid::cell_center(std::size_t linear) const {
  const auto idx = cell_index(linear);
  Vector x(dimension());
  for (std::size_t k = 0; k < dimension(); ++k) x[k] = (static_cast<double>(idx[k]) + 0.5) * spacing(k);
  return x;
}

double lyapunov_value(const Grid& grid, const SimState& state, const LyapunovPotential& pot) {
  const std::size_t cells = grid.cell_count();
  if (cells == 0 || state.w.size() % cells != 0) throw SizeMismatch("state does not match grid");
  const std::size_t n = state.w.size() / cells;
  std::vector<double> terms(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    double ww = 0.0;
    for (std::size_t i = 0; i < n; ++i) ww += state.w[c * n + i] * state.w[c * n + i];
    terms[c] = ww == 0.0 ? 0.0 : ww * std::exp(potential_value(pot, grid.cell_center(c)));
  }
  return grid.cell_volume() * pairwise_sum(terms);
}

std::vector<double> initial_bump(const Grid& grid, std::size_t n, double amplitude) {
  std::vector<double> w(grid.cell_count() * n);
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    const Vector x = grid.cell_center(c);
    double v = amplitude;
    for (std::size_t k = 0; k < grid.dimension(); ++k) {
      const double s = std::sin(std::numbers::pi * x[k] / grid.lengths()[k]);
      v *= s * s;
    }
    for (std::size_t i = 0; i < n; ++i) w[c * n + i] = v;
  }
  return w;
}

Simulator::Simulator(HyperbolicSystem system, Grid grid, LyapunovPotential pot, ControlSpec control,
                     SimOptions options)
    : system_(std::move(system)),
      grid_(std::move(grid)),
      pot_(std::move(pot)),
      control_(std::move(control)),
      options_(std::move(options)),
      partition_(partition_boundary(system_, grid_.boundary_faces())) {
  const std::size_t d = grid_.dimension();
  if (system_.dimension() != d) throw SizeMismatch("system dimension differs from grid dimension");
  if (pot_.m.size() != d) throw SizeMismatch("potential dimension differs from grid dimension");
  if (!(options_.cfl > 0.0) || !std::isfinite(options_.cfl)) throw std::invalid_argument("CFL number must be positive");
  if (control_.mode == ControlMode::scalar && !(control_.C >= -1.0 && control_.C <= 1.0)) {
    throw std::invalid_argument("scalar feedback gain must lie in [-1, 1]");
  }
  if (control_.mode == ControlMode::prescribed && !control_.prescribed) {
    throw std::invalid_argument("prescribed control mode needs a boundary function");
  }
  for (std::size_t k = 0; k < d; ++k) {
    const auto e = eigendecompose(system_.jacobian(k));
    positive_part_.push_back(spectral_part(e, true));
    negative_part_.push_back(spectral_part(e, false));
    for (double lam : e.eigenvalues) rho_max_ = std::max(rho_max_, std::abs(lam));
  }
  face_lookup_.assign(grid_.cell_count() * 2 * d, kNoFace);
  std::vector<std::size_t> strides(d);
  for (std::size_t k = 0; k < d; ++k) strides[k] = grid_.stride(k);
  for (std::size_t f = 0; f < partition_.faces.size(); ++f) {
    const auto& face = partition_.faces[f];
    std::size_t lin = 0;
    for (std::size_t k = 0; k < d; ++k) lin += face.cell[k] * strides[k];
    face_lookup_[lin * 2 * d + face.normal_key()] = f;
  }
}

double Simulator::max_stable_dt() const {
  if (rho_max_ == 0.0) return std::numeric_limits<double>::infinity();
  return options_.cfl * grid_.min_spacing() / rho_max_;
}

double Simulator::default_dt() const {
  double dt = max_stable_dt();
  const double b = inf_norm(system_.source());
  if (b > 0.0) dt = std::min(dt, options_.cfl / b);
  return dt;
}

std::size_t Simulator::face_at(std::size_t cell, std::size_t axis, int side) const {
  return face_lookup_[cell * 2 * grid_.dimension() + 2 * axis + (side > 0 ? 1 : 0)];
}

SimState Simulator::initial_state(std::vector<double> w0) const {
  const std::size_t n = system_.state_size();
  if (w0.size() != grid_.cell_count() * n) throw SizeMismatch("initial state does not match grid and state size");
  for (double x : w0) {
    if (!std::isfinite(x)) throw NonFinite("initial state has non-finite values");
  }
  SimState s;
  s.t = 0.0;
  s.w = std::move(w0);
  s.ghost.assign(partition_.faces.size(), Vector(n, 0.0));
  return s;
}

StepTelemetry Simulator::apply_boundary(SimState& state) const {
  const std::size_t n = system_.state_size();
  const std::size_t nf = partition_.faces.size();
  StepTelemetry tel;
  tel.controls.assign(n, 0.0);
  if (options_.periodic) return tel;

  FaceField trace(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const auto& face = partition_.faces[f];
    std::size_t lin = 0;
    for (std::size_t k = 0; k < grid_.dimension(); ++k) lin += face.cell[k] * grid_.stride(k);
    trace[f].assign(state.w.begin() + static_cast<std::ptrdiff_t>(lin * n),
                    state.w.begin() + static_cast<std::ptrdiff_t>((lin + 1) * n));
  }
  const FaceField q = characteristic_trace(partition_, trace);

  FaceField controls;
  switch (control_.mode) {
    case ControlMode::zero:
      controls = uniform_control_field(partition_, Vector(n, 0.0));
      break;
    case ControlMode::scalar: {
      const double u = partition_.has_inflow() ? scalar_feedback_control(partition_, q, pot_, control_.C) : 0.0;
      controls = uniform_control_field(partition_, Vector(n, u));
      break;
    }
    case ControlMode::componentwise:
      controls = uniform_control_field(partition_, uniform_componentwise_controls(partition_, q, pot_));
      break;
    case ControlMode::prescribed: {
      controls.resize(nf);
      for (std::size_t f = 0; f < nf; ++f) {
        const Vector wbc = control_.prescribed(state.t, partition_.faces[f].center);
        if (wbc.size() != n) throw SizeMismatch("prescribed boundary state has wrong length");
        controls[f] = partition_.eigen(f).T.apply_transpose(wbc);
      }
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f : partition_.gamma_minus[i]) {
      if (std::abs(controls[f][i]) > std::abs(tel.controls[i])) tel.controls[i] = controls[f][i];
    }
  }
  state.ghost = assemble_boundary_state(partition_, q, controls);
  const auto b = boundary_integral_terms(partition_, state.ghost, pot_);
  tel.boundary_integral = b.value;
  tel.boundary_magnitude = b.magnitude;
  return tel;
}

SimState Simulator::advance(const SimState& state, double dt) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time step must be positive and finite");
  const double limit = max_stable_dt();
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "time step " << dt << " exceeds the CFL bound " << limit;
    throw CflViolation(msg.str());
  }
  const std::size_t n = system_.state_size();
  const std::size_t d = grid_.dimension();
  const std::size_t cells = grid_.cell_count();
  if (state.w.size() != cells * n) throw SizeMismatch("state does not match grid");
  if (!options_.periodic && state.ghost.size() != partition_.faces.size()) {
    throw SizeMismatch("state has no boundary data for every face");
  }

  SimState next;
  next.t = state.t + dt;
  next.w.resize(state.w.size());
  next.ghost = state.ghost;
  const Matrix& source = system_.source();

  parallel_for(0, cells, [&](std::size_t c) {
    const auto idx = grid_.cell_index(c);
    const double* wc = &state.w[c * n];
    Vector rate(n, 0.0);
    Vector diff(n);
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t stride = grid_.stride(k);
      const std::size_t nk = grid_.cells()[k];
      auto neighbour = [&](int side) -> const double* {
        const bool at_edge = side < 0 ? idx[k] == 0 : idx[k] + 1 == nk;
        if (!at_edge) return &state.w[(side < 0 ? c - stride : c + stride) * n];
        if (options_.periodic) return &state.w[(side < 0 ? c + (nk - 1) * stride : c - (nk - 1) * stride) * n];
        return state.ghost[face_at(c, k, side)].data();
      };
      const double inv_dx = 1.0 / grid_.spacing(k);
      const double* wl = neighbour(-1);
      const double* wr = neighbour(+1);
      const Matrix& ap = positive_part_[k];
      const Matrix& am = negative_part_[k];
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += ap(i, j) * (wc[j] - wl[j]) + am(i, j) * (wr[j] - wc[j]);
        rate[i] -= inv_dx * s;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += source(i, j) * wc[j];
      next.w[c * n + i] = wc[i] + dt * (rate[i] - s);
    }
  });

  for (std::size_t c = 0; c < cells; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(next.w[c * n + i])) {
        std::ostringstream msg;
        msg << "non-finite state in cell " << c << " component " << i << " at t = " << next.t;
        throw NonFinite(msg.str());
      }
    }
  }
  return next;
}

SimState Simulator::step(const SimState& state, double dt) const {
  SimState s = state;
  apply_boundary(s);
  return advance(s, dt);
}

RunRecord Simulator::run(std::vector<double> w0, double t_end) const {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive and finite");
  SimState state = initial_state(std::move(w0));
  const double dt_max = default_dt();
  if (t_end / dt_max > 1e9) throw CflViolation("the stable time step would need more than 1e9 steps");
  const std::size_t steps =
      std::isfinite(dt_max) ? std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t_end / dt_max - 1e-12)))
                            : 1;
  const double dt = t_end / static_cast<double>(steps);

  RunRecord rec;
  rec.steps = steps;
  rec.dt = dt;
  rec.C_L = pot_.C_L;
  auto snaps = options_.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;

  for (std::size_t k = 0;; ++k) {
    const StepTelemetry tel = apply_boundary(state);
    rec.t.push_back(state.t);
    rec.L.push_back(lyapunov_value(grid_, state, pot_));
    rec.boundary_integral.push_back(tel.boundary_integral);
    rec.boundary_magnitude.push_back(tel.boundary_magnitude);
    rec.controls.push_back(tel.controls);
    while (next_snap < snaps.size() && snaps[next_snap] <= state.t + 1e-12) {
      rec.snapshots.push_back(state);
      ++next_snap;
    }
    if (k == steps) break;
    state = advance(state, dt);
    state.t = k + 1 == steps ? t_end : static_cast<double>(k + 1) * dt;
  }
  rec.final_state = state;

  const bool positive = std::all_of(rec.L.begin(), rec.L.end(), [](double v) { return v > 0.0; });
  if (positive && rec.L.size() >= 10) {
    try {
      rec.c_fit = fit_decay_rate(rec.t, rec.L);
    } catch (const DegenerateSeries&) {
      rec.c_fit.reset();
    }
  }
  return rec;
}

SimState step(const HyperbolicSystem& system, const Grid& grid, const SimState& state, const LyapunovPotential& pot,
              const ControlSpec& control, double dt, double cfl) {
  SimOptions opts;
  opts.cfl = cfl;
  return Simulator(system, grid, pot, control, opts).step(state, dt);
}

RunRecord run(const HyperbolicSystem& system, const Grid& grid, std::vector<double> w0, const LyapunovPotential& pot,
              const ControlSpec& control, double t_end, double cfl) {
  SimOptions opts;
  opts.cfl = cfl;
  return Simulator(system, grid, pot, control, opts).run(std::move(w0), t_end);
}

double fit_decay_rate(std::span<const double> t, std::span<const double> L) {
  if (t.size() != L.size()) throw SizeMismatch("time and value series differ in length");
  if (L.size() < 10) throw DegenerateSeries("decay fit needs at least 10 samples");
  for (double v : L) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DegenerateSeries("decay fit needs strictly positive finite samples");
  }
  const std::size_t start = L.size() / 10;
  const auto count = static_cast<double>(L.size() - start);
  // logs relative to the first sample, so a constant series gives exactly 0
  const double y0 = std::log(L[start]);
  double mt = 0.0;
  double my = 0.0;
  for (std::size_t i = start; i < L.size(); ++i) {
    mt += t[i];
    my += std::log(L[i]) - y0;
  }
  mt /= count;
  my /= count;
  double stt = 0.0;
  double sty = 0.0;
  for (std::size_t i = start; i < L.size(); ++i) {
    const double dt = t[i] - mt;
    stt += dt * dt;
    sty += dt * (std::log(L[i]) - y0 - my);
  }
  if (!(stt > 0.0)) throw DegenerateSeries("decay fit window has no time spread");
  return 0.0 - sty / stt;
}

double fit_decay_rate(std::span<const std::pair<double, double>> series) {
  std::vector<double> t;
  std::vector<double> L;
  for (const auto& [ti, li] : series) {
    t.push_back(ti);
    L.push_back(li);
  }
  return fit_decay_rate(t, L);
}

void write_csv(std::ostream& out, const RunRecord& record) {
  const std::size_t n = record.controls.empty() ? 0 : record.controls.front().size();
  out << "t,L,boundary_integral";
  for (std::size_t i = 0; i < n; ++i) out << ",control_" << (i + 1);
  out << '\n';
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(17);
  out.unsetf(std::ios::floatfield);
  for (std::size_t r = 0; r < record.t.size(); ++r) {
    out << record.t[r] << ',' << record.L[r] << ',' << record.boundary_integral[r];
    for (double u : record.controls[r]) out << ',' << u;
    out << '\n';
  }
  out.flags(flags);
  out.precision(prec);
}

void write_snapshot(std::ostream& out, const Grid& grid, const SimState& state, std::size_t n) {
  const auto prec = out.precision();
  out << std::setprecision(17);
  out << "# t = " << state.t << '\n';
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    const Vector x = grid.cell_center(c);
    for (double xi : x) out << xi << ' ';
    for (std::size_t i = 0; i < n; ++i) out << state.w[c * n + i] << (i + 1 < n ? ' ' : '\n');
  }
  out.precision(prec);
}

}  // namespace hypstab
