// One line per acceptance criterion; exit status 1 if any line fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hypstab/boundary.hpp"
#include "hypstab/potential.hpp"
#include "hypstab/sim.hpp"
#include "hypstab/symlin.hpp"
#include "hypstab/sysdef.hpp"

using namespace hypstab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Vector random_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double a = angle(rng);
  return {std::cos(a), std::sin(a)};
}

HyperbolicSystem euler(double v1, double v2, double a) { return euler_symmetrized(EulerScenario{1.0, {v1, v2}, a}); }

// 1. closed-form Euler eigenpairs against the generic eigensolver
Outcome eigenstructure_crosscheck() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<EulerScenario> scenarios;
  for (int s = 0; s < 20; ++s) {
    const double a = 0.5 + 1.5 * u(rng);
    // even: supersonic, odd: subsonic
    const double ratio = s % 2 == 0 ? 1.1 + 2.0 * u(rng) : 0.05 + 0.85 * u(rng);
    const Vector dir = random_unit(rng);
    scenarios.push_back(EulerScenario{0.5 + u(rng), {ratio * a * dir[0], ratio * a * dir[1]}, a});
  }
  std::vector<Vector> directions;
  for (int k = 0; k < 100; ++k) directions.push_back(random_unit(rng));

  double worst_val = 0.0;
  double worst_vec = 0.0;
  for (const auto& sc : scenarios) {
    const auto sys = euler_symmetrized(sc);
    for (const auto& nu : directions) {
      const auto closed = euler_eigenstructure(sc, nu);
      const auto jac = eigendecompose(sys.pencil(nu));
      for (std::size_t i = 0; i < 3; ++i) {
        worst_val = std::max(worst_val, std::abs(closed.eigenvalues[i] - jac.eigenvalues[i]));
        double plus = 0.0;
        double minus = 0.0;
        for (std::size_t r = 0; r < 3; ++r) {
          plus = std::max(plus, std::abs(closed.T(r, i) - jac.T(r, i)));
          minus = std::max(minus, std::abs(closed.T(r, i) + jac.T(r, i)));
        }
        worst_vec = std::max(worst_vec, std::min(plus, minus));
      }
    }
  }
  std::ostringstream d;
  d << "2000 pencils, max eigenvalue error " << worst_val << ", max eigenvector error " << worst_vec;
  return {worst_val <= 1e-10 && worst_vec <= 1e-8, d.str()};
}

// 2. orthogonality and diagonalization on random symmetric matrices
Outcome orthogonality_suite() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(0.0, 4.0);
  double worst_orth = 0.0;
  double worst_resid = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial) % 6;
    const double s = std::pow(10.0, scale(rng) - 2.0);
    Matrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = s * u(rng);
    }
    const SymMatrix sym(a);
    const auto e = eigendecompose(sym);
    const Matrix ttt = e.T.transpose() * e.T;
    const Matrix d = e.T.transpose() * a * e.T;
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        worst_orth = std::max(worst_orth, std::abs(ttt(i, j) - (i == j ? 1.0 : 0.0)));
        if (i != j) off = std::max(off, std::abs(d(i, j)));
      }
    }
    worst_resid = std::max(worst_resid, off / (1.0 + a.max_abs()));
  }
  std::ostringstream d;
  d << "200 matrices, max |T^T T - I| " << worst_orth << ", max relative off-diagonal " << worst_resid;
  return {worst_orth <= 1e-10 && worst_resid <= 1e-8, d.str()};
}

// 3. potential search against the brute-force grid scan
Outcome oracle_equivalence() {
  int disagreements = 0;
  int grid_feasible = 0;
  int solver_feasible = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 1 + seed % 3;
    const auto cmp = compare_with_grid_oracle(random_constant_system(1000 + seed, 2, n));
    grid_feasible += cmp.grid.feasible ? 1 : 0;
    solver_feasible += cmp.search.feasible() ? 1 : 0;
    if (!cmp.agree()) ++disagreements;
  }
  std::ostringstream d;
  d << "50 systems, grid-feasible " << grid_feasible << ", solver-feasible " << solver_feasible
    << ", disagreements " << disagreements;
  return {disagreements == 0, d.str()};
}

// 4. Euler feasible exactly when supersonic
Outcome euler_feasibility_boundary() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int wrong = 0;
  int supersonic = 0;
  for (int k = 0; k < 20; ++k) {
    const double ratio = 0.2 + 2.8 * k / 19.0;
    const double a = 0.5 + 1.5 * u(rng);
    const Vector dir = random_unit(rng);
    const double speed = ratio * a;
    if (std::abs(speed - a) <= 1e-3) return {false, "scenario inside the excluded sonic band"};
    const auto r = find_potential(euler(speed * dir[0], speed * dir[1], a), 0.0);
    supersonic += speed > a ? 1 : 0;
    if (r.feasible() != (speed > a)) ++wrong;
  }
  std::ostringstream d;
  d << "20 scenarios (" << supersonic << " supersonic), misclassified " << wrong;
  return {wrong == 0, d.str()};
}

// 5. supersonic Euler partition on a 32x32 grid face-for-face
Outcome partition_exactness() {
  const std::size_t cells[2] = {32, 32};
  const double lengths[2] = {1.0, 1.0};
  const auto p = partition_boundary(euler(3.0, 0.0, 1.0), box_faces(cells, lengths));
  std::vector<std::size_t> right;
  std::vector<std::size_t> left;
  for (std::size_t f = 0; f < p.faces.size(); ++f) {
    if (p.faces[f].axis == 0) (p.faces[f].side > 0 ? right : left).push_back(f);
  }
  const bool g1 = p.gamma_plus[0] == right;
  const bool g2 = p.gamma_minus[1] == left;
  const bool g3 = p.gamma_minus[2].empty();
  std::ostringstream d;
  d << "Gamma_1+ on x1=1 only: " << (g1 ? "yes" : "no") << "; Gamma_2- on x1=0 only: " << (g2 ? "yes" : "no")
    << "; Gamma_3- empty: " << (g3 ? "yes" : "no") << " (" << p.gamma_minus[2].size() << " faces";
  if (!g3 && !p.gamma_minus[2].empty()) d << ", lambda_3 = " << p.speed(p.gamma_minus[2].front(), 2) << " at x1=0";
  d << ")";
  return {g1 && g2 && g3, d.str()};
}

// 6. discrete decay for the supersonic Euler run
Outcome discrete_theorem() {
  const auto sys = euler(3.0, 0.0, 1.0);
  const auto pot = *find_potential(sys, 0.0).potential;
  const Grid g({64, 64}, {1.0, 1.0});
  ControlSpec ctl;
  ctl.mode = ControlMode::scalar;
  ctl.C = 0.0;
  SimOptions o;
  o.cfl = 0.45;
  const auto rec = Simulator(sys, g, pot, ctl, o).run(initial_bump(g, 3), 1.0);
  bool boundary_ok = true;
  double worst = 0.0;
  for (std::size_t k = 0; k < rec.t.size(); ++k) {
    const double scale = rec.boundary_magnitude[k];
    if (rec.boundary_integral[k] < -1e-9 * scale) boundary_ok = false;
    if (scale > 0.0) worst = std::min(worst, rec.boundary_integral[k] / scale);
  }
  bool monotone = true;
  for (std::size_t k = 0; k + 1 < rec.L.size(); ++k) monotone = monotone && rec.L[k + 1] <= rec.L[k];
  const bool rate = rec.c_fit && *rec.c_fit >= 0.8 * pot.C_A;
  std::ostringstream d;
  d << "(a) min B/scale " << worst << " " << (boundary_ok ? "ok" : "violated") << "; (b) L monotone "
    << (monotone ? "yes" : "no") << "; (c) c_fit " << (rec.c_fit ? *rec.c_fit : NAN) << " vs 0.8 C_L "
    << 0.8 * pot.C_A << "; " << rec.steps << " steps";
  return {boundary_ok && monotone && rate, d.str()};
}

// 7. the scalar law at |C| = 1 turns the control inequality into an equality
Outcome control_tightness() {
  std::vector<BoundaryFace> faces;
  for (std::size_t axis = 0; axis < 2; ++axis) {
    for (int side : {-1, 1}) {
      BoundaryFace f;
      f.cell = {0, 0};
      f.axis = axis;
      f.side = side;
      f.center = {0.5, 0.5};
      f.center[axis] = side < 0 ? 0.0 : 1.0;
      f.area = 1.0;
      faces.push_back(f);
    }
  }
  const auto p = partition_boundary(euler(3.0, 0.0, 1.0), faces);
  const auto pot = LyapunovPotential::zero(2);
  const FaceField q = characteristic_trace(p, FaceField(4, Vector{1.0, 1.0, 0.0}));
  double worst = 0.0;
  for (double C : {1.0, -1.0}) {
    const double u = scalar_feedback_control(p, q, pot, C);
    double lhs = 0.0;
    double rhs = 0.0;
    for (std::size_t f = 0; f < 4; ++f) {
      for (std::size_t i = 0; i < 3; ++i) {
        const double lam = p.speed(f, i);
        if (lam < 0.0) {
          lhs -= lam * u * u;
        } else {
          rhs += lam * q[f][i] * q[f][i];
        }
      }
    }
    if (!(rhs > 0.0)) return {false, "outflow side vanished"};
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
  }
  std::ostringstream d;
  d << "relative gap " << worst;
  return {worst <= 1e-12, d.str()};
}

// 8. inadmissible prescribed data drives the boundary integral negative
Outcome negative_control_path() {
  const auto sys = euler(3.0, 0.0, 1.0);
  const auto pot = *find_potential(sys, 0.0).potential;
  const Grid g({32, 32}, {1.0, 1.0});
  ControlSpec ctl;
  ctl.mode = ControlMode::prescribed;
  ctl.prescribed = [](double, std::span<const double>) { return Vector{1.0, 0.0, 0.0}; };
  const auto rec = Simulator(sys, g, pot, ctl).run(initial_bump(g, 3), 0.2);
  const auto negative =
      std::count_if(rec.boundary_integral.begin(), rec.boundary_integral.end(), [](double b) { return b < 0.0; });
  std::ostringstream d;
  d << negative << " of " << rec.boundary_integral.size() << " steps with negative boundary integral";
  return {negative > 0, d.str()};
}

// 9. upwind advection of a step against the exact translated profile
Outcome scheme_sanity() {
  const double c = 1.0;
  const double t_end = 0.5;
  const double x0 = 0.25;
  const HyperbolicSystem sys({SymMatrix(1, {c})}, Matrix(1));
  std::vector<double> dx;
  std::vector<double> err;
  for (std::size_t n : {64, 128, 256}) {
    const Grid g({n}, {1.0});
    std::vector<double> w0(n);
    for (std::size_t i = 0; i < n; ++i) w0[i] = g.cell_center(i)[0] > x0 ? 1.0 : 0.0;
    const auto rec = Simulator(sys, g, LyapunovPotential::zero(1), ControlSpec{}).run(w0, t_end);
    // exact solution as cell averages of the shifted step (zero inflow behind it)
    double e = 0.0;
    const double h = g.spacing(0);
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = static_cast<double>(i) * h;
      const double covered = std::clamp(lo + h - (x0 + c * t_end), 0.0, h) / h;
      e += std::abs(rec.final_state.w[i] - covered) * h;
    }
    dx.push_back(h);
    err.push_back(e);
  }
  const double order_a = std::log(err[0] / err[1]) / std::log(dx[0] / dx[1]);
  const double order_b = std::log(err[1] / err[2]) / std::log(dx[1] / dx[2]);
  const double order = std::min(order_a, order_b);
  // C taken from the coarsest grid; a first-order method keeps err / dx bounded
  const double C = err[0] / dx[0];
  bool bounded = true;
  for (std::size_t k = 0; k < 3; ++k) bounded = bounded && err[k] <= C * dx[k] * (1.0 + 1e-12);
  std::ostringstream d;
  d << "L1 errors " << err[0] << ", " << err[1] << ", " << err[2] << "; err/dx " << err[0] / dx[0] << ", "
    << err[1] / dx[1] << ", " << err[2] / dx[2] << "; observed order " << order;
  return {bounded && order >= 0.7, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "eigenstructure cross-check", 1.0, eigenstructure_crosscheck},
      {2, "orthogonality/diagonalization suite", 1.0, orthogonality_suite},
      {3, "LMI oracle equivalence", 30.0, oracle_equivalence},
      {4, "Euler feasibility boundary", 5.0, euler_feasibility_boundary},
      {5, "boundary partition exactness", 1.0, partition_exactness},
      {6, "discrete decay theorem", 60.0, discrete_theorem},
      {7, "control-law tightness", 1.0, control_tightness},
      {8, "negative control path", 10.0, negative_control_path},
      {9, "scheme sanity oracle", 10.0, scheme_sanity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = out.pass && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s criterion %d: %s [%.3f s / %.0f s%s] %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                c.limit_s, in_time ? "" : ", too slow", out.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
