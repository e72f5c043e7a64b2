#include "hypstab/potential.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hypstab/errors.hpp"
#include "hypstab/parallel.hpp"

namespace hypstab {

namespace {

constexpr std::size_t kAngles2d = 720;
constexpr std::size_t kFibonacciPoints = 2000;
constexpr double kScaleMargin = 1e-3;

void require_positive(double C) {
  if (!(C > 0.0) || !std::isfinite(C)) throw std::invalid_argument("LMI constant C must be positive and finite");
}

double jacobian_scale(const HyperbolicSystem& system) {
  double s = 0.0;
  for (const auto& a : system.jacobians()) s = std::max(s, a.max_abs());
  return s;
}

// Below this phi counts as strictly negative; guards against rounding noise
// when the minimum is exactly zero.
double feasibility_threshold(const HyperbolicSystem& system) { return -1e-12 * (1.0 + jacobian_scale(system)); }

struct DirectionMin {
  Vector direction;
  double value = std::numeric_limits<double>::infinity();
};

Vector unit_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

DirectionMin scan_1d(const HyperbolicSystem& system) {
  DirectionMin best;
  for (double s : {1.0, -1.0}) {
    const Vector dir{s};
    const double v = direction_objective(system, dir);
    if (v < best.value) best = {dir, v};
  }
  return best;
}

DirectionMin scan_2d(const HyperbolicSystem& system) {
  const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(kAngles2d);
  std::vector<double> phi(kAngles2d);
  parallel_for(0, kAngles2d, [&](std::size_t j) {
    phi[j] = direction_objective(system, unit_from_angle(dtheta * static_cast<double>(j)));
  });
  const std::size_t jbest = static_cast<std::size_t>(std::min_element(phi.begin(), phi.end()) - phi.begin());
  DirectionMin best{unit_from_angle(dtheta * static_cast<double>(jbest)), phi[jbest]};

  // golden-section between the two neighbouring grid angles
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = dtheta * (static_cast<double>(jbest) - 1.0);
  double hi = dtheta * (static_cast<double>(jbest) + 1.0);
  auto f = [&](double t) { return direction_objective(system, unit_from_angle(t)); };
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = f(d);
    }
  }
  const double t = fc < fd ? c : d;
  const double ft = std::min(fc, fd);
  if (ft < best.value) best = {unit_from_angle(t), ft};
  return best;
}

Vector normalized(Vector v) {
  const double n = norm2(v);
  for (double& x : v) x /= n;
  return v;
}

// Two unit vectors orthogonal to p and to each other.
std::pair<Vector, Vector> tangent_basis(const Vector& p) {
  Vector seed = std::abs(p[0]) < 0.9 ? Vector{1.0, 0.0, 0.0} : Vector{0.0, 1.0, 0.0};
  const double proj = dot(seed, p);
  for (std::size_t i = 0; i < 3; ++i) seed[i] -= proj * p[i];
  Vector u = normalized(seed);
  Vector v{p[1] * u[2] - p[2] * u[1], p[2] * u[0] - p[0] * u[2], p[0] * u[1] - p[1] * u[0]};
  return {u, normalized(v)};
}

DirectionMin scan_3d(const HyperbolicSystem& system) {
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vector> points(kFibonacciPoints);
  std::vector<double> phi(kFibonacciPoints);
  parallel_for(0, kFibonacciPoints, [&](std::size_t i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(kFibonacciPoints);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double a = golden_angle * static_cast<double>(i);
    points[i] = normalized({r * std::cos(a), r * std::sin(a), z});
    phi[i] = direction_objective(system, points[i]);
  });
  const std::size_t ibest = static_cast<std::size_t>(std::min_element(phi.begin(), phi.end()) - phi.begin());
  DirectionMin best{points[ibest], phi[ibest]};

  // pattern search on the sphere
  double step = 0.1;
  for (int it = 0; it < 20000 && step > 1e-10; ++it) {
    const auto [u, v] = tangent_basis(best.direction);
    bool moved = false;
    for (const auto& [a, b] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}) {
      Vector trial(3);
      for (std::size_t i = 0; i < 3; ++i) trial[i] = best.direction[i] + step * (a * u[i] + b * v[i]);
      trial = normalized(std::move(trial));
      const double val = direction_objective(system, trial);
      if (val < best.value) {
        best = {std::move(trial), val};
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

DirectionMin scan_directions(const HyperbolicSystem& system) {
  switch (system.dimension()) {
    case 1:
      return scan_1d(system);
    case 2:
      return scan_2d(system);
    default:
      return scan_3d(system);
  }
}

SymMatrix shifted(const SymMatrix& a, double c) { return a + c * SymMatrix::identity(a.size()); }

}  // namespace

LyapunovPotential LyapunovPotential::make(Vector m, double C_A, double C_B, bool includes_remainder) {
  if (!(C_A > 0.0) || !std::isfinite(C_A)) throw std::invalid_argument("C_A must be positive");
  if (!(C_B >= 0.0) || !std::isfinite(C_B)) throw std::invalid_argument("C_B must be non-negative");
  if (!(C_A > C_B)) throw std::invalid_argument("C_A must exceed C_B");
  for (double x : m) {
    if (!std::isfinite(x)) throw NonFinite("potential coefficients must be finite");
  }
  return {std::move(m), C_A, C_B, C_A - C_B, includes_remainder};
}

LyapunovPotential LyapunovPotential::zero(std::size_t d) { return {Vector(d, 0.0), 0.0, 0.0, 0.0, false}; }

Vector LyapunovPotential::normalized_coefficients() const {
  Vector out(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) out[k] = -m[k] / C_A;
  return out;
}

double potential_value(const LyapunovPotential& pot, std::span<const double> x) { return dot(pot.m, x); }

VariableSystem VariableSystem::from_constant(const HyperbolicSystem& system) {
  VariableSystem v;
  v.d = system.dimension();
  v.n = system.state_size();
  v.jacobian = [system](std::size_t k, std::span<const double>) { return system.jacobian(k); };
  v.source = [system](std::span<const double>) { return system.source(); };
  return v;
}

SymMatrix lmi_remainder(const VariableSystem& system, std::span<const double> x) {
  if (x.size() != system.d) throw SizeMismatch("sample point dimension mismatch");
  const Matrix b = system.source(x);
  if (b.size() != system.n) throw SizeMismatch("source matrix size mismatch");
  Matrix r(system.n);
  for (std::size_t i = 0; i < system.n; ++i) {
    for (std::size_t j = 0; j < system.n; ++j) r(i, j) = -(b(i, j) + b(j, i));
  }
  SymMatrix out(r);
  Vector probe(x.begin(), x.end());
  for (std::size_t k = 0; k < system.d; ++k) {
    const double h = 1e-5 * (1.0 + std::abs(x[k]));
    probe[k] = x[k] + h;
    const SymMatrix ap = system.jacobian(k, probe);
    probe[k] = x[k] - h;
    const SymMatrix am = system.jacobian(k, probe);
    probe[k] = x[k];
    out += (1.0 / (2.0 * h)) * (ap + -am);
  }
  return out;
}

bool lmi_check(const HyperbolicSystem& system, std::span<const double> m, double C) {
  require_positive(C);
  return max_eigenvalue(shifted(system.combination(m), C)) <= 1e-10 * (1.0 + C);
}

bool lmi_check_with_remainder(const VariableSystem& system, std::span<const double> m, double C,
                              std::span<const Vector> sample_points) {
  require_positive(C);
  if (sample_points.empty()) throw std::invalid_argument("at least one sample point is required");
  if (m.size() != system.d) throw SizeMismatch("coefficient vector length differs from dimension");
  for (const auto& x : sample_points) {
    SymMatrix a = shifted(lmi_remainder(system, x), C);
    for (std::size_t k = 0; k < system.d; ++k) a += m[k] * system.jacobian(k, x);
    if (max_eigenvalue(a) > 1e-10 * (1.0 + C)) return false;
  }
  return true;
}

bool lmi_check_with_remainder(const HyperbolicSystem& system, std::span<const double> m, double C,
                              std::span<const Vector> sample_points) {
  return lmi_check_with_remainder(VariableSystem::from_constant(system), m, C, sample_points);
}

double estimate_source_bound(const VariableSystem& system, std::span<const Vector> sample_points) {
  if (sample_points.empty()) throw std::invalid_argument("at least one sample point is required");
  double cb = 0.0;
  for (const auto& x : sample_points) cb = std::max(cb, max_eigenvalue(lmi_remainder(system, x)));
  return cb;
}

double estimate_source_bound(const HyperbolicSystem& system, std::span<const Vector> sample_points) {
  return estimate_source_bound(VariableSystem::from_constant(system), sample_points);
}

double direction_objective(const HyperbolicSystem& system, std::span<const double> direction) {
  return max_eigenvalue(system.pencil(direction));
}

PotentialSearch find_potential(const HyperbolicSystem& system, double C_B, std::optional<double> C_A_override) {
  if (!(C_B >= 0.0) || !std::isfinite(C_B)) throw std::invalid_argument("C_B must be non-negative");
  const double C_A = C_A_override.value_or(C_B > 0.0 ? 2.0 * C_B + 1.0 : 1.0);
  if (!(C_A > C_B)) throw std::invalid_argument("C_A must exceed C_B");

  const DirectionMin best = scan_directions(system);
  PotentialSearch out;
  out.best_direction = best.direction;
  out.best_value = best.value;
  if (!(best.value < feasibility_threshold(system))) return out;

  const double scale = C_A / (-best.value) * (1.0 + kScaleMargin);
  Vector m(best.direction.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = scale * best.direction[k];
  if (max_eigenvalue(shifted(system.combination(m), C_A)) > 1e-9 * C_A) {
    // the scan value was not reproduced; report as infeasible
    return out;
  }
  out.potential = LyapunovPotential::make(std::move(m), C_A, C_B);
  return out;
}

PotentialSearch find_potential_with_remainder(const HyperbolicSystem& system, std::optional<double> C_A_override) {
  const double C = C_A_override.value_or(1.0);
  require_positive(C);
  const SymMatrix remainder = -2.0 * system.source_symmetric_part();
  const double target = -C * (1.0 + kScaleMargin);
  auto G = [&](std::span<const double> m) { return max_eigenvalue(remainder + system.combination(m)); };

  const DirectionMin dir = scan_directions(system);
  const std::size_t d = system.dimension();
  PotentialSearch out;
  out.best_direction = dir.direction;

  Vector m(d, 0.0);
  double gm = G(m);
  if (gm > target && dir.value < feasibility_threshold(system)) {
    // G is convex and unbounded below along this ray, hence decreasing on it
    auto at = [&](double s) {
      Vector v(d);
      for (std::size_t k = 0; k < d; ++k) v[k] = s * dir.direction[k];
      return v;
    };
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 2000 && G(at(hi)) > target; ++it) {
      lo = hi;
      hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (G(at(mid)) <= target ? hi : lo) = mid;
    }
    m = at(hi);
    gm = G(m);
  } else if (gm > target) {
    // bounded below: pattern search for the minimum of the convex G
    double step = 1.0;
    for (int it = 0; it < 200000 && step > 1e-10 && gm > target; ++it) {
      bool moved = false;
      for (std::size_t k = 0; k < d && !moved; ++k) {
        for (double sgn : {1.0, -1.0}) {
          Vector trial = m;
          trial[k] += sgn * step;
          const double gt = G(trial);
          if (gt < gm) {
            m = std::move(trial);
            gm = gt;
            moved = true;
            break;
          }
        }
      }
      if (!moved) step *= 0.5;
    }
  }
  out.best_value = gm + C;
  if (gm <= target) {
    out.potential = LyapunovPotential::make(std::move(m), C, 0.0, true);
  }
  return out;
}

GridScanResult grid_scan_lmi(const HyperbolicSystem& system, double C, double range, double step) {
  if (system.dimension() != 2) throw SizeMismatch("grid oracle supports d = 2 only");
  require_positive(C);
  if (!(range > 0.0) || !(step > 0.0)) throw std::invalid_argument("grid range and step must be positive");
  const auto nodes = static_cast<std::size_t>(std::llround(2.0 * range / step)) + 1;
  auto coord = [&](std::size_t i) { return -range + static_cast<double>(i) * step; };

  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  std::atomic<std::size_t> first_row{kNone};
  std::vector<std::size_t> first_col(nodes, kNone);
  std::vector<std::size_t> checked(nodes, 0);
  parallel_for(0, nodes, [&](std::size_t i) {
    if (i > first_row.load()) return;
    for (std::size_t j = 0; j < nodes; ++j) {
      const Vector m{coord(i), coord(j)};
      ++checked[i];
      if (lmi_check(system, m, C)) {
        first_col[i] = j;
        std::size_t cur = first_row.load();
        while (i < cur && !first_row.compare_exchange_weak(cur, i)) {
        }
        return;
      }
    }
  });

  GridScanResult out;
  for (std::size_t c : checked) out.points_checked += c;
  const std::size_t row = first_row.load();
  if (row != kNone) {
    out.feasible = true;
    out.witness = {coord(row), coord(first_col[row])};
  }
  return out;
}

OracleComparison compare_with_grid_oracle(const HyperbolicSystem& system, double C, double range, double step) {
  OracleComparison cmp;
  cmp.grid = grid_scan_lmi(system, C, range, step);
  cmp.search = find_potential(system, 0.0, C);
  if (cmp.search.feasible()) cmp.solver_certified = lmi_check(system, cmp.search.potential->m, C);
  return cmp;
}

}  // namespace hypstab
