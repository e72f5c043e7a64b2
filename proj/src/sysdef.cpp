#include "hypstab/sysdef.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "hypstab/errors.hpp"

namespace hypstab {

namespace {

void require_unit(std::span<const double> nu, std::size_t d) {
  if (nu.size() != d) throw SizeMismatch("direction must have " + std::to_string(d) + " components");
  if (!std::isfinite(nu[0]) || !std::isfinite(nu[1]) || std::abs(norm2(nu) - 1.0) > 1e-12) {
    throw NonUnitDirection("direction must be a unit vector");
  }
}

double fd_step(double ref) { return 1e-5 * (1.0 + std::abs(ref)); }

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw NonFinite(std::string("flux evaluation produced non-finite values (") + what + ")");
  }
}

}  // namespace

HyperbolicSystem::HyperbolicSystem(std::vector<SymMatrix> jacobians, Matrix source, std::string label)
    : jacobians_(std::move(jacobians)), source_(std::move(source)), label_(std::move(label)) {
  if (jacobians_.empty() || jacobians_.size() > 3) {
    throw SizeMismatch("hyperbolic system needs 1 to 3 Jacobians, got " + std::to_string(jacobians_.size()));
  }
  const std::size_t n = source_.size();
  if (n == 0) throw SizeMismatch("hyperbolic system needs a non-empty state");
  for (const auto& a : jacobians_) {
    if (a.size() != n) throw SizeMismatch("Jacobian size differs from source size");
  }
  for (double x : source_.data()) {
    if (!std::isfinite(x)) throw NonFinite("source matrix has non-finite entries");
  }
}

SymMatrix HyperbolicSystem::source_symmetric_part() const {
  Matrix s(state_size());
  for (std::size_t i = 0; i < state_size(); ++i) {
    for (std::size_t j = 0; j < state_size(); ++j) s(i, j) = 0.5 * (source_(i, j) + source_(j, i));
  }
  return SymMatrix(s);
}

SymMatrix HyperbolicSystem::combination(std::span<const double> m) const {
  if (m.size() != dimension()) throw SizeMismatch("coefficient vector length differs from dimension");
  SymMatrix s(state_size());
  for (std::size_t k = 0; k < dimension(); ++k) s += m[k] * jacobians_[k];
  return s;
}

void EulerScenario::validate() const {
  if (!(rho_bar > 0.0) || !std::isfinite(rho_bar)) throw InvalidScenario("rho_bar must be positive and finite");
  if (!(a_bar > 0.0) || !std::isfinite(a_bar)) throw InvalidScenario("a_bar must be positive and finite");
  if (!std::isfinite(v_bar[0]) || !std::isfinite(v_bar[1])) throw InvalidScenario("v_bar must be finite");
}

double EulerScenario::speed() const { return std::hypot(v_bar[0], v_bar[1]); }

double euler_density_to_r(const EulerScenario& s, double rho) { return s.a_bar / s.rho_bar * rho; }

double euler_r_to_density(const EulerScenario& s, double r) { return s.rho_bar / s.a_bar * r; }

HyperbolicSystem euler_symmetrized(const EulerScenario& scenario) {
  scenario.validate();
  const double a = scenario.a_bar;
  const double v1 = scenario.v_bar[0];
  const double v2 = scenario.v_bar[1];
  std::vector<SymMatrix> jac;
  jac.push_back(SymMatrix::from_rows({{v1, a, 0.0}, {a, v1, 0.0}, {0.0, 0.0, v1}}));
  jac.push_back(SymMatrix::from_rows({{v2, 0.0, a}, {0.0, v2, 0.0}, {a, 0.0, v2}}));
  return HyperbolicSystem(std::move(jac), Matrix(3), "euler");
}

EigenDecomposition euler_eigenstructure(const EulerScenario& scenario, std::span<const double> nu) {
  scenario.validate();
  require_unit(nu, 2);
  const double vn = nu[0] * scenario.v_bar[0] + nu[1] * scenario.v_bar[1];
  const double a = scenario.a_bar;
  const double h = 1.0 / std::numbers::sqrt2;
  EigenDecomposition e{{vn - a, vn, vn + a}, Matrix(3)};
  // columns: (1, -nu1, -nu2)/sqrt2, (0, -nu2, nu1), (1, nu1, nu2)/sqrt2
  e.T(0, 0) = h;
  e.T(1, 0) = -h * nu[0];
  e.T(2, 0) = -h * nu[1];
  e.T(0, 1) = 0.0;
  e.T(1, 1) = -nu[1];
  e.T(2, 1) = nu[0];
  e.T(0, 2) = h;
  e.T(1, 2) = h * nu[0];
  e.T(2, 2) = h * nu[1];
  return e;
}

Vector characteristic_transform(const EulerScenario& scenario, std::span<const double> nu,
                                std::span<const double> w) {
  require_unit(nu, 2);
  if (w.size() != 3) throw SizeMismatch("Euler state has 3 components");
  (void)scenario;
  const double h = 1.0 / std::numbers::sqrt2;
  const double vn = nu[0] * w[1] + nu[1] * w[2];
  return {h * (w[0] - vn), -(nu[1] * w[1] - nu[0] * w[2]), h * (w[0] + vn)};
}

Vector characteristic_inverse(const EulerScenario& scenario, std::span<const double> nu,
                              std::span<const double> q) {
  require_unit(nu, 2);
  if (q.size() != 3) throw SizeMismatch("Euler state has 3 components");
  (void)scenario;
  const double h = 1.0 / std::numbers::sqrt2;
  const double diff = q[0] - q[2];
  return {h * (q[0] + q[2]), -h * nu[0] * diff - nu[1] * q[1], -h * nu[1] * diff + nu[0] * q[1]};
}

HyperbolicSystem linearize_flux(const FluxSpec& spec, std::span<const double> x_ref, std::span<const double> u_ref,
                                std::span<const Vector> p_ref) {
  const std::size_t d = spec.d;
  const std::size_t n = spec.n;
  if (!spec.evaluator) throw SizeMismatch("flux specification has no evaluator");
  if (x_ref.size() != d || u_ref.size() != n || p_ref.size() != d) {
    throw SizeMismatch("reference state does not match flux dimensions");
  }
  for (const auto& p : p_ref) {
    if (p.size() != n) throw SizeMismatch("reference gradient component has wrong length");
  }

  Vector u(u_ref.begin(), u_ref.end());
  std::vector<Vector> p(p_ref.begin(), p_ref.end());
  auto eval = [&] {
    Vector f = spec.evaluator(x_ref, u, p);
    if (f.size() != n) throw SizeMismatch("flux evaluator returned wrong length");
    require_finite(f, "probe");
    return f;
  };
  require_finite(u_ref, "reference state");

  Matrix source(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double h = fd_step(u_ref[j]);
    u[j] = u_ref[j] + h;
    const Vector fp = eval();
    u[j] = u_ref[j] - h;
    const Vector fm = eval();
    u[j] = u_ref[j];
    for (std::size_t i = 0; i < n; ++i) source(i, j) = (fp[i] - fm[i]) / (2.0 * h);
  }

  std::vector<SymMatrix> jacobians;
  for (std::size_t k = 0; k < d; ++k) {
    Matrix a(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double ref = p_ref[k][j];
      const double h = fd_step(ref);
      p[k][j] = ref + h;
      const Vector fp = eval();
      p[k][j] = ref - h;
      const Vector fm = eval();
      p[k][j] = ref;
      for (std::size_t i = 0; i < n; ++i) a(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    }
    try {
      jacobians.push_back(SymMatrix::from_near_symmetric(a, 1e-6));
    } catch (const NotSymmetric&) {
      throw NotSymmetric("linearized Jacobian A^(" + std::to_string(k + 1) +
                         ") is not symmetric; the flux is not in symmetric form");
    }
  }
  return HyperbolicSystem(std::move(jacobians), std::move(source), "linearized");
}

FluxSpec euler_primitive_flux(const EulerScenario& scenario) {
  scenario.validate();
  const double a2 = scenario.a_bar * scenario.a_bar;
  FluxSpec spec;
  spec.d = 2;
  spec.n = 3;
  spec.evaluator = [a2](std::span<const double>, std::span<const double> u, std::span<const Vector> p) {
    const double r = u[0];
    const double v1 = u[1];
    const double v2 = u[2];
    const auto& px = p[0];
    const auto& py = p[1];
    return Vector{v1 * px[0] + v2 * py[0] + r * (px[1] + py[2]),
                  v1 * px[1] + v2 * py[1] + a2 / r * px[0],
                  v1 * px[2] + v2 * py[2] + a2 / r * py[0]};
  };
  return spec;
}

HyperbolicSystem random_constant_system(std::uint64_t seed, std::size_t d, std::size_t n) {
  if (d == 0 || d > 3 || n == 0) throw std::invalid_argument("random system needs d in 1..3 and n >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::vector<SymMatrix> jac;
  for (std::size_t k = 0; k < d; ++k) {
    Matrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = entry(rng);
    }
    jac.emplace_back(a);
  }
  return HyperbolicSystem(std::move(jac), Matrix(n), "random seed " + std::to_string(seed));
}

}  // namespace hypstab
