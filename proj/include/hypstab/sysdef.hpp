#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hypstab/symlin.hpp"

namespace hypstab {

// Constant-coefficient linear symmetric hyperbolic system
//   w_t + sum_k A^(k) w_{x_k} + B w = 0
// in d space dimensions with state size n.
class HyperbolicSystem {
 public:
  HyperbolicSystem(std::vector<SymMatrix> jacobians, Matrix source, std::string label = {});

  std::size_t dimension() const { return jacobians_.size(); }
  std::size_t state_size() const { return source_.size(); }
  const std::vector<SymMatrix>& jacobians() const { return jacobians_; }
  const SymMatrix& jacobian(std::size_t k) const { return jacobians_.at(k); }
  const Matrix& source() const { return source_; }
  // (B + B^T)/2
  SymMatrix source_symmetric_part() const;
  const std::string& label() const { return label_; }

  // Sum_k nu_k A^(k) for a unit direction nu.
  SymMatrix pencil(std::span<const double> nu) const { return assemble_pencil(jacobians_, nu); }
  // Sum_k m_k A^(k) for arbitrary coefficients m.
  SymMatrix combination(std::span<const double> m) const;

 private:
  std::vector<SymMatrix> jacobians_;
  Matrix source_;
  std::string label_;
};

// Reference state of the linearized barotropic Euler equations. State
// variables are (r, v1, v2) with r = a_bar / rho_bar * rho.
struct EulerScenario {
  double rho_bar = 1.0;
  std::array<double, 2> v_bar{0.0, 0.0};
  double a_bar = 1.0;

  void validate() const;
  double speed() const;
  bool supersonic() const { return speed() > a_bar; }
};

// Density perturbation to the symmetrized variable r.
double euler_density_to_r(const EulerScenario& s, double rho);
double euler_r_to_density(const EulerScenario& s, double r);

HyperbolicSystem euler_symmetrized(const EulerScenario& scenario);

// Closed-form eigenpairs of the Euler pencil for direction nu: eigenvalues
// (nu.v - a, nu.v, nu.v + a) and the matching orthonormal eigenvectors.
EigenDecomposition euler_eigenstructure(const EulerScenario& scenario, std::span<const double> nu);

// q = T(nu)^T w for w = (r, v1, v2).
Vector characteristic_transform(const EulerScenario& scenario, std::span<const double> nu,
                                std::span<const double> w);
// w = T(nu) q.
Vector characteristic_inverse(const EulerScenario& scenario, std::span<const double> nu,
                              std::span<const double> q);

// F(x, u, p_1..p_d) of u_t + F(x, u, grad u) = 0.
struct FluxSpec {
  using Evaluator =
      std::function<Vector(std::span<const double> x, std::span<const double> u, std::span<const Vector> p)>;

  std::size_t d = 0;
  std::size_t n = 0;
  Evaluator evaluator;
};

// B = dF/du and A^(k) = dF/dp_k at the reference state, by central
// differences with step 1e-5 * (1 + |reference component|). Throws
// NotSymmetric if some A^(k) has asymmetry above 1e-6 * (1 + max|A^(k)|).
HyperbolicSystem linearize_flux(const FluxSpec& spec, std::span<const double> x_ref, std::span<const double> u_ref,
                                std::span<const Vector> p_ref);

// Primitive-variable barotropic Euler flux with constant sound speed, written
// in (r, v1, v2). Its linearization at (a_bar, v_bar) with zero gradients
// reproduces euler_symmetrized.
FluxSpec euler_primitive_flux(const EulerScenario& scenario);

// Seeded system with symmetric Jacobian entries uniform in [-1, 1] and B = 0.
HyperbolicSystem random_constant_system(std::uint64_t seed, std::size_t d, std::size_t n);

}  // namespace hypstab
