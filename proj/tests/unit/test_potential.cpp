#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "hypstab/errors.hpp"
#include "hypstab/potential.hpp"

using namespace hypstab;

namespace {

HyperbolicSystem euler(double v1, double v2 = 0.0, double a = 1.0) {
  return euler_symmetrized(EulerScenario{1.0, {v1, v2}, a});
}

HyperbolicSystem diagonal_source(double beta, std::size_t d = 2, std::size_t n = 2) {
  std::vector<SymMatrix> jac(d, SymMatrix(n));
  Matrix b(n);
  for (std::size_t i = 0; i < n; ++i) b(i, i) = beta;
  return HyperbolicSystem(jac, b);
}

}  // namespace

TEST_CASE("potential value is the dot product") {
  CHECK(potential_value(LyapunovPotential::zero(2), std::vector<double>{3.0, -4.0}) == 0.0);
  const auto p = LyapunovPotential::make({-2.0, 0.0}, 1.0);
  CHECK(potential_value(p, std::vector<double>{1.0, 0.5}) == -2.0);
  CHECK(potential_value(p, std::vector<double>{0.0, 0.0}) == 0.0);
}

TEST_CASE("potential constants are validated") {
  CHECK_THROWS_AS(LyapunovPotential::make({0.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(LyapunovPotential::make({0.0}, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(LyapunovPotential::make({0.0}, 1.0, -0.5), std::invalid_argument);
  const auto p = LyapunovPotential::make({-1.0, 2.0}, 3.0, 1.0);
  CHECK(p.C_L == doctest::Approx(2.0));
  CHECK(p.normalized_coefficients() == Vector{1.0 / 3.0, -2.0 / 3.0});
}

TEST_CASE("lmi_check closed-form cases") {
  const auto sup = euler(3.0);
  CHECK_FALSE(lmi_check(sup, std::vector<double>{0.0, 0.0}, 0.5));
  // -Id + A1 has eigenvalues {1, 2, 3}, so m = -C (1, 0) passes for every C
  for (double C : {0.1, 1.0, 7.5}) {
    CHECK(lmi_check(sup, std::vector<double>{-C, 0.0}, C));
    CHECK_FALSE(lmi_check(sup, std::vector<double>{-0.9 * C / 2.0, 0.0}, C));
  }
  // subsonic: max eig of sum m_k A_k is |m| (m_hat.v + a) > 0
  const auto sub = euler(0.5);
  for (double mx = -10.0; mx <= 10.0; mx += 0.5) {
    for (double my = -10.0; my <= 10.0; my += 0.5) CHECK_FALSE(lmi_check(sub, std::vector<double>{mx, my}, 1.0));
  }
}

TEST_CASE("remainder check matches the plain check when B = 0") {
  const auto sup = euler(3.0);
  const std::vector<Vector> pts{{0.0, 0.0}, {1.0, 1.0}};
  for (double mx : {-1.0, -0.4, 0.0, 0.3}) {
    const std::vector<double> m{mx, 0.1};
    CHECK(lmi_check_with_remainder(sup, m, 1.0, pts) == lmi_check(sup, m, 1.0));
  }
}

TEST_CASE("remainder with B = beta Id and m = 0 holds iff C <= 2 beta") {
  const std::vector<Vector> pts{{0.5, 0.5}};
  const auto s = diagonal_source(0.75);
  CHECK(lmi_check_with_remainder(s, std::vector<double>{0.0, 0.0}, 1.5, pts));
  CHECK(lmi_check_with_remainder(s, std::vector<double>{0.0, 0.0}, 1.0, pts));
  CHECK_FALSE(lmi_check_with_remainder(s, std::vector<double>{0.0, 0.0}, 1.6, pts));
}

TEST_CASE("remainder includes the divergence of variable Jacobians") {
  VariableSystem vs;
  vs.d = 1;
  vs.n = 1;
  vs.jacobian = [](std::size_t, std::span<const double> x) { return SymMatrix(1, {3.0 * x[0] * x[0]}); };
  vs.source = [](std::span<const double>) { return Matrix(1); };
  const auto r = lmi_remainder(vs, std::vector<double>{0.5});
  CHECK(r(0, 0) == doctest::Approx(3.0).epsilon(1e-8));
  const std::vector<Vector> pts{{0.0}, {0.5}, {1.0}};
  CHECK(estimate_source_bound(vs, pts) == doctest::Approx(6.0).epsilon(1e-8));
}

TEST_CASE("source bound") {
  const std::vector<Vector> pts{{0.0, 0.0}};
  CHECK(estimate_source_bound(euler(3.0), pts) == 0.0);
  CHECK(estimate_source_bound(diagonal_source(-1.0), pts) == doctest::Approx(2.0));
  CHECK(estimate_source_bound(diagonal_source(0.4), pts) == 0.0);
}

TEST_CASE("find_potential on supersonic Euler") {
  const auto s = euler(3.0);
  const auto r = find_potential(s, 0.0);
  REQUIRE(r.feasible());
  const auto& p = *r.potential;
  CHECK(p.C_B == 0.0);
  CHECK(p.C_A == 1.0);
  CHECK(p.C_L == 1.0);
  const double norm = std::hypot(p.m[0], p.m[1]);
  CHECK(p.m[0] / norm * 3.0 < -1.0);
  CHECK(lmi_check(s, p.m, p.C_A));

  // oblique supersonic flow still needs m_hat.v < -a
  const auto t = euler(1.5, -1.5);
  const auto q = find_potential(t, 0.0);
  REQUIRE(q.feasible());
  const double nq = std::hypot(q.potential->m[0], q.potential->m[1]);
  CHECK((q.potential->m[0] * 1.5 - q.potential->m[1] * 1.5) / nq < -1.0);
  CHECK(lmi_check(t, q.potential->m, 1.0));
}

TEST_CASE("find_potential infeasible cases") {
  const auto sub = find_potential(euler(0.5), 0.0);
  CHECK_FALSE(sub.feasible());
  CHECK(sub.best_value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_FALSE(find_potential(diagonal_source(0.0), 0.0).feasible());
  CHECK_THROWS_AS(find_potential(euler(3.0), -1.0), std::invalid_argument);
}

TEST_CASE("C_A choice follows the source bound or the override") {
  const auto s = euler(3.0);
  const auto a = find_potential(s, 0.5);
  REQUIRE(a.feasible());
  CHECK(a.potential->C_A == doctest::Approx(2.0));
  CHECK(a.potential->C_L == doctest::Approx(1.5));
  CHECK(lmi_check(s, a.potential->m, 2.0));
  const auto b = find_potential(s, 0.0, 4.0);
  REQUIRE(b.feasible());
  CHECK(b.potential->C_A == 4.0);
  CHECK(lmi_check(s, b.potential->m, 4.0));
}

TEST_CASE("find_potential in one and three dimensions") {
  const HyperbolicSystem adv({SymMatrix(1, {2.0})}, Matrix(1));
  const auto r = find_potential(adv, 0.0);
  REQUIRE(r.feasible());
  CHECK(r.potential->m[0] < 0.0);
  CHECK(lmi_check(adv, r.potential->m, 1.0));

  const HyperbolicSystem d3({SymMatrix(1, {1.0}), SymMatrix(1, {-1.0}), SymMatrix(1, {0.5})}, Matrix(1));
  const auto t = find_potential(d3, 0.0);
  REQUIRE(t.feasible());
  CHECK(lmi_check(d3, t.potential->m, 1.0));
}

TEST_CASE("remainder-mode search") {
  // zero Jacobians: only the source can make the LMI hold
  const auto strong = find_potential_with_remainder(diagonal_source(1.0));
  REQUIRE(strong.feasible());
  CHECK(strong.potential->includes_remainder);
  CHECK(strong.potential->C_B == 0.0);
  CHECK_FALSE(find_potential_with_remainder(diagonal_source(0.25)).feasible());

  // B = 0 reduces to the plain search
  const auto sup = find_potential_with_remainder(euler(3.0));
  REQUIRE(sup.feasible());
  CHECK(lmi_check(euler(3.0), sup.potential->m, 1.0));
  CHECK_FALSE(find_potential_with_remainder(euler(0.5)).feasible());
}

TEST_CASE("grid oracle") {
  const auto sup = grid_scan_lmi(euler(3.0));
  CHECK(sup.feasible);
  CHECK(lmi_check(euler(3.0), sup.witness, 1.0));
  const auto sub = grid_scan_lmi(euler(0.5));
  CHECK_FALSE(sub.feasible);
  CHECK(sub.points_checked == 401u * 401u);

  CHECK(compare_with_grid_oracle(euler(3.0)).agree());
  CHECK(compare_with_grid_oracle(euler(0.5)).agree());
  CHECK(compare_with_grid_oracle(random_constant_system(7, 2, 3)).agree());
}
