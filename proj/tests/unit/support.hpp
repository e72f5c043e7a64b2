#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "hypstab/symlin.hpp"

namespace testing {

inline hypstab::SymMatrix random_symmetric(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  hypstab::Matrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = u(rng);
  }
  return hypstab::SymMatrix(a);
}

inline hypstab::Vector random_unit(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> g;
  hypstab::Vector v(d);
  double s = 0.0;
  for (auto& x : v) {
    x = g(rng);
    s += x * x;
  }
  for (auto& x : v) x /= std::sqrt(s);
  return v;
}

// det(A - lambda Id) for n <= 3 by cofactor expansion.
inline double char_poly(const hypstab::SymMatrix& a, double lambda) {
  const std::size_t n = a.size();
  auto m = [&](std::size_t i, std::size_t j) { return a(i, j) - (i == j ? lambda : 0.0); };
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

}  // namespace testing
