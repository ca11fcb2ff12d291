#pragma once

#include <cstdint>
#include <random>

#include "psmds/linalg.hpp"

namespace psmds::testing {

// Test data comes from a different engine and range than the solvers'
// uniform_initialization, so a fixture never coincides with a solver start.
inline PointMatrix random_points(std::size_t n, std::size_t dim, std::uint64_t seed,
                                 double lo = -1.0, double hi = 1.0) {
  std::mt19937 rng(static_cast<std::uint32_t>(seed * 2654435761u + 17u));
  std::uniform_real_distribution<double> u(lo, hi);
  PointMatrix x(n, dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < dim; ++l) x(i, l) = u(rng);
  return x;
}

inline Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
  std::mt19937 rng(static_cast<std::uint32_t>(seed + 101));
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = g(rng);
  return m;
}

inline double max_abs_diff(const DissimilarityMatrix& a, const DissimilarityMatrix& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
  return worst;
}

}  // namespace psmds::testing
