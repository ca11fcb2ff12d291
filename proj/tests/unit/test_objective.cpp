#include <doctest.h>

#include <cmath>
#include <random>

#include "psmds/errors.hpp"
#include "psmds/objective.hpp"
#include "unit/support.hpp"

using namespace psmds;
using psmds::testing::max_abs_diff;
using psmds::testing::random_points;

TEST_SUITE("objective") {

TEST_CASE("mse_stress examples") {
  const DissimilarityMatrix t{{0, 2}, {2, 0}};
  CHECK(mse_stress(t, t) == 0.0);
  CHECK(mse_stress(t, DissimilarityMatrix(2)) == 2.0);
  CHECK(mse_stress(t, DissimilarityMatrix{{0, 1}, {1, 0}}) == 0.5);
  CHECK_THROWS_AS(mse_stress(t, DissimilarityMatrix(3)), InvalidArgument);
}

TEST_CASE("raw_stress examples") {
  const auto x = random_points(6, 2, 1);
  const auto delta = pairwise_distances(x);
  Matrix w(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j <= i; ++j) w(i, j) = w(j, i) = 0.5 + static_cast<double>(i + j);
  CHECK(raw_stress(delta, x, WeightMatrix(w)) == 0.0);

  const DissimilarityMatrix two{{0, 2}, {2, 0}};
  CHECK(raw_stress(two, PointMatrix{{0}, {1}}, WeightMatrix::uniform(2)) == 2.0);
  CHECK(raw_stress(two, PointMatrix{{0}, {1}}, WeightMatrix::uniform(2, 0.0)) == 0.0);
  CHECK_THROWS_AS(raw_stress(two, PointMatrix{{0}, {1}, {2}}, WeightMatrix::uniform(2)), InvalidArgument);
}

TEST_CASE("weight matrices are validated") {
  CHECK_THROWS_AS((WeightMatrix{{0, 1}, {2, 0}}), InvalidArgument);
  CHECK_THROWS_AS((WeightMatrix{{0, -1}, {-1, 0}}), InvalidArgument);
  CHECK((WeightMatrix{{7, 1}, {1, 0}}).is_uniform());
  CHECK_FALSE((WeightMatrix{{0, 1, 1}, {1, 0, 2}, {1, 2, 0}}).is_uniform());
}

TEST_CASE("stress_1 examples") {
  const auto x = random_points(5, 3, 2);
  CHECK(stress_1(pairwise_distances(x), x) == 0.0);
  CHECK(stress_1(DissimilarityMatrix{{0, 2}, {2, 0}}, PointMatrix{{0}, {1}}) == 1.0);
  CHECK(stress_1(DissimilarityMatrix{{0, 1}, {1, 0}}, PointMatrix{{0}, {2}}) == 0.5);
  CHECK_THROWS_AS(stress_1(DissimilarityMatrix{{0, 1}, {1, 0}}, PointMatrix{{3}, {3}}),
                  DegenerateConfiguration);
}

TEST_CASE("mse_stress times N^2 equals unweighted raw stress") {
  // N = 16 makes the 1/N^2 scaling exact in binary floating point.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto delta = pairwise_distances(random_points(16, 3, seed));
    const auto x = random_points(16, 2, seed + 100);
    CHECK(mse_stress(delta, pairwise_distances(x)) * 256.0 ==
          raw_stress(delta, x, WeightMatrix::uniform(16)));
  }
}

TEST_CASE("stress functionals are non-negative and vanish on exact embeddings") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto x = random_points(12, 2, seed);
    const auto y = random_points(12, 2, seed + 50);
    const auto delta = pairwise_distances(x);
    CHECK(mse_stress(delta, pairwise_distances(y)) >= 0.0);
    CHECK(raw_stress(delta, y, WeightMatrix::uniform(12)) >= 0.0);
    CHECK(stress_1(delta, y) >= 0.0);
    CHECK(mse_stress(delta, pairwise_distances(x)) == 0.0);
    CHECK(raw_stress(delta, x, WeightMatrix::uniform(12)) == 0.0);
    CHECK(stress_1(delta, x) == 0.0);
  }
}

TEST_CASE("incremental_distance_update examples") {
  SUBCASE("null move") {
    auto x = random_points(8, 3, 4);
    auto d = pairwise_distances(x);
    const auto before = d;
    incremental_distance_update(d, x, 3, 1, x(3, 1));
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) {
        if (i == 3 || j == 3) {
          CHECK(std::abs(d(i, j) - before(i, j)) <= 1e-12);
        } else {
          CHECK(d(i, j) == before(i, j));
        }
      }
  }
  SUBCASE("hand computed") {
    PointMatrix x{{0}, {1}};
    auto d = pairwise_distances(x);
    incremental_distance_update(d, x, 0, 0, -1.0);
    CHECK(x(0, 0) == -1.0);
    CHECK(d(0, 1) == 2.0);
    CHECK(d(1, 0) == 2.0);
    CHECK(d(0, 0) == 0.0);
  }
  SUBCASE("random move matches recomputation") {
    auto x = random_points(20, 5, 5);
    auto d = pairwise_distances(x);
    incremental_distance_update(d, x, 7, 2, 0.8);
    CHECK(max_abs_diff(d, pairwise_distances(x)) <= 1e-9);
  }
  SUBCASE("bad indices") {
    auto x = random_points(4, 2, 6);
    auto d = pairwise_distances(x);
    CHECK_THROWS_AS(incremental_distance_update(d, x, 4, 0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(incremental_distance_update(d, x, 0, 2, 0.0), InvalidArgument);
  }
}

TEST_CASE("incremental updates stay close to recomputation over 1000 moves") {
  auto x = random_points(30, 4, 8);
  auto d = pairwise_distances(x);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::size_t> pick_i(0, 29), pick_l(0, 3);
  std::uniform_real_distribution<double> step(-0.5, 0.5);
  for (int m = 0; m < 1000; ++m) {
    const std::size_t i = pick_i(rng), l = pick_l(rng);
    incremental_distance_update(d, x, i, l, x(i, l) + step(rng));
  }
  CHECK(max_abs_diff(d, pairwise_distances(x)) <= 1e-6);
}

TEST_CASE("radicand cancellation is clamped to zero") {
  // Two points separated on axis 0 only; moving point 0 onto point 1 makes the
  // radicand d^2 - before^2 + after^2 cancel exactly or go slightly negative.
  PointMatrix x{{0.1, 0.0}, {0.3, 0.0}};
  auto d = pairwise_distances(x);
  incremental_distance_update(d, x, 0, 0, 0.3);
  CHECK(d(0, 1) >= 0.0);
  CHECK(d(0, 1) < 1e-7);
  CHECK_FALSE(std::isnan(d(0, 1)));
}

TEST_CASE("moved_distances leaves inputs untouched") {
  const auto x = random_points(10, 3, 10);
  const auto d = pairwise_distances(x);
  std::vector<double> out(10);
  moved_distances(d, x, 2, 1, 0.25, out);
  CHECK(out[2] == 0.0);
  PointMatrix moved = x;
  moved(2, 1) = 0.25;
  const auto full = pairwise_distances(moved);
  for (std::size_t j = 0; j < 10; ++j) CHECK(std::abs(out[j] - full(2, j)) <= 1e-12);
  CHECK(d == pairwise_distances(x));
}

}  // TEST_SUITE
