#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "psmds/datasets.hpp"
#include "psmds/errors.hpp"
#include "psmds/geodesic.hpp"
#include "psmds/objective.hpp"
#include "psmds/pattern_search.hpp"
#include "unit/support.hpp"

using namespace psmds;
using psmds::testing::max_abs_diff;
using psmds::testing::random_points;

namespace {

double mean_square(const DissimilarityMatrix& t) {
  double s = 0.0;
  for (double v : t.data()) s += v * v;
  return s / static_cast<double>(t.data().size());
}

// r0 * 2^-m for some integer m >= 0, tested exactly.
bool is_dyadic_fraction_of(double radius, double r0) {
  double r = r0;
  for (int m = 0; m < 1100; ++m) {
    if (radius == r) return true;
    if (radius > r) return false;
    r /= 2.0;
  }
  return false;
}

}  // namespace

TEST_SUITE("pattern_search") {

TEST_CASE("search_directions examples") {
  const auto s = search_directions(1.0, 2);
  REQUIRE(s.size() == 4);
  const Matrix m = s.as_matrix();
  std::set<std::pair<double, double>> rows;
  for (std::size_t k = 0; k < 4; ++k) rows.insert({m(k, 0), m(k, 1)});
  CHECK(rows == std::set<std::pair<double, double>>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  // stacked [rI; -rI]
  CHECK(m == Matrix{{1, 0}, {0, 1}, {-1, 0}, {0, -1}});

  const auto half = search_directions(0.5, 1);
  REQUIRE(half.size() == 2);
  CHECK(half[0] == SearchDirection{0, 0.5});
  CHECK(half[1] == SearchDirection{0, -0.5});

  const auto three = search_directions(2.0, 3);
  CHECK(three.size() == 6);
  const Matrix m3 = three.as_matrix();
  for (std::size_t k = 0; k < 6; ++k) {
    int nonzero = 0;
    for (std::size_t l = 0; l < 3; ++l)
      if (m3(k, l) != 0.0) {
        ++nonzero;
        CHECK(std::abs(m3(k, l)) == 2.0);
      }
    CHECK(nonzero == 1);
  }

  CHECK_THROWS_AS(search_directions(0.0, 2), InvalidArgument);
  CHECK_THROWS_AS(search_directions(1.0, 0), InvalidArgument);
}

TEST_CASE("sample_directions examples") {
  std::mt19937_64 rng(3);
  const auto full = search_directions(1.0, 4);
  const auto same = sample_directions(full, 1.0, rng);
  REQUIRE(same.size() == full.size());
  for (std::size_t k = 0; k < full.size(); ++k) CHECK(same[k] == full[k]);

  for (int trial = 0; trial < 20; ++trial) {
    const auto half = sample_directions(full, 0.5, rng);
    REQUIRE(half.size() == 4);
    std::set<std::size_t> axes;
    for (const auto& d : half) axes.insert(d.axis);
    CHECK(axes.size() == 2);
    // both signs of every kept axis
    for (std::size_t a : axes) {
      int pos = 0, neg = 0;
      for (const auto& d : half)
        if (d.axis == a) (d.step > 0 ? pos : neg)++;
      CHECK(pos == 1);
      CHECK(neg == 1);
    }
  }

  const auto one = sample_directions(search_directions(1.0, 1), 0.5, rng);
  CHECK(one.size() == 2);

  CHECK_THROWS_AS(sample_directions(full, 0.0, rng), InvalidArgument);
  CHECK_THROWS_AS(sample_directions(full, 1.5, rng), InvalidArgument);
}

TEST_CASE("sample_directions draws axes uniformly") {
  std::mt19937_64 rng(11);
  const auto full = search_directions(1.0, 5);
  std::vector<int> hits(5, 0);
  const int trials = 5000;
  for (int t = 0; t < trials; ++t)
    for (const auto& d : sample_directions(full, 0.4, rng))
      if (d.step > 0) ++hits[d.axis];
  // each axis kept with probability 2/5
  for (int h : hits) CHECK(std::abs(h / static_cast<double>(trials) - 0.4) < 0.03);
}

TEST_CASE("uniform_initialization lies in the unit cube and is seeded") {
  const auto a = uniform_initialization(50, 3, 42);
  for (double v : a.flat()) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  CHECK(a == uniform_initialization(50, 3, 42));
  CHECK_FALSE(a == uniform_initialization(50, 3, 43));
}

TEST_CASE("optimal_move examples") {
  const DissimilarityMatrix t{{0, 2}, {2, 0}};
  SUBCASE("brute force over both candidates") {
    SearchState state(t, PointMatrix{{0}, {1}});
    const auto dirs = search_directions(1.0, 1);
    // candidate x0 = +1 -> d = 0 -> mse (4 + 4) / 4 = 2; x0 = -1 -> d = 2 -> 0
    const auto r = optimal_move(state, 0, dirs, std::numeric_limits<double>::infinity());
    REQUIRE(r.direction.has_value());
    CHECK(*r.direction == 1);
    CHECK(state.points()(0, 0) == -1.0);
    CHECK(r.error == 0.0);
    CHECK(state.distances()(0, 1) == 2.0);
  }
  SUBCASE("monotone mode refuses worsening moves") {
    SearchState state(t, PointMatrix{{0}, {2}});  // already exact
    const double before = state.error();
    const auto r = optimal_move(state, 0, search_directions(0.5, 1), state.error());
    CHECK_FALSE(r.direction.has_value());
    CHECK(r.error == before);
    CHECK(state.points()(0, 0) == 0.0);
  }
  SUBCASE("bad-moves mode takes the least bad candidate") {
    SearchState state(t, PointMatrix{{0}, {2}});
    const auto r = optimal_move(state, 0, search_directions(0.5, 1), std::numeric_limits<double>::infinity());
    REQUIRE(r.direction.has_value());
    // +0.5 -> d = 1.5, -0.5 -> d = 2.5: equal error, lowest index wins
    CHECK(*r.direction == 0);
    CHECK(state.points()(0, 0) == 0.5);
    CHECK(r.error == doctest::Approx(2.0 * 0.25 / 4.0));
  }
}

TEST_CASE("optimal_move matches brute-force candidate evaluation") {
  const auto truth = random_points(25, 3, 1);
  const auto t = pairwise_distances(truth);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SearchState state(t, random_points(25, 3, 200 + seed));
    const auto dirs = search_directions(0.1, 3);
    const std::size_t i = seed * 3;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      PointMatrix moved = state.points();
      moved(i, dirs[k].axis) += dirs[k].step;
      const double e = mse_stress(t, pairwise_distances(moved));
      if (e < best) {
        best = e;
        best_k = k;
      }
    }
    const auto r = optimal_move(state, i, dirs, std::numeric_limits<double>::infinity());
    REQUIRE(r.direction.has_value());
    CHECK(*r.direction == best_k);
    CHECK(r.error == doctest::Approx(best).epsilon(1e-12));
    CHECK(max_abs_diff(state.distances(), pairwise_distances(state.points())) == 0.0);
  }
}

TEST_CASE("fit recovers a realizable configuration in monotone mode") {
  const auto truth = random_points(10, 2, 5);
  const auto t = pairwise_distances(truth);
  SolverConfig cfg;
  cfg.allow_bad_moves = false;
  cfg.seed = 3;
  const auto r = fit(t, 2, cfg);
  CHECK(r.final_error < 1e-4 * mean_square(t));
  CHECK(r.trace.termination_reason == TerminationReason::radius_below_delta);
  CHECK(mse_stress(t, pairwise_distances(r.embedding)) == doctest::Approx(r.final_error).epsilon(1e-9));
}

TEST_CASE("fit on a single point") {
  const DissimilarityMatrix t(1);
  const auto r = fit(t, 2, SolverConfig{});
  CHECK(r.embedding == uniform_initialization(1, 2, 0));
  CHECK(r.trace.epochs() == 0);
  CHECK(r.final_error == 0.0);
}

TEST_CASE("fit is deterministic") {
  const auto t = pairwise_distances(random_points(30, 3, 6));
  SolverConfig cfg;
  cfg.seed = 17;
  cfg.direction_sample_fraction = 0.5;
  const auto a = fit(t, 3, cfg);
  const auto b = fit(t, 3, cfg);
  CHECK(a.embedding == b.embedding);
  REQUIRE(a.trace.records.size() == b.trace.records.size());
  for (std::size_t k = 0; k < a.trace.records.size(); ++k) {
    CHECK(a.trace.records[k].error == b.trace.records[k].error);
    CHECK(a.trace.records[k].radius == b.trace.records[k].radius);
  }
  CHECK(a.trace.metadata == b.trace.metadata);
}

TEST_CASE("fit records configuration in the trace metadata") {
  const auto t = pairwise_distances(random_points(12, 2, 7));
  SolverConfig cfg;
  cfg.seed = 9;
  const auto r = fit(t, 2, cfg);
  CHECK(r.trace.metadata.at("radius_source") == "auto");
  CHECK(std::stod(r.trace.metadata.at("initial_radius")) == r.initial_radius);
  CHECK(r.trace.metadata.at("seed") == "9");
  CHECK(r.trace.records.front().epoch == 0);
  CHECK(r.trace.records.front().radius == r.initial_radius);

  cfg.initial_radius = 0.25;
  const auto e = fit(t, 2, cfg);
  CHECK(e.initial_radius == 0.25);
  CHECK(e.trace.metadata.at("radius_source") == "explicit");
}

TEST_CASE("config validation") {
  SolverConfig cfg;
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.initial_radius = 1e-5;  // not above delta
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.direction_sample_fraction = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.max_epochs = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.recompute_every = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("max_epochs cap ends the run with best-so-far") {
  const auto t = pairwise_distances(random_points(20, 2, 8));
  SolverConfig cfg;
  cfg.initial_radius = 0.5;
  cfg.max_epochs = 3;
  const auto r = fit(t, 2, cfg);
  CHECK(r.trace.termination_reason == TerminationReason::max_epochs);
  CHECK(r.trace.epochs() == 3);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& rec : r.trace.records)
    if (rec.epoch > 0) best = std::min(best, rec.error);
  CHECK(r.final_error <= best);
}

TEST_CASE("monotone mode: epoch-end errors never increase") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto t = pairwise_distances(random_points(40, 3, seed + 30));
    SolverConfig cfg;
    cfg.allow_bad_moves = false;
    cfg.seed = seed;
    cfg.direction_sample_fraction = seed % 2 ? 0.5 : 1.0;
    const auto r = fit(t, 2, cfg);
    for (std::size_t k = 1; k < r.trace.records.size(); ++k)
      REQUIRE(r.trace.records[k].error <= r.trace.records[k - 1].error);
  }
}

TEST_CASE("radius schedule is r0 * 2^-m and ends below delta") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto t = pairwise_distances(random_points(30, 2, seed + 60));
    SolverConfig cfg;
    cfg.seed = seed;
    cfg.allow_bad_moves = seed % 2 == 0;
    const auto r = fit(t, 2, cfg);
    for (std::size_t k = 0; k < r.trace.records.size(); ++k) {
      CHECK(is_dyadic_fraction_of(r.trace.records[k].radius, r.initial_radius));
      if (k > 0) CHECK(r.trace.records[k].radius <= r.trace.records[k - 1].radius);
    }
    CHECK(r.trace.termination_reason == TerminationReason::radius_below_delta);
    CHECK(r.final_radius < cfg.delta);
    CHECK(r.trace.records.back().radius < r.initial_radius);
  }
}

TEST_CASE("distances at every epoch boundary match recomputation") {
  const auto t = pairwise_distances(random_points(50, 10, 2));
  SolverConfig cfg;
  cfg.seed = 4;
  cfg.initial_radius = 0.5;
  cfg.max_epochs = 40;
  double worst = 0.0;
  fit(t, 10, cfg, [&](std::size_t, const SearchState& s) {
    worst = std::max(worst, max_abs_diff(s.distances(), pairwise_distances(s.points())));
  });
  CHECK(worst <= 1e-6);
}

TEST_CASE("per-epoch work is N * (N - 1) * candidates") {
  const std::size_t n = 30, dim = 6;
  const auto t = pairwise_distances(random_points(n, dim, 3));
  for (double fraction : {1.0, 0.5, 0.2}) {
    SolverConfig cfg;
    cfg.initial_radius = 0.5;
    cfg.max_epochs = 5;
    cfg.direction_sample_fraction = fraction;
    const auto r = fit(t, dim, cfg);
    const auto axes = static_cast<std::uint64_t>(std::ceil(fraction * dim - 1e-12));
    const std::uint64_t per_epoch = n * (n - 1) * 2 * axes;
    CHECK(r.distance_evaluations == per_epoch * r.trace.epochs());
  }
}

TEST_CASE("auto_radius") {
  const auto truth = random_points(40, 2, 12, 0.0, 1.0);
  const auto t = pairwise_distances(truth);
  SolverConfig cfg;
  cfg.seed = 5;

  SUBCASE("chosen radius does not increase the error in a dry run") {
    const double r = auto_radius(t, 2, cfg);
    CHECK(r > 0.0);
    const auto start = uniform_initialization(40, 2, cfg.seed);
    SearchState state(t, start);
    const double e0 = state.error();
    const auto dirs = search_directions(r, 2);
    for (std::size_t i = 0; i < 40; ++i) optimal_move(state, i, dirs, std::numeric_limits<double>::infinity());
    CHECK(state.refresh_error() <= e0);
  }
  SUBCASE("radius grows with the data scale") {
    const double small = auto_radius(t, 2, cfg);
    const double large = auto_radius(t.scaled(1000.0), 2, cfg);
    CHECK(large > small);
  }
  SUBCASE("zero probe budget returns the configured radius") {
    cfg.radius_probes = 0;
    cfg.initial_radius = 0.75;
    CHECK(auto_radius(t, 2, cfg) == 0.75);
    cfg.initial_radius.reset();
    CHECK(auto_radius(t, 2, cfg) == 1.0);
  }
  SUBCASE("probes are powers of two from the start radius") {
    const double r = auto_radius(t.scaled(1000.0), 2, cfg);
    CHECK(std::log2(r) == std::round(std::log2(r)));
  }
}

TEST_CASE("bad moves reach a final error no worse than monotone mode") {
  // 5 seeded trials per shape; the claim is statistical. Both shapes are
  // sampled densely enough that k = 12 follows the manifold.
  for (const auto& cloud : {swissroll(1000, false, Sparsity::dense, 2), clusters_3d(500, 3, 4)}) {
    const auto geo = geodesic_from_points(cloud.points, 12);
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      SolverConfig cfg;
      cfg.seed = seed;
      cfg.allow_bad_moves = true;
      const double bad = fit(geo.distances, 2, cfg).final_error;
      cfg.allow_bad_moves = false;
      const double mono = fit(geo.distances, 2, cfg).final_error;
      if (bad <= mono) ++wins;
    }
    CHECK(wins >= 4);
  }
}

}  // TEST_SUITE
