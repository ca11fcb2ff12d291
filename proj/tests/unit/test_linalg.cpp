#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "psmds/errors.hpp"
#include "psmds/linalg.hpp"
#include "unit/support.hpp"

using namespace psmds;
using psmds::testing::random_points;
using psmds::testing::random_symmetric;

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

// -1/2 H (D o D) H with explicit dense products.
Eigen::MatrixXd centred_gram_oracle(const DissimilarityMatrix& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXd sq = to_eigen(d.matrix()).cwiseProduct(to_eigen(d.matrix()));
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  return -0.5 * h.transpose() * sq * h;
}

PointMatrix rotate_2d(const PointMatrix& x, double angle, double scale, double tx, double ty) {
  PointMatrix y(x.n_points(), 2);
  const double c = std::cos(angle), s = std::sin(angle);
  for (std::size_t i = 0; i < x.n_points(); ++i) {
    y(i, 0) = scale * (c * x(i, 0) - s * x(i, 1)) + tx;
    y(i, 1) = scale * (s * x(i, 0) + c * x(i, 1)) + ty;
  }
  return y;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("matrix types reject invalid contents") {
  CHECK_THROWS_AS(PointMatrix(0, 2), InvalidArgument);
  CHECK_THROWS_AS(PointMatrix(2, 0), InvalidArgument);
  CHECK_THROWS_AS((PointMatrix{{0.0, NAN}}), InvalidArgument);
  CHECK_THROWS_AS((DissimilarityMatrix{{0, 1}, {2, 0}}), InvalidArgument);
  CHECK_THROWS_AS((DissimilarityMatrix{{1, 1}, {1, 0}}), InvalidArgument);
  CHECK_THROWS_AS((DissimilarityMatrix{{0, -1}, {-1, 0}}), InvalidArgument);
  CHECK_THROWS_AS((DissimilarityMatrix{{0, INFINITY}, {INFINITY, 0}}), InvalidArgument);
  CHECK_THROWS_AS(GramMatrix(Matrix{{1, 0.5}, {0.4, 1}}), InvalidArgument);
  CHECK_NOTHROW(GramMatrix(Matrix{{1, 0.5}, {0.5 + 1e-14, 1}}));
}

TEST_CASE("pairwise_distances examples") {
  const auto two = pairwise_distances(PointMatrix{{0}, {3}});
  CHECK(two == DissimilarityMatrix{{0, 3}, {3, 0}});

  const auto single = pairwise_distances(PointMatrix{{1.5, -2.0}});
  CHECK(single.size() == 1);
  CHECK(single(0, 0) == 0.0);

  const auto tri = pairwise_distances(PointMatrix{{0, 0}, {3, 4}});
  CHECK(tri(0, 1) == 5.0);
  CHECK(tri(1, 0) == 5.0);
}

TEST_CASE("pairwise_distances satisfies the triangle inequality") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto d = pairwise_distances(random_points(40, 3, seed));
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = 0; j < d.size(); ++j)
        for (std::size_t k = 0; k < d.size(); ++k) REQUIRE(d(i, k) <= d(i, j) + d(j, k) + 1e-9);
  }
}

TEST_CASE("double_center examples") {
  const auto b = double_center(DissimilarityMatrix{{0, 1}, {1, 0}});
  CHECK(b(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(b(0, 1) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(b(1, 0) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(b(1, 1) == doctest::Approx(0.25).epsilon(1e-15));

  const auto zero = double_center(DissimilarityMatrix(4));
  for (double v : zero.matrix().data()) CHECK(v == 0.0);

  // 1-D points {0, 1, 2}: Eigen on the hand-centred matrix gives {2, 0, 0}.
  const auto d = pairwise_distances(PointMatrix{{0}, {1}, {2}});
  const auto gram = double_center(d);
  const Eigen::MatrixXd oracle = centred_gram_oracle(d);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(gram(i, j) == doctest::Approx(oracle(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))).epsilon(1e-14));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(oracle);
  CHECK(ref.eigenvalues()(2) == doctest::Approx(2.0).epsilon(1e-12));
  const auto eig = symmetric_eigen(gram.matrix());
  CHECK(eig.values[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(eig.values[1]) < 1e-12);
  CHECK(std::abs(eig.values[2]) < 1e-12);
}

TEST_CASE("double_center rows and columns sum to zero") {
  for (std::size_t n : {2u, 7u, 23u, 50u}) {
    Matrix m = random_symmetric(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = 0.0;
      for (std::size_t j = 0; j < i; ++j) m(i, j) = m(j, i) = std::abs(m(i, j));
    }
    const auto b = double_center(DissimilarityMatrix(m));
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0, col = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        row += b(i, j);
        col += b(j, i);
      }
      CHECK(std::abs(row) <= 1e-9);
      CHECK(std::abs(col) <= 1e-9);
    }
    const Eigen::MatrixXd oracle = centred_gram_oracle(DissimilarityMatrix(m));
    CHECK((to_eigen(b.matrix()) - oracle).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + oracle.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("top_eigenpairs examples") {
  const auto id = top_eigenpairs(GramMatrix(Matrix{{1, 0}, {0, 1}}), 1);
  CHECK(id.values.size() == 1);
  CHECK(id.values[0] == doctest::Approx(1.0));

  const auto diag = top_eigenpairs(GramMatrix(Matrix{{3, 0}, {0, 1}}), 2);
  CHECK(diag.values[0] == doctest::Approx(3.0));
  CHECK(diag.values[1] == doctest::Approx(1.0));
  CHECK(std::abs(diag.vectors(0, 0)) == doctest::Approx(1.0));
  CHECK(diag.vectors(1, 0) == doctest::Approx(0.0));
  CHECK(std::abs(diag.vectors(1, 1)) == doctest::Approx(1.0));

  const auto pair = top_eigenpairs(GramMatrix(Matrix{{0.25, -0.25}, {-0.25, 0.25}}), 1);
  CHECK(pair.values[0] == doctest::Approx(0.5).epsilon(1e-14));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(pair.vectors(0, 0)) == doctest::Approx(s).epsilon(1e-14));
  CHECK(pair.vectors(1, 0) == doctest::Approx(-pair.vectors(0, 0)).epsilon(1e-14));

  CHECK_THROWS_AS(top_eigenpairs(GramMatrix(Matrix{{1}}), 2), InvalidArgument);
  CHECK_THROWS_AS(top_eigenpairs(GramMatrix(Matrix{{1}}), 0), InvalidArgument);
}

TEST_CASE("symmetric_eigen agrees with an independent solver") {
  for (std::size_t n = 1; n <= 30; n += 3) {
    const Matrix m = random_symmetric(n, 1000 + n);
    const auto eig = symmetric_eigen(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(to_eigen(m));
    const auto& ref_values = ref.eigenvalues();  // ascending
    for (std::size_t k = 0; k < n; ++k)
      CHECK(eig.values[k] == doctest::Approx(ref_values(static_cast<Eigen::Index>(n - 1 - k))).epsilon(1e-6));

    for (std::size_t k = 1; k < n; ++k) CHECK(eig.values[k - 1] >= eig.values[k]);
    double scale = 0.0;
    for (double v : eig.values) scale = std::max(scale, std::abs(v));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += eig.vectors(i, a) * eig.vectors(i, b);
        CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
      }
      for (std::size_t i = 0; i < n; ++i) {
        double bv = 0.0;
        for (std::size_t j = 0; j < n; ++j) bv += m(i, j) * eig.vectors(j, a);
        CHECK(std::abs(bv - eig.values[a] * eig.vectors(i, a)) <= 1e-8 * std::max(scale, 1.0));
      }
    }
  }
}

TEST_CASE("eigensolver iteration cap raises instead of returning garbage") {
  const Matrix m = random_symmetric(6, 5);
  CHECK_THROWS_AS(symmetric_eigen(m, EigenOptions{0}), EigenSolverError);
  CHECK_NOTHROW(symmetric_eigen(m, EigenOptions{60}));
}

TEST_CASE("classical_mds_embed examples") {
  const auto two = classical_mds_embed(DissimilarityMatrix{{0, 1}, {1, 0}}, 1);
  CHECK(two.warnings.empty());
  CHECK(std::abs(two.embedding(0, 0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(two.embedding(1, 0) == doctest::Approx(-two.embedding(0, 0)).epsilon(1e-14));

  const auto delta = pairwise_distances(PointMatrix{{0}, {1}, {2}});
  const auto line = classical_mds_embed(delta, 1);
  const auto back = pairwise_distances(line.embedding);
  CHECK(psmds::testing::max_abs_diff(back, delta) < 1e-8);

  const auto zeros = classical_mds_embed(DissimilarityMatrix(5), 2);
  for (std::size_t i = 1; i < 5; ++i)
    for (std::size_t l = 0; l < 2; ++l) CHECK(zeros.embedding(i, l) == doctest::Approx(zeros.embedding(0, l)));
}

TEST_CASE("classical_mds_embed clamps negative eigenvalues and warns") {
  // Four points where the triangle inequality fails badly: not Euclidean.
  const DissimilarityMatrix d{{0, 1, 1, 5}, {1, 0, 1, 1}, {1, 1, 0, 1}, {5, 1, 1, 0}};
  const auto r = classical_mds_embed(d, 4);
  REQUIRE(r.eigenvalues.back() < 0.0);
  CHECK_FALSE(r.warnings.empty());
  for (std::size_t i = 0; i < 4; ++i) CHECK(r.embedding(i, 3) == 0.0);

  const auto padded = classical_mds_embed(DissimilarityMatrix{{0, 1}, {1, 0}}, 3);
  CHECK(padded.embedding.dim() == 3);
  CHECK(padded.warnings.size() >= 1);
}

TEST_CASE("classical MDS reproduces Euclidean-embeddable input") {
  for (std::size_t dim : {1u, 2u, 3u, 5u}) {
    const auto x = random_points(40, dim, 77 + dim);
    const auto delta = pairwise_distances(x);
    const auto r = classical_mds_embed(delta, dim);
    const auto back = pairwise_distances(r.embedding);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < delta.data().size(); ++k) {
      num += std::pow(back.data()[k] - delta.data()[k], 2);
      den += delta.data()[k] * delta.data()[k];
    }
    CHECK(std::sqrt(num / den) < 1e-6);
    CHECK(procrustes_error(r.embedding, x) < 1e-6);
  }
}

TEST_CASE("procrustes_error examples") {
  const auto x = random_points(25, 2, 3);
  CHECK(procrustes_error(x, x) < 1e-12);
  CHECK(procrustes_error(x, rotate_2d(x, M_PI / 2, 1.0, 4.0, -7.0)) < 1e-9);
  CHECK(procrustes_error(x, rotate_2d(x, 0.3, 2.5, 1.0, 1.0)) < 1e-9);
  CHECK(procrustes_error(PointMatrix{{0}, {1}}, PointMatrix{{0}, {2}}) < 1e-12);

  // reflection is allowed
  PointMatrix mirrored = x;
  for (std::size_t i = 0; i < x.n_points(); ++i) mirrored(i, 0) = -x(i, 0);
  CHECK(procrustes_error(x, mirrored) < 1e-9);

  // unrelated configurations leave a residual
  CHECK(procrustes_error(x, random_points(25, 2, 4)) > 0.1);

  CHECK_THROWS_AS(procrustes_error(x, random_points(24, 2, 4)), InvalidArgument);
}

TEST_CASE("procrustes_error on a degenerate source aligns by translation only") {
  const PointMatrix same{{1, 1}, {1, 1}, {1, 1}};
  const PointMatrix y{{0, 0}, {2, 0}, {1, 3}};
  // centred y rows: (-1,-1), (1,-1), (0,2) -> mean squared norm (2 + 2 + 4) / 3
  CHECK(procrustes_error(same, y) == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("procrustes_error in 3-D with a rank-deficient cross product") {
  // Planar source inside R^3: Gram-Schmidt must still complete an orthogonal map.
  PointMatrix x(20, 3), y(20, 3);
  const auto p = random_points(20, 2, 9);
  for (std::size_t i = 0; i < 20; ++i) {
    x(i, 0) = p(i, 0);
    x(i, 1) = p(i, 1);
    x(i, 2) = 0.0;
    y(i, 0) = 3.0 * p(i, 1) + 1.0;
    y(i, 1) = 0.0;
    y(i, 2) = 3.0 * p(i, 0) - 2.0;
  }
  CHECK(procrustes_error(x, y) < 1e-9);
}

}  // TEST_SUITE
