#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace psmds {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

/// N x L embedding coordinates; row i is object i. Entries are finite, N >= 1, L >= 1.
class PointMatrix {
 public:
  PointMatrix(std::size_t n_points, std::size_t dim);
  explicit PointMatrix(Matrix values);
  PointMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t n_points() const noexcept { return values_.rows(); }
  std::size_t dim() const noexcept { return values_.cols(); }

  double& operator()(std::size_t i, std::size_t l) noexcept { return values_(i, l); }
  double operator()(std::size_t i, std::size_t l) const noexcept { return values_(i, l); }

  std::span<double> row(std::size_t i) noexcept { return values_.row(i); }
  std::span<const double> row(std::size_t i) const noexcept { return values_.row(i); }

  /// Row-major storage, i.e. vec(X^T).
  std::span<const double> flat() const noexcept { return values_.data(); }

  const Matrix& matrix() const noexcept { return values_; }

  friend bool operator==(const PointMatrix&, const PointMatrix&) = default;

 private:
  Matrix values_;
};

/// Symmetric, zero-diagonal, non-negative N x N matrix of distances.
class DissimilarityMatrix {
 public:
  explicit DissimilarityMatrix(std::size_t n);
  /// Validates symmetry (exact), zero diagonal and non-negativity.
  explicit DissimilarityMatrix(Matrix values);
  DissimilarityMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t size() const noexcept { return values_.rows(); }

  double operator()(std::size_t i, std::size_t j) const noexcept { return values_(i, j); }
  std::span<const double> row(std::size_t i) const noexcept { return values_.row(i); }
  std::span<const double> data() const noexcept { return values_.data(); }

  /// Writes both (i, j) and (j, i). Caller guarantees value >= 0 and i != j.
  void set(std::size_t i, std::size_t j, double value) noexcept {
    values_(i, j) = value;
    values_(j, i) = value;
  }

  const Matrix& matrix() const noexcept { return values_; }

  /// Every entry multiplied by a non-negative factor.
  DissimilarityMatrix scaled(double factor) const;

  friend bool operator==(const DissimilarityMatrix&, const DissimilarityMatrix&) = default;

 private:
  Matrix values_;
};

/// Double-centred Gram matrix B.
class GramMatrix {
 public:
  /// Rejects input that is not symmetric within 1e-12 relative tolerance.
  explicit GramMatrix(Matrix values);

  std::size_t size() const noexcept { return values_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_(i, j); }
  const Matrix& matrix() const noexcept { return values_; }

 private:
  Matrix values_;
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k is the unit eigenvector of values[k]
};

struct EigenOptions {
  /// QL sweeps allowed per eigenvalue before giving up.
  int max_iterations_per_value = 60;
};

/// All eigenpairs of a symmetric matrix (Householder tridiagonalisation + implicit QL).
/// Throws EigenSolverError when the iteration cap is hit.
EigenDecomposition symmetric_eigen(const Matrix& symmetric, EigenOptions options = {});

/// Leading `count` eigenpairs, eigenvalues descending. Requires 1 <= count <= N.
EigenDecomposition top_eigenpairs(const GramMatrix& gram, std::size_t count,
                                  EigenOptions options = {});

DissimilarityMatrix pairwise_distances(const PointMatrix& points);

/// B = -1/2 H (D o D) H with H the centring matrix.
GramMatrix double_center(const DissimilarityMatrix& dissimilarities);

struct ClassicalMdsResult {
  PointMatrix embedding;
  std::vector<double> eigenvalues;    // top-L, before clamping
  std::vector<std::string> warnings;  // one entry per clamped eigenvalue
};

/// Torgerson scaling: coordinates are the top-L eigenvectors scaled by sqrt(lambda).
/// Negative eigenvalues are clamped to zero and reported in `warnings`.
ClassicalMdsResult classical_mds_embed(const DissimilarityMatrix& dissimilarities,
                                       std::size_t dim, EigenOptions options = {});

/// RMS row distance between `target` and the best similarity transform
/// (translation, orthogonal map, uniform scale) of `source`.
double procrustes_error(const PointMatrix& source, const PointMatrix& target);

}  // namespace psmds
