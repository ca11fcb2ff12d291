#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>

#include "psmds/linalg.hpp"

namespace psmds {

/// Non-negative symmetric pair weights; zero marks a missing dissimilarity.
class WeightMatrix {
 public:
  /// All-ones weights for N points.
  static WeightMatrix uniform(std::size_t n, double weight = 1.0);
  explicit WeightMatrix(Matrix values);
  WeightMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t size() const noexcept { return values_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_(i, j); }
  const Matrix& matrix() const noexcept { return values_; }

  /// True when every off-diagonal weight has the same value.
  bool is_uniform() const noexcept;

 private:
  Matrix values_;
};

/// f(T, D) = (1/N^2) sum_ij (t_ij - d_ij)^2, diagonal included.
double mse_stress(const DissimilarityMatrix& target, const DissimilarityMatrix& current);

/// sum_ij w_ij (delta_ij - d_ij(X))^2 over all ordered pairs.
double raw_stress(const DissimilarityMatrix& dissimilarities, const PointMatrix& points,
                  const WeightMatrix& weights);

/// Kruskal Stress-1: sqrt(sum (delta - d)^2 / sum d^2). Throws DegenerateConfiguration
/// when every point coincides.
double stress_1(const DissimilarityMatrix& dissimilarities, const PointMatrix& points);

/// Moves X(i, l) to `new_coord` and patches row/column i of D with
/// d_ij' = sqrt(d_ij^2 - (x_il - x_jl)^2 + (x_il' - x_jl)^2). Negative
/// radicands from cancellation are clamped to zero.
void incremental_distance_update(DissimilarityMatrix& distances, PointMatrix& points,
                                 std::size_t i, std::size_t l, double new_coord);

/// The same update written into `out` (length N) without mutating anything;
/// out[i] is 0.
void moved_distances(const DissimilarityMatrix& distances, const PointMatrix& points,
                     std::size_t i, std::size_t l, double new_coord, std::span<double> out);

}  // namespace psmds
