#include "psmds/objective.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "psmds/errors.hpp"
#include "summation.hpp"

namespace psmds {

WeightMatrix WeightMatrix::uniform(std::size_t n, double weight) {
  Matrix w(n, n, weight);
  return WeightMatrix(std::move(w));
}

WeightMatrix::WeightMatrix(Matrix values) : values_(std::move(values)) {
  const std::size_t n = values_.rows();
  if (n == 0 || values_.cols() != n) throw InvalidArgument("WeightMatrix must be square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double w = values_(i, j);
      if (!std::isfinite(w) || w < 0.0)
        throw InvalidArgument("WeightMatrix: weights must be finite and non-negative");
      if (w != values_(j, i)) throw InvalidArgument("WeightMatrix: not symmetric");
    }
}

WeightMatrix::WeightMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : WeightMatrix(Matrix(rows)) {}

bool WeightMatrix::is_uniform() const noexcept {
  const std::size_t n = size();
  if (n < 2) return true;
  const double w0 = values_(0, 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && values_(i, j) != w0) return false;
  return true;
}

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw InvalidArgument(std::string(what) + ": shape mismatch");
}

double row_distance(const PointMatrix& x, std::size_t i, std::size_t j) {
  const auto xi = x.row(i);
  const auto xj = x.row(j);
  double sq = 0.0;
  for (std::size_t l = 0; l < xi.size(); ++l) {
    const double diff = xi[l] - xj[l];
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

}  // namespace

double mse_stress(const DissimilarityMatrix& target, const DissimilarityMatrix& current) {
  require_same_size(target.size(), current.size(), "mse_stress");
  const std::size_t n = target.size();
  const auto t = target.data();
  const auto d = current.data();
  detail::CompensatedSum sum;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double r = t[k] - d[k];
    sum.add(r * r);
  }
  return sum.value() / (static_cast<double>(n) * static_cast<double>(n));
}

double raw_stress(const DissimilarityMatrix& dissimilarities, const PointMatrix& points,
                  const WeightMatrix& weights) {
  const std::size_t n = dissimilarities.size();
  require_same_size(n, points.n_points(), "raw_stress");
  require_same_size(n, weights.size(), "raw_stress");
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double r = dissimilarities(i, j) - (i == j ? 0.0 : row_distance(points, i, j));
      sum.add(weights(i, j) * (r * r));
    }
  return sum.value();
}

double stress_1(const DissimilarityMatrix& dissimilarities, const PointMatrix& points) {
  const std::size_t n = dissimilarities.size();
  require_same_size(n, points.n_points(), "stress_1");
  detail::CompensatedSum num, den;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = row_distance(points, i, j);
      const double r = dissimilarities(i, j) - d;
      num.add(r * r);
      den.add(d * d);
    }
  if (den.value() <= 0.0)
    throw DegenerateConfiguration(
        "stress_1 undefined: all embedded points coincide (sum of squared distances is 0)");
  return std::sqrt(num.value() / den.value());
}

void moved_distances(const DissimilarityMatrix& distances, const PointMatrix& points,
                     std::size_t i, std::size_t l, double new_coord, std::span<double> out) {
  const std::size_t n = distances.size();
  const double old_coord = points(i, l);
  const auto di = distances.row(i);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) {
      out[j] = 0.0;
      continue;
    }
    const double xj = points(j, l);
    const double before = old_coord - xj;
    const double after = new_coord - xj;
    const double radicand = di[j] * di[j] - before * before + after * after;
    out[j] = radicand > 0.0 ? std::sqrt(radicand) : 0.0;
  }
}

void incremental_distance_update(DissimilarityMatrix& distances, PointMatrix& points,
                                 std::size_t i, std::size_t l, double new_coord) {
  const std::size_t n = distances.size();
  if (points.n_points() != n) throw InvalidArgument("incremental_distance_update: shape mismatch");
  if (i >= n || l >= points.dim())
    throw InvalidArgument("incremental_distance_update: index out of range");
  std::vector<double> row(n);
  moved_distances(distances, points, i, l, new_coord, row);
  points(i, l) = new_coord;
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) distances.set(i, j, row[j]);
}

}  // namespace psmds
