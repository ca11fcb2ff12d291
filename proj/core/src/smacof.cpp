#include "psmds/smacof.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "psmds/errors.hpp"
#include "psmds/parallel.hpp"
#include "psmds/pattern_search.hpp"

namespace psmds {

void SmacofConfig::validate() const {
  if (stress_tol && !(*stress_tol > 0.0)) throw InvalidArgument("stress_tol must be positive");
}

namespace {

void require_shapes(const PointMatrix& x, const DissimilarityMatrix& delta, const WeightMatrix& w) {
  if (x.n_points() != delta.size() || w.size() != delta.size())
    throw InvalidArgument("SMACOF: points, dissimilarities and weights differ in size");
}

}  // namespace

Matrix guttman_b_matrix(const PointMatrix& points, const DissimilarityMatrix& dissimilarities,
                        const WeightMatrix& weights) {
  require_shapes(points, dissimilarities, weights);
  const std::size_t n = points.n_points();
  const std::size_t dim = points.dim();
  Matrix b(n, n);
  PSMDS_OMP_PARALLEL_FOR_STATIC(n > 256)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    const auto xi = points.row(i);
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto xj = points.row(j);
      double sq = 0.0;
      for (std::size_t l = 0; l < dim; ++l) {
        const double diff = xi[l] - xj[l];
        sq += diff * diff;
      }
      const double d = std::sqrt(sq);
      const double v = d > 0.0 ? -weights(i, j) * dissimilarities(i, j) / d : 0.0;
      b(i, j) = v;
      diag -= v;
    }
    b(i, i) = diag;
  }
  return b;
}

Matrix weight_laplacian(const WeightMatrix& weights) {
  const std::size_t n = weights.size();
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      v(i, j) = -weights(i, j);
      diag += weights(i, j);
    }
    v(i, i) = diag;
  }
  return v;
}

Matrix symmetric_pseudoinverse(const Matrix& symmetric, double relative_tolerance) {
  const std::size_t n = symmetric.rows();
  const EigenDecomposition eig = symmetric_eigen(symmetric);
  double largest = 0.0;
  for (double v : eig.values) largest = std::max(largest, std::abs(v));
  if (largest == 0.0)
    throw DegenerateConfiguration("pseudoinverse of the zero matrix: every weight is zero");
  const double cutoff = relative_tolerance * largest;
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = eig.values[k];
    if (std::abs(lambda) <= cutoff) continue;
    const double inv = 1.0 / lambda;
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = eig.vectors(i, k) * inv;
      if (vi == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * eig.vectors(j, k);
    }
  }
  return out;
}

namespace {

PointMatrix apply_b(const Matrix& b, const PointMatrix& points, double factor) {
  const std::size_t n = points.n_points();
  const std::size_t dim = points.dim();
  Matrix out(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto bi = b.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double v = bi[j];
      if (v == 0.0) continue;
      const auto xj = points.row(j);
      for (std::size_t l = 0; l < dim; ++l) out(i, l) += v * xj[l];
    }
    for (std::size_t l = 0; l < dim; ++l) out(i, l) *= factor;
  }
  return PointMatrix(std::move(out));
}

}  // namespace

PointMatrix guttman_step(const PointMatrix& points, const DissimilarityMatrix& dissimilarities,
                         const WeightMatrix& weights) {
  const Matrix b = guttman_b_matrix(points, dissimilarities, weights);
  const std::size_t n = points.n_points();
  if (weights.is_uniform()) {
    const double w = n > 1 ? weights(0, 1) : 1.0;
    if (w == 0.0) throw DegenerateConfiguration("SMACOF: every weight is zero");
    // V = w (N I - 1 1^T) and B(X) X is column-centred, so V^+ B X = B X / (N w).
    return apply_b(b, points, 1.0 / (static_cast<double>(n) * w));
  }
  const Matrix v_pinv = symmetric_pseudoinverse(weight_laplacian(weights));
  const Matrix bx = (b * points.matrix());
  return PointMatrix(v_pinv * bx);
}

double stress_quadratic_form(const PointMatrix& points, const DissimilarityMatrix& dissimilarities,
                             const WeightMatrix& weights) {
  require_shapes(points, dissimilarities, weights);
  const std::size_t n = points.n_points();
  const std::size_t dim = points.dim();
  double constant = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      constant += weights(i, j) * dissimilarities(i, j) * dissimilarities(i, j);

  const Matrix b = guttman_b_matrix(points, dissimilarities, weights);
  const Matrix v = weight_laplacian(weights);
  double tr_b = 0.0, tr_v = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t l = 0; l < dim; ++l) dot += points(i, l) * points(j, l);
      tr_b += b(i, j) * dot;
      tr_v += v(i, j) * dot;
    }
  return constant - 2.0 * tr_b + tr_v;
}

SmacofResult smacof_fit(const DissimilarityMatrix& dissimilarities, std::size_t dim,
                        const SmacofConfig& config) {
  return smacof_fit(dissimilarities, dim, config, WeightMatrix::uniform(dissimilarities.size()));
}

SmacofResult smacof_fit(const DissimilarityMatrix& dissimilarities, std::size_t dim,
                        const SmacofConfig& config, const WeightMatrix& weights) {
  config.validate();
  if (dim < 1) throw InvalidArgument("smacof_fit: L must be >= 1");
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(clock::now() - started).count();
  };

  const std::size_t n = dissimilarities.size();
  double sum_sq = 0.0;
  for (double v : dissimilarities.data()) sum_sq += v * v;
  const double tol = config.stress_tol.value_or(1e-6 * sum_sq);

  PointMatrix x = uniform_initialization(n, dim, config.seed);
  double stress = raw_stress(dissimilarities, x, weights);

  SmacofResult result{x, {}, stress};
  auto& trace = result.trace;
  trace.metadata["method"] = "smacof";
  trace.metadata["objective"] = "raw_stress";
  trace.metadata["seed"] = std::to_string(config.seed);
  trace.records.push_back({0, stress, std::numeric_limits<double>::quiet_NaN(), elapsed()});
  trace.termination_reason = TerminationReason::max_epochs;

  for (std::size_t iter = 1; iter <= config.max_iters && n > 1; ++iter) {
    PointMatrix next = guttman_step(x, dissimilarities, weights);
    const double next_stress = raw_stress(dissimilarities, next, weights);
    const double decrease = stress - next_stress;
    // At a fixed point the update can only differ from X by rounding; an
    // update that does not lower the stress is not adopted.
    if (decrease < 0.0) {
      trace.termination_reason = TerminationReason::stress_converged;
      break;
    }
    x = std::move(next);
    stress = next_stress;
    trace.records.push_back({iter, stress, std::numeric_limits<double>::quiet_NaN(), elapsed()});
    if (decrease < tol) {
      trace.termination_reason = TerminationReason::stress_converged;
      break;
    }
  }
  if (n <= 1) trace.termination_reason = TerminationReason::stress_converged;

  result.embedding = std::move(x);
  result.final_stress = stress;
  return result;
}

}  // namespace psmds
