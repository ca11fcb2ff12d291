#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "psmds/linalg.hpp"
#include "psmds/objective.hpp"
#include "psmds/trace.hpp"

namespace psmds {

struct SmacofConfig {
  std::size_t max_iters = 3000;
  /// Stop once an iteration lowers raw stress by less than this. Empty means
  /// 1e-6 * sum(delta^2).
  std::optional<double> stress_tol;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Off-diagonal entries -w_ij delta_ij / d_ij(X) (0 where d_ij = 0), diagonal
/// minus the row sum.
Matrix guttman_b_matrix(const PointMatrix& points, const DissimilarityMatrix& dissimilarities,
                        const WeightMatrix& weights);

/// Off-diagonal -w_ij, diagonal sum_{k != i} w_ik.
Matrix weight_laplacian(const WeightMatrix& weights);

/// Moore-Penrose pseudoinverse of a symmetric matrix via its eigendecomposition.
/// Throws DegenerateConfiguration when the matrix has no eigenvalue above tolerance.
Matrix symmetric_pseudoinverse(const Matrix& symmetric, double relative_tolerance = 1e-10);

/// One Guttman transform X+ = V^+ B(X) X. Uniform weights use the closed
/// form (1/(N w)) B(X) X.
PointMatrix guttman_step(const PointMatrix& points, const DissimilarityMatrix& dissimilarities,
                         const WeightMatrix& weights);

/// Raw stress through the quadratic form over pairs i < j:
/// sum w delta^2 - 2 tr(X^T B(X) X) + tr(X^T V X). Twice this equals
/// raw_stress(), which sums over ordered pairs.
double stress_quadratic_form(const PointMatrix& points, const DissimilarityMatrix& dissimilarities,
                             const WeightMatrix& weights);

struct SmacofResult {
  PointMatrix embedding;
  ConvergenceTrace trace;  // error column holds raw stress
  double final_stress = 0.0;
};

/// Iterated Guttman transform from uniform_initialization(N, L, seed).
SmacofResult smacof_fit(const DissimilarityMatrix& dissimilarities, std::size_t dim,
                        const SmacofConfig& config);
SmacofResult smacof_fit(const DissimilarityMatrix& dissimilarities, std::size_t dim,
                        const SmacofConfig& config, const WeightMatrix& weights);

}  // namespace psmds
