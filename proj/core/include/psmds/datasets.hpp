#pragma once

#include <cstddef>
#include <cstdint>

#include "psmds/linalg.hpp"

namespace psmds {

/// Generated points plus the ground-truth parameters that produced them.
struct LabeledPointCloud {
  PointMatrix points;
  /// One row per point: (t, y) for swissrolls, theta for the helix, cluster id
  /// (line points -1) for clusters.
  Matrix labels;
};

enum class Sparsity { dense, sparse };

struct SwissrollParams {
  double t_min = 1.5 * 3.14159265358979323846;
  double t_max = 4.5 * 3.14159265358979323846;
  double height = 21.0;
  /// Share of the (t, y) parameter rectangle removed by the hole.
  double hole_area_fraction = 0.15;
};

/// Axis-aligned (t, y) rectangle removed from the parameter domain.
struct HoleRect {
  double t_lo, t_hi, y_lo, y_hi;
  bool contains(double t, double y) const noexcept {
    return t >= t_lo && t <= t_hi && y >= y_lo && y <= y_hi;
  }
};

HoleRect swissroll_hole(const SwissrollParams& params = {});

/// Points (t cos t, y, t sin t); labels (t, y). The sparse variant draws n / 4 points.
LabeledPointCloud swissroll(std::size_t n, bool hole, Sparsity sparsity, std::uint64_t seed,
                            const SwissrollParams& params = {});

/// Arc length of the spiral r = t from t = 0, i.e. the unrolled first coordinate.
double swissroll_arc_length(double t);

/// Isometric unrolling (arc_length(t), y) of swissroll labels (t, y).
PointMatrix swissroll_unrolled(const Matrix& labels);

struct ClustersParams {
  double spacing = 1.0;
  double blob_sigma_ratio = 0.1;
  double line_fraction = 0.05;
};

/// Gaussian blobs at collinear centroids plus evenly spaced points on the line
/// joining them. Blobs are truncated at 0.45 * spacing so they never overlap.
LabeledPointCloud clusters_3d(std::size_t n, std::size_t num_clusters, std::uint64_t seed,
                              const ClustersParams& params = {});

struct ToroidHelixParams {
  double major_radius = 2.0;
  double minor_radius = 0.3;
  double coils = 20.0;
};

/// Helix wound around a torus; labels are the angle theta in [0, 2 pi).
LabeledPointCloud toroid_helix(std::size_t n, std::uint64_t seed,
                               const ToroidHelixParams& params = {});

/// Adds independent N(0, sigma^2) noise to every coordinate. sigma = 0 returns
/// the input unchanged.
PointMatrix add_gaussian_noise(const PointMatrix& points, double sigma, std::uint64_t seed);

}  // namespace psmds
