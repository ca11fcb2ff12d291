#include "psmds/datasets.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "psmds/errors.hpp"

namespace psmds {

HoleRect swissroll_hole(const SwissrollParams& params) {
  const double side = std::sqrt(params.hole_area_fraction);
  const double t_mid = 0.5 * (params.t_min + params.t_max);
  const double t_half = 0.5 * side * (params.t_max - params.t_min);
  const double y_mid = 0.5 * params.height;
  const double y_half = 0.5 * side * params.height;
  return {t_mid - t_half, t_mid + t_half, y_mid - y_half, y_mid + y_half};
}

LabeledPointCloud swissroll(std::size_t n, bool hole, Sparsity sparsity, std::uint64_t seed,
                            const SwissrollParams& params) {
  if (n < 4) throw InvalidArgument("swissroll: n must be >= 4");
  const std::size_t count = sparsity == Sparsity::sparse ? std::max<std::size_t>(n / 4, 1) : n;
  const HoleRect rect = swissroll_hole(params);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> t_dist(params.t_min, params.t_max);
  std::uniform_real_distribution<double> y_dist(0.0, params.height);

  PointMatrix points(count, 3);
  Matrix labels(count, 2);
  for (std::size_t i = 0; i < count;) {
    const double t = t_dist(rng);
    const double y = y_dist(rng);
    if (hole && rect.contains(t, y)) continue;
    points(i, 0) = t * std::cos(t);
    points(i, 1) = y;
    points(i, 2) = t * std::sin(t);
    labels(i, 0) = t;
    labels(i, 1) = y;
    ++i;
  }
  return {std::move(points), std::move(labels)};
}

double swissroll_arc_length(double t) {
  return 0.5 * (t * std::sqrt(1.0 + t * t) + std::asinh(t));
}

PointMatrix swissroll_unrolled(const Matrix& labels) {
  if (labels.cols() != 2) throw InvalidArgument("swissroll labels must have two columns (t, y)");
  PointMatrix out(labels.rows(), 2);
  for (std::size_t i = 0; i < labels.rows(); ++i) {
    out(i, 0) = swissroll_arc_length(labels(i, 0));
    out(i, 1) = labels(i, 1);
  }
  return out;
}

LabeledPointCloud clusters_3d(std::size_t n, std::size_t num_clusters, std::uint64_t seed,
                              const ClustersParams& params) {
  if (num_clusters < 2) throw InvalidArgument("clusters_3d: need at least two clusters");
  if (n < num_clusters + 1) throw InvalidArgument("clusters_3d: n too small for the cluster count");
  const auto line_count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(params.line_fraction * static_cast<double>(n))));
  const std::size_t blob_total = n - line_count;
  const double sigma = params.blob_sigma_ratio * params.spacing;
  const double max_radius = 0.45 * params.spacing;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);

  PointMatrix points(n, 3);
  Matrix labels(n, 1);
  std::size_t row = 0;
  for (std::size_t c = 0; c < num_clusters; ++c) {
    const std::size_t size = blob_total / num_clusters + (c < blob_total % num_clusters ? 1 : 0);
    const double cx = static_cast<double>(c) * params.spacing;
    for (std::size_t q = 0; q < size;) {
      const double dx = gauss(rng), dy = gauss(rng), dz = gauss(rng);
      if (dx * dx + dy * dy + dz * dz > max_radius * max_radius) continue;
      points(row, 0) = cx + dx;
      points(row, 1) = dy;
      points(row, 2) = dz;
      labels(row, 0) = static_cast<double>(c);
      ++row;
      ++q;
    }
  }
  const double end = static_cast<double>(num_clusters - 1) * params.spacing;
  for (std::size_t q = 0; q < line_count; ++q) {
    const double frac = static_cast<double>(q + 1) / static_cast<double>(line_count + 1);
    points(row, 0) = frac * end;
    points(row, 1) = 0.0;
    points(row, 2) = 0.0;
    labels(row, 0) = -1.0;
    ++row;
  }
  return {std::move(points), std::move(labels)};
}

LabeledPointCloud toroid_helix(std::size_t n, std::uint64_t seed, const ToroidHelixParams& params) {
  if (n < 8) throw InvalidArgument("toroid_helix: n must be >= 8");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> theta_dist(0.0, 2.0 * std::numbers::pi);
  PointMatrix points(n, 3);
  Matrix labels(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = theta_dist(rng);
    const double ring = params.major_radius + params.minor_radius * std::cos(params.coils * theta);
    points(i, 0) = ring * std::cos(theta);
    points(i, 1) = ring * std::sin(theta);
    points(i, 2) = params.minor_radius * std::sin(params.coils * theta);
    labels(i, 0) = theta;
  }
  return {std::move(points), std::move(labels)};
}

PointMatrix add_gaussian_noise(const PointMatrix& points, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw InvalidArgument("noise sigma must be finite and non-negative");
  if (sigma == 0.0) return points;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  PointMatrix out = points;
  for (std::size_t i = 0; i < out.n_points(); ++i)
    for (std::size_t l = 0; l < out.dim(); ++l) out(i, l) += gauss(rng);
  return out;
}

}  // namespace psmds
