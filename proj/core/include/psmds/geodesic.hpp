#pragma once

#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

#include "psmds/linalg.hpp"

namespace psmds {

struct Edge {
  std::size_t to = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted undirected graph; each edge is stored in both adjacency lists with
/// equal weight. Weights are positive, no self-loops, lists sorted by `to`.
class NeighborGraph {
 public:
  explicit NeighborGraph(std::size_t n_vertices);

  /// Builds from undirected (u, v, weight) triples; repeated pairs keep the
  /// smallest weight.
  static NeighborGraph from_edges(std::size_t n_vertices,
                                  const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges);

  std::size_t n_vertices() const noexcept { return adjacency_.size(); }
  const std::vector<Edge>& neighbors(std::size_t v) const noexcept { return adjacency_[v]; }
  std::size_t n_edges() const noexcept;  // undirected count

  /// Sizes of the connected components, largest first.
  std::vector<std::size_t> component_sizes() const;
  bool connected() const { return component_sizes().size() <= 1; }

 private:
  std::vector<std::vector<Edge>> adjacency_;
};

/// Weight substituted for zero-length edges between duplicate points.
inline constexpr double kDuplicatePointWeight = 1e-12;

/// Each vertex joined to its k nearest Euclidean neighbours (ties to the lower
/// index), symmetrised by union. Requires 1 <= k < N.
NeighborGraph knn_graph(const PointMatrix& points, std::size_t k);

/// All-pairs shortest paths by one Dijkstra run per source. Throws
/// DisconnectedGraph for graphs with several components.
DissimilarityMatrix geodesic_distances(const NeighborGraph& graph);

/// Smallest k' >= k whose k-NN graph is connected (doubling, then bisection).
std::size_t ensure_connected(const PointMatrix& points, std::size_t k);

struct GeodesicResult {
  DissimilarityMatrix distances;
  std::size_t k_used;
};

/// ensure_connected + knn_graph + geodesic_distances.
GeodesicResult geodesic_from_points(const PointMatrix& points, std::size_t k);

}  // namespace psmds
