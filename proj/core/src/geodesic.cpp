#include "psmds/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <tuple>

#include "psmds/errors.hpp"
#include "psmds/parallel.hpp"

namespace psmds {

namespace {

std::string describe_components(const std::vector<std::size_t>& sizes) {
  std::ostringstream msg;
  msg << "neighbour graph is disconnected: " << sizes.size() << " components of sizes ";
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    if (c) msg << ", ";
    if (c == 8 && sizes.size() > 9) {
      msg << "... (" << sizes.size() - 8 << " more)";
      break;
    }
    msg << sizes[c];
  }
  return msg.str();
}

}  // namespace

DisconnectedGraph::DisconnectedGraph(std::vector<std::size_t> component_sizes)
    : Error(describe_components(component_sizes)), sizes_(std::move(component_sizes)) {}

NeighborGraph::NeighborGraph(std::size_t n_vertices) : adjacency_(n_vertices) {
  if (n_vertices == 0) throw InvalidArgument("NeighborGraph needs at least one vertex");
}

NeighborGraph NeighborGraph::from_edges(
    std::size_t n_vertices, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
  NeighborGraph g(n_vertices);
  for (const auto& [u, v, w] : edges) {
    if (u >= n_vertices || v >= n_vertices) throw InvalidArgument("edge endpoint out of range");
    if (u == v) throw InvalidArgument("self-loops are not allowed");
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("edge weights must be positive");
    g.adjacency_[u].push_back({v, w});
    g.adjacency_[v].push_back({u, w});
  }
  for (auto& list : g.adjacency_) {
    std::sort(list.begin(), list.end(), [](const Edge& a, const Edge& b) {
      return std::tie(a.to, a.weight) < std::tie(b.to, b.weight);
    });
    list.erase(std::unique(list.begin(), list.end(),
                           [](const Edge& a, const Edge& b) { return a.to == b.to; }),
               list.end());
  }
  return g;
}

std::size_t NeighborGraph::n_edges() const noexcept {
  std::size_t total = 0;
  for (const auto& list : adjacency_) total += list.size();
  return total / 2;
}

std::vector<std::size_t> NeighborGraph::component_sizes() const {
  const std::size_t n = n_vertices();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::size_t size = 0;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      ++size;
      for (const Edge& e : adjacency_[v])
        if (!seen[e.to]) {
          seen[e.to] = true;
          stack.push_back(e.to);
        }
    }
    sizes.push_back(size);
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

namespace {

// Neighbour candidates of every vertex sorted by (distance, index).
std::vector<std::vector<Edge>> sorted_neighbors(const PointMatrix& points, std::size_t limit) {
  const std::size_t n = points.n_points();
  const std::size_t dim = points.dim();
  std::vector<std::vector<Edge>> out(n);
  PSMDS_OMP_PARALLEL_FOR_DYNAMIC(n > 256)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    std::vector<Edge> cand;
    cand.reserve(n - 1);
    const auto xi = points.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto xj = points.row(j);
      double sq = 0.0;
      for (std::size_t l = 0; l < dim; ++l) {
        const double diff = xi[l] - xj[l];
        sq += diff * diff;
      }
      cand.push_back({j, std::sqrt(sq)});
    }
    const auto by_distance = [](const Edge& a, const Edge& b) {
      return std::tie(a.weight, a.to) < std::tie(b.weight, b.to);
    };
    const std::size_t keep = std::min(limit, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(keep), cand.end(),
                      by_distance);
    cand.resize(keep);
    out[i] = std::move(cand);
  }
  return out;
}

NeighborGraph graph_from_sorted(const std::vector<std::vector<Edge>>& sorted, std::size_t k) {
  const std::size_t n = sorted.size();
  std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
  edges.reserve(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t take = std::min(k, sorted[i].size());
    for (std::size_t r = 0; r < take; ++r) {
      const Edge& e = sorted[i][r];
      edges.emplace_back(i, e.to, e.weight > 0.0 ? e.weight : kDuplicatePointWeight);
    }
  }
  return NeighborGraph::from_edges(n, edges);
}

}  // namespace

NeighborGraph knn_graph(const PointMatrix& points, std::size_t k) {
  const std::size_t n = points.n_points();
  if (k < 1 || k >= n) throw InvalidArgument("knn_graph: need 1 <= k < N");
  return graph_from_sorted(sorted_neighbors(points, k), k);
}

DissimilarityMatrix geodesic_distances(const NeighborGraph& graph) {
  const auto sizes = graph.component_sizes();
  if (sizes.size() > 1) throw DisconnectedGraph(sizes);

  const std::size_t n = graph.n_vertices();
  Matrix dist(n, n, std::numeric_limits<double>::infinity());
  PSMDS_OMP_PARALLEL_FOR_DYNAMIC(n > 64)
  for (std::ptrdiff_t ss = 0; ss < static_cast<std::ptrdiff_t>(n); ++ss) {
    const auto source = static_cast<std::size_t>(ss);
    auto row = dist.row(source);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    row[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
      const auto [du, u] = heap.top();
      heap.pop();
      if (du > row[u]) continue;
      for (const Edge& e : graph.neighbors(u)) {
        const double cand = du + e.weight;
        if (cand < row[e.to]) {
          row[e.to] = cand;
          heap.push({cand, e.to});
        }
      }
    }
  }
  // Path sums accumulated from opposite ends can differ in the last bit.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::min(dist(i, j), dist(j, i));
      dist(i, j) = v;
      dist(j, i) = v;
    }
  return DissimilarityMatrix(std::move(dist));
}

std::size_t ensure_connected(const PointMatrix& points, std::size_t k) {
  const std::size_t n = points.n_points();
  if (k < 1) throw InvalidArgument("ensure_connected: k must be >= 1");
  if (n <= 1) return k;
  const std::size_t cap = n - 1;
  std::size_t cached_limit = std::min(std::max<std::size_t>(2 * k, 16), cap);
  auto sorted = sorted_neighbors(points, cached_limit);
  const auto connected_at = [&](std::size_t kk) {
    kk = std::min(kk, cap);
    if (kk > cached_limit) {
      cached_limit = std::min(std::max(kk, 2 * cached_limit), cap);
      sorted = sorted_neighbors(points, cached_limit);
    }
    return graph_from_sorted(sorted, kk).connected();
  };

  std::size_t lo = std::min(k, cap);
  if (connected_at(lo)) return std::max(k, lo);
  // Doubling: `lo` is known disconnected.
  std::size_t hi = lo;
  while (true) {
    hi = std::min(hi * 2, cap);
    if (connected_at(hi)) break;
    lo = hi;
    if (hi == cap) return cap;  // complete graph is always connected
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (connected_at(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

GeodesicResult geodesic_from_points(const PointMatrix& points, std::size_t k) {
  const std::size_t n = points.n_points();
  if (n == 1) return {DissimilarityMatrix(1), k};
  const std::size_t k_used = std::min(ensure_connected(points, k), n - 1);
  return {geodesic_distances(knn_graph(points, k_used)), k_used};
}

}  // namespace psmds
