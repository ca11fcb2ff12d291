#include "psmds/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "psmds/errors.hpp"
#include "psmds/parallel.hpp"

namespace psmds {

WordVectors::WordVectors(std::vector<std::string> w, Matrix v)
    : words(std::move(w)), vectors(std::move(v)) {
  if (words.size() != vectors.rows()) throw InvalidArgument("word list and vectors differ in length");
  for (std::size_t i = 0; i < words.size(); ++i) index.emplace(words[i], i);
}

const double* WordVectors::find(const std::string& word) const {
  const auto it = index.find(word);
  return it == index.end() ? nullptr : vectors.row(it->second).data();
}

std::vector<double> fractional_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t start = 0; start < n;) {
    std::size_t stop = start + 1;
    while (stop < n && values[order[stop]] == values[order[start]]) ++stop;
    const double avg = 0.5 * static_cast<double>(start + 1 + stop);
    for (std::size_t k = start; k < stop; ++k) ranks[order[k]] = avg;
    start = stop;
  }
  return ranks;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("spearman: inputs differ in length");
  if (a.size() < 2) throw InvalidArgument("spearman: need at least two values");
  const auto ra = fractional_ranks(a);
  const auto rb = fractional_ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0)
    throw UndefinedCorrelation("spearman: an input has zero rank variance");
  return std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("cosine_similarity: length mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw InvalidArgument("cosine_similarity: zero vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

SimilarityScores cosine_similarity_scores(const WordVectors& vectors, const WordPairScores& pairs) {
  SimilarityScores out;
  const std::size_t dim = vectors.vectors.cols();
  for (const auto& pair : pairs) {
    const double* a = vectors.find(pair.first);
    const double* b = vectors.find(pair.second);
    if (!a || !b) {
      ++out.dropped_out_of_vocabulary;
      continue;
    }
    const std::span<const double> va(a, dim), vb(b, dim);
    const bool zero_a = std::all_of(va.begin(), va.end(), [](double v) { return v == 0.0; });
    const bool zero_b = std::all_of(vb.begin(), vb.end(), [](double v) { return v == 0.0; });
    if (zero_a || zero_b) {
      ++out.dropped_zero_vector;
      continue;
    }
    out.predicted.push_back(cosine_similarity(va, vb));
    out.human.push_back(pair.human_score);
  }
  return out;
}

SemanticResult evaluate_semantic_similarity(const WordVectors& vectors, const WordPairScores& pairs) {
  const SimilarityScores scores = cosine_similarity_scores(vectors, pairs);
  return {spearman(scores.human, scores.predicted), scores.predicted.size(), scores.dropped()};
}

FoldAssignment FoldAssignment::make(std::size_t n_samples, std::size_t k_folds, std::uint64_t seed) {
  if (k_folds < 2) throw InvalidArgument("cross-validation needs at least two folds");
  if (k_folds > n_samples) throw InvalidArgument("more folds than samples");
  std::vector<std::size_t> perm(n_samples);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n_samples; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(perm[i - 1], perm[pick(rng)]);
  }
  FoldAssignment out;
  out.k_folds = k_folds;
  out.fold_of.resize(n_samples);
  for (std::size_t p = 0; p < n_samples; ++p) out.fold_of[perm[p]] = p % k_folds;
  return out;
}

std::vector<std::size_t> FoldAssignment::fold_sizes() const {
  std::vector<std::size_t> sizes(k_folds, 0);
  for (std::size_t f : fold_of) ++sizes[f];
  return sizes;
}

double macro_f1(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw InvalidArgument("macro_f1: length mismatch");
  std::map<int, std::size_t> tp, fp, fn;
  std::set<int> classes(truth.begin(), truth.end());
  if (classes.empty()) throw InvalidArgument("macro_f1: no samples");
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == predicted[i]) {
      ++tp[truth[i]];
    } else {
      ++fn[truth[i]];
      ++fp[predicted[i]];
    }
  }
  double total = 0.0;
  for (int c : classes) {
    const double t = static_cast<double>(tp[c]);
    const double denom = 2.0 * t + static_cast<double>(fp[c]) + static_cast<double>(fn[c]);
    total += denom > 0.0 ? 2.0 * t / denom : 0.0;
  }
  return total / static_cast<double>(classes.size());
}

double knn_cv_f1(const PointMatrix& points, std::span<const int> labels, std::size_t k_folds,
                 std::size_t k_nn, std::uint64_t seed) {
  const std::size_t n = points.n_points();
  if (labels.size() != n) throw InvalidArgument("knn_cv_f1: one label per point required");
  if (k_nn < 1) throw InvalidArgument("knn_cv_f1: k_nn must be >= 1");

  std::map<int, std::size_t> class_size;
  for (int c : labels) ++class_size[c];
  for (const auto& [c, size] : class_size)
    if (size < 2) {
      std::ostringstream msg;
      msg << "knn_cv_f1: class " << c << " has a single sample";
      throw InvalidArgument(msg.str());
    }

  const FoldAssignment folds = FoldAssignment::make(n, k_folds, seed);
  std::map<int, std::set<std::size_t>> folds_of_class;
  for (std::size_t i = 0; i < n; ++i) folds_of_class[labels[i]].insert(folds.fold_of[i]);
  for (const auto& [c, fs] : folds_of_class)
    if (fs.size() == 1) {
      std::ostringstream msg;
      msg << "knn_cv_f1: every sample of class " << c << " falls in fold " << *fs.begin()
          << "; it cannot be predicted when that fold is held out";
      throw InvalidArgument(msg.str());
    }

  const std::size_t dim = points.dim();
  std::vector<int> predicted(n);
  PSMDS_OMP_PARALLEL_FOR_DYNAMIC(n > 200)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const auto i = static_cast<std::size_t>(si);
    const std::size_t fold = folds.fold_of[i];
    std::vector<std::pair<double, std::size_t>> neigh;
    neigh.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (folds.fold_of[j] == fold) continue;
      double sq = 0.0;
      for (std::size_t l = 0; l < dim; ++l) {
        const double diff = points(i, l) - points(j, l);
        sq += diff * diff;
      }
      neigh.emplace_back(sq, j);
    }
    const std::size_t k = std::min(k_nn, neigh.size());
    std::partial_sort(neigh.begin(), neigh.begin() + static_cast<std::ptrdiff_t>(k), neigh.end());
    // Majority vote; a tied vote goes to the class whose member ranks nearest.
    std::map<int, std::size_t> votes;
    for (std::size_t r = 0; r < k; ++r) ++votes[labels[neigh[r].second]];
    std::size_t top = 0;
    for (const auto& [c, v] : votes) top = std::max(top, v);
    for (std::size_t r = 0; r < k; ++r) {
      const int c = labels[neigh[r].second];
      if (votes[c] == top) {
        predicted[i] = c;
        break;
      }
    }
  }
  return macro_f1(labels, predicted);
}

double plane_recovery_score(const PointMatrix& embedding, const PointMatrix& grid) {
  if (embedding.n_points() != grid.n_points() || embedding.dim() != grid.dim())
    throw InvalidArgument("plane_recovery_score: embedding and parameter grid differ in shape");
  const std::size_t n = grid.n_points();
  double scale = 0.0;
  for (std::size_t l = 0; l < grid.dim(); ++l) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += grid(i, l);
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) scale += (grid(i, l) - mean) * (grid(i, l) - mean);
  }
  scale = std::sqrt(scale / static_cast<double>(n));
  if (scale == 0.0) throw DegenerateConfiguration("plane_recovery_score: parameter grid is a single point");
  return procrustes_error(embedding, grid) / scale;
}

double circle_recovery_score(const PointMatrix& embedding) {
  if (embedding.dim() != 2) throw InvalidArgument("circle_recovery_score: 2-D embedding required");
  const std::size_t n = embedding.n_points();
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cx += embedding(i, 0);
    cy += embedding(i, 1);
  }
  cx /= static_cast<double>(n);
  cy /= static_cast<double>(n);
  std::vector<double> radii(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    radii[i] = std::hypot(embedding(i, 0) - cx, embedding(i, 1) - cy);
    mean += radii[i];
  }
  mean /= static_cast<double>(n);
  if (mean == 0.0) throw DegenerateConfiguration("circle_recovery_score: all points coincide");
  double var = 0.0;
  for (double r : radii) var += (r - mean) * (r - mean);
  return std::sqrt(var / static_cast<double>(n)) / mean;
}

double manifold_recovery_score(const PointMatrix& embedding, const Matrix& labels) {
  if (labels.rows() != embedding.n_points())
    throw InvalidArgument("manifold_recovery_score: one label row per point required");
  if (labels.cols() == 2) return plane_recovery_score(embedding, PointMatrix(labels));
  if (labels.cols() == 1) return circle_recovery_score(embedding);
  throw InvalidArgument("manifold_recovery_score: labels must have 1 (circle) or 2 (plane) columns");
}

}  // namespace psmds
