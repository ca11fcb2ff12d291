#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "psmds/linalg.hpp"

namespace psmds {

struct WordPair {
  std::string first;
  std::string second;
  double human_score = 0.0;
};

using WordPairScores = std::vector<WordPair>;

/// Vocabulary with one vector per word (row of `vectors`).
struct WordVectors {
  std::vector<std::string> words;
  Matrix vectors;
  std::unordered_map<std::string, std::size_t> index;

  WordVectors() = default;
  WordVectors(std::vector<std::string> words, Matrix vectors);
  const double* find(const std::string& word) const;
};

/// Fractional ranks (1-based); tied values share their average rank.
std::vector<double> fractional_ranks(std::span<const double> values);

/// Spearman rank correlation. Throws UndefinedCorrelation when either input has
/// constant ranks, InvalidArgument on unequal lengths or fewer than two values.
double spearman(std::span<const double> a, std::span<const double> b);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct SimilarityScores {
  std::vector<double> predicted;  // cosine similarity per retained pair
  std::vector<double> human;      // human score per retained pair
  std::size_t dropped_out_of_vocabulary = 0;
  std::size_t dropped_zero_vector = 0;

  std::size_t dropped() const noexcept { return dropped_out_of_vocabulary + dropped_zero_vector; }
};

/// Cosine similarity for every pair whose words are both present and non-zero.
SimilarityScores cosine_similarity_scores(const WordVectors& vectors, const WordPairScores& pairs);

struct SemanticResult {
  double spearman = 0.0;
  std::size_t pairs_used = 0;
  std::size_t pairs_dropped = 0;
};

SemanticResult evaluate_semantic_similarity(const WordVectors& vectors, const WordPairScores& pairs);

/// Seeded permutation dealt round-robin into `k_folds` folds.
struct FoldAssignment {
  std::vector<std::size_t> fold_of;
  std::size_t k_folds = 0;

  static FoldAssignment make(std::size_t n_samples, std::size_t k_folds, std::uint64_t seed);
  std::vector<std::size_t> fold_sizes() const;
};

/// Unweighted mean of per-class F1 over every class present in `truth`;
/// a class never predicted scores 0.
double macro_f1(std::span<const int> truth, std::span<const int> predicted);

/// k-fold cross-validated k-NN macro-F1 over pooled held-out predictions.
/// Euclidean distance, ties go to the lower training index. Throws
/// InvalidArgument for a singleton class or a class confined to one fold.
double knn_cv_f1(const PointMatrix& points, std::span<const int> labels, std::size_t k_folds,
                 std::size_t k_nn, std::uint64_t seed);

/// procrustes_error(embedding, grid) divided by the RMS radius of the centred grid.
double plane_recovery_score(const PointMatrix& embedding, const PointMatrix& grid);

/// Coefficient of variation of distances to the centroid of a 2-D embedding.
double circle_recovery_score(const PointMatrix& embedding);

/// Plane score when `labels` has two columns (t, y), circle score for one column (theta).
double manifold_recovery_score(const PointMatrix& embedding, const Matrix& labels);

}  // namespace psmds
