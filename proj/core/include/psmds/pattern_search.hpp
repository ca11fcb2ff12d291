#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "psmds/linalg.hpp"
#include "psmds/trace.hpp"

namespace psmds {

/// Settings for pattern-search MDS.
struct SolverConfig {
  /// Starting search radius; empty selects it with auto_radius().
  std::optional<double> initial_radius;
  /// Plateau threshold: the radius halves when e(k-1) - e(k) <= epsilon * e(k).
  double epsilon = 1e-4;
  /// Termination radius.
  double delta = 1e-4;
  /// Take the best candidate move even when it increases the error.
  bool allow_bad_moves = true;
  /// Fraction of axes searched per epoch, resampled every epoch.
  double direction_sample_fraction = 1.0;
  std::size_t max_epochs = 100000;
  std::uint64_t seed = 0;
  /// Full distance-matrix refresh period, in epochs.
  std::size_t recompute_every = 10;
  /// Dry-run epochs spent by auto_radius().
  std::size_t radius_probes = 10;
  /// First radius tried by auto_radius().
  double probe_start_radius = 1.0;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

/// One candidate step: `step` (= +r or -r) along coordinate `axis`.
struct SearchDirection {
  std::size_t axis = 0;
  double step = 0.0;

  friend bool operator==(const SearchDirection&, const SearchDirection&) = default;
};

/// Rows of the stacked pattern [rI; -rI], possibly restricted to a subset of axes.
/// Positive steps come first, each block ordered by axis.
class SearchDirectionSet {
 public:
  SearchDirectionSet(double radius, std::size_t dim, std::vector<SearchDirection> directions);

  double radius() const noexcept { return radius_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return directions_.size(); }
  const SearchDirection& operator[](std::size_t k) const noexcept { return directions_[k]; }
  auto begin() const noexcept { return directions_.begin(); }
  auto end() const noexcept { return directions_.end(); }

  /// Dense size() x L view with one non-zero per row.
  Matrix as_matrix() const;

 private:
  double radius_;
  std::size_t dim_;
  std::vector<SearchDirection> directions_;
};

SearchDirectionSet search_directions(double radius, std::size_t dim);

/// Keeps ceil(fraction * L) axes chosen uniformly without replacement, both signs each.
SearchDirectionSet sample_directions(const SearchDirectionSet& directions, double fraction,
                                     std::mt19937_64& rng);

/// Uniform [0, 1) start configuration shared by every iterative solver.
PointMatrix uniform_initialization(std::size_t n_points, std::size_t dim, std::uint64_t seed);

/// Mutable solver state: the embedding, its distance matrix and the running MSE.
class SearchState {
 public:
  SearchState(const DissimilarityMatrix& target, PointMatrix initial);

  const DissimilarityMatrix& target() const noexcept { return *target_; }
  const PointMatrix& points() const noexcept { return points_; }
  const DissimilarityMatrix& distances() const noexcept { return distances_; }
  double error() const noexcept { return error_; }

  /// Recomputes D from X and the error from D.
  void recompute();
  /// Recomputes the error from the current D.
  double refresh_error();

  /// Candidate distances evaluated so far (one per off-diagonal row entry).
  std::uint64_t distance_evaluations() const noexcept { return evaluations_; }

 private:
  friend struct MoveEngine;

  const DissimilarityMatrix* target_;
  PointMatrix points_;
  DissimilarityMatrix distances_;
  double error_;
  std::uint64_t evaluations_ = 0;
};

struct MoveResult {
  std::optional<std::size_t> direction;  // index into the direction set; empty when no move
  double error = 0.0;                    // error after the call
};

/// Evaluates every direction for `point` using the incremental distance update
/// and moves it along the best one if that candidate's error is below
/// `error_bound` (+infinity always moves). Ties go to the lowest index.
MoveResult optimal_move(SearchState& state, std::size_t point,
                        const SearchDirectionSet& directions, double error_bound);

struct FitResult {
  PointMatrix embedding;
  ConvergenceTrace trace;
  double initial_radius = 0.0;
  /// Radius at exit; below delta when terminated by radius.
  double final_radius = 0.0;
  double final_error = 0.0;
  std::uint64_t distance_evaluations = 0;
};

/// Called after every completed epoch with the epoch index and the state.
using EpochObserver = std::function<void(std::size_t epoch, const SearchState& state)>;

/// Pattern-search MDS of `target` into `dim` dimensions.
FitResult fit(const DissimilarityMatrix& target, std::size_t dim, const SolverConfig& config,
              const EpochObserver& observer = {});

/// Starting radius from single-epoch dry runs: double after a run that does not
/// increase the error, halve after one that does. Returns the largest radius that
/// did not increase the error, or 1.0 when none did. With a zero probe budget,
/// returns config.initial_radius (or 1.0 when unset).
double auto_radius(const DissimilarityMatrix& target, std::size_t dim, const SolverConfig& config);

}  // namespace psmds
