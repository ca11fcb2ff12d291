#include "psmds/pattern_search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "psmds/errors.hpp"
#include "psmds/objective.hpp"
#include "psmds/parallel.hpp"

namespace psmds {

void SolverConfig::validate() const {
  if (initial_radius && !(*initial_radius > 0.0 && std::isfinite(*initial_radius)))
    throw InvalidArgument("initial radius must be positive");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (initial_radius && !(delta < *initial_radius))
    throw InvalidArgument("delta must be smaller than the initial radius");
  if (!(direction_sample_fraction > 0.0 && direction_sample_fraction <= 1.0))
    throw InvalidArgument("direction sample fraction must lie in (0, 1]");
  if (max_epochs == 0) throw InvalidArgument("max_epochs must be positive");
  if (recompute_every == 0) throw InvalidArgument("recompute_every must be positive");
  if (!(probe_start_radius > 0.0)) throw InvalidArgument("probe start radius must be positive");
}

SearchDirectionSet::SearchDirectionSet(double radius, std::size_t dim,
                                       std::vector<SearchDirection> directions)
    : radius_(radius), dim_(dim), directions_(std::move(directions)) {}

Matrix SearchDirectionSet::as_matrix() const {
  Matrix m(directions_.size(), dim_);
  for (std::size_t k = 0; k < directions_.size(); ++k) m(k, directions_[k].axis) = directions_[k].step;
  return m;
}

SearchDirectionSet search_directions(double radius, std::size_t dim) {
  if (!(radius > 0.0)) throw InvalidArgument("search radius must be positive");
  if (dim < 1) throw InvalidArgument("search dimension must be >= 1");
  std::vector<SearchDirection> dirs;
  dirs.reserve(2 * dim);
  for (std::size_t l = 0; l < dim; ++l) dirs.push_back({l, radius});
  for (std::size_t l = 0; l < dim; ++l) dirs.push_back({l, -radius});
  return SearchDirectionSet(radius, dim, std::move(dirs));
}

SearchDirectionSet sample_directions(const SearchDirectionSet& directions, double fraction,
                                     std::mt19937_64& rng) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw InvalidArgument("direction sample fraction must lie in (0, 1]");
  const std::size_t dim = directions.dim();
  const auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(dim) - 1e-12));
  const std::size_t count = std::clamp<std::size_t>(keep, 1, dim);
  if (count == dim) return directions;

  std::vector<std::size_t> axes(dim);
  std::iota(axes.begin(), axes.end(), std::size_t{0});
  for (std::size_t k = 0; k < count; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, dim - 1);
    std::swap(axes[k], axes[pick(rng)]);
  }
  axes.resize(count);
  std::sort(axes.begin(), axes.end());

  std::vector<SearchDirection> dirs;
  dirs.reserve(2 * count);
  for (const double sign : {1.0, -1.0})
    for (const auto& d : directions)
      if ((d.step > 0) == (sign > 0) && std::binary_search(axes.begin(), axes.end(), d.axis))
        dirs.push_back(d);
  return SearchDirectionSet(directions.radius(), dim, std::move(dirs));
}

PointMatrix uniform_initialization(std::size_t n_points, std::size_t dim, std::uint64_t seed) {
  PointMatrix x(n_points, dim);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < n_points; ++i)
    for (std::size_t l = 0; l < dim; ++l) x(i, l) = unit(rng);
  return x;
}

SearchState::SearchState(const DissimilarityMatrix& target, PointMatrix initial)
    : target_(&target),
      points_(std::move(initial)),
      distances_(pairwise_distances(points_)),
      error_(mse_stress(target, distances_)) {
  if (points_.n_points() != target.size())
    throw InvalidArgument("initial configuration and target differ in size");
}

void SearchState::recompute() {
  distances_ = pairwise_distances(points_);
  error_ = mse_stress(*target_, distances_);
}

double SearchState::refresh_error() {
  error_ = mse_stress(*target_, distances_);
  return error_;
}

struct MoveEngine {
  static MoveResult run(SearchState& s, std::size_t i, const SearchDirectionSet& dirs,
                        double bound) {
    const std::size_t n = s.distances_.size();
    const std::size_t candidates = dirs.size();
    if (i >= n) throw InvalidArgument("optimal_move: point index out of range");
    if (dirs.dim() != s.points_.dim())
      throw InvalidArgument("optimal_move: direction dimension differs from embedding");
    if (n < 2 || candidates == 0) return {std::nullopt, s.error_};

    const auto t_row = s.target_->row(i);
    const auto d_row = s.distances_.row(i);
    const double inv_n2 = 1.0 / (static_cast<double>(n) * static_cast<double>(n));

    double old_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double r = t_row[j] - d_row[j];
      old_sum += r * r;
    }

    // Map: row residual sum for each candidate, incremental distance update
    // formula applied on the fly.
    std::vector<double> cand_sum(candidates);
    const PointMatrix& x = s.points_;
    const std::size_t dim = x.dim();
    const double* xdata = x.flat().data();
    PSMDS_OMP_PARALLEL_FOR_STATIC(candidates > 1 && n * candidates >= 65536)
    for (std::ptrdiff_t sc = 0; sc < static_cast<std::ptrdiff_t>(candidates); ++sc) {
      const auto& dir = dirs[static_cast<std::size_t>(sc)];
      const std::size_t l = dir.axis;
      const double old_coord = xdata[i * dim + l];
      const double new_coord = old_coord + dir.step;
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) {
          sum += t_row[j] * t_row[j];
          continue;
        }
        const double xj = xdata[j * dim + l];
        const double before = old_coord - xj;
        const double after = new_coord - xj;
        const double radicand = d_row[j] * d_row[j] - before * before + after * after;
        const double d_new = radicand > 0.0 ? std::sqrt(radicand) : 0.0;
        const double r = t_row[j] - d_new;
        sum += r * r;
      }
      cand_sum[static_cast<std::size_t>(sc)] = sum;
    }
    s.evaluations_ += static_cast<std::uint64_t>(candidates) * (n - 1);

    // Reduce: lowest error, lowest index on ties.
    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates; ++c)
      if (cand_sum[c] < cand_sum[best]) best = c;

    const bool bounded = std::isfinite(bound);
    const double eps = std::numeric_limits<double>::epsilon();
    // Improvements smaller than this are indistinguishable from rounding in the
    // row sums and in the full-matrix error evaluated at epoch boundaries.
    const double resolution =
        8.0 * eps * (std::abs(s.error_) + 2.0 * inv_n2 * (old_sum + cand_sum[best]));
    const double predicted = s.error_ + 2.0 * inv_n2 * (cand_sum[best] - old_sum);
    if (bounded && !(predicted < bound - resolution)) return {std::nullopt, s.error_};

    // Apply the move with row i recomputed exactly from the coordinates, so D
    // stays bit-identical to pairwise_distances(X).
    const SearchDirection dir = dirs[best];
    const double saved = s.points_(i, dir.axis);
    s.points_(i, dir.axis) = saved + dir.step;
    std::vector<double> fresh(n, 0.0);
    double new_sum = 0.0;
    const auto xi = s.points_.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) {
        const auto xj = s.points_.row(j);
        double sq = 0.0;
        for (std::size_t l = 0; l < dim; ++l) {
          const double diff = xi[l] - xj[l];
          sq += diff * diff;
        }
        fresh[j] = std::sqrt(sq);
      }
      const double r = t_row[j] - fresh[j];
      new_sum += r * r;
    }
    const double change = 2.0 * inv_n2 * (new_sum - old_sum);
    if (bounded && !(s.error_ + change < bound - resolution)) {
      s.points_(i, dir.axis) = saved;
      return {std::nullopt, s.error_};
    }
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) s.distances_.set(i, j, fresh[j]);
    s.error_ += change;
    return {best, s.error_};
  }
};

MoveResult optimal_move(SearchState& state, std::size_t point,
                        const SearchDirectionSet& directions, double error_bound) {
  return MoveEngine::run(state, point, directions, error_bound);
}

namespace {

std::mt19937_64 direction_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x5eedu, 0xd1ecu};
  return std::mt19937_64(seq);
}

// One pass over every point at radius r. Returns the epoch-end error
// computed from scratch.
double run_epoch(SearchState& state, double radius, bool bad_moves, double fraction,
                 std::mt19937_64& rng) {
  const std::size_t dim = state.points().dim();
  const SearchDirectionSet dirs = sample_directions(search_directions(radius, dim), fraction, rng);
  const double unbounded = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state.points().n_points(); ++i)
    optimal_move(state, i, dirs, bad_moves ? unbounded : state.error());
  return state.refresh_error();
}

std::string format_double(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

double auto_radius(const DissimilarityMatrix& target, std::size_t dim, const SolverConfig& config) {
  if (config.radius_probes == 0) return config.initial_radius.value_or(1.0);
  if (dim < 1) throw InvalidArgument("auto_radius: L must be >= 1");
  const PointMatrix start = uniform_initialization(target.size(), dim, config.seed);
  const double start_error = mse_stress(target, pairwise_distances(start));

  std::set<double> probed;
  std::optional<double> best;
  double radius = config.probe_start_radius;
  for (std::size_t p = 0; p < config.radius_probes; ++p) {
    probed.insert(radius);
    SearchState state(target, start);
    std::mt19937_64 rng = direction_rng(config.seed);
    // Dry runs always take bad moves: with monotone acceptance the error can
    // never rise, so the probe would carry no information.
    const double after = run_epoch(state, radius, true, config.direction_sample_fraction, rng);
    const bool increased = after > start_error;
    if (!increased) best = std::max(best.value_or(radius), radius);
    const double next = increased ? radius / 2.0 : radius * 2.0;
    if (probed.count(next)) break;
    radius = next;
  }
  return best.value_or(1.0);
}

FitResult fit(const DissimilarityMatrix& target, std::size_t dim, const SolverConfig& config,
              const EpochObserver& observer) {
  config.validate();
  if (dim < 1) throw InvalidArgument("fit: L must be >= 1");
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(clock::now() - started).count();
  };

  const std::size_t n = target.size();
  SearchState state(target, uniform_initialization(n, dim, config.seed));

  double radius = 1.0;
  if (config.initial_radius) {
    radius = *config.initial_radius;
  } else if (n > 1) {
    radius = auto_radius(target, dim, config);
  }

  FitResult result{state.points(), {}, radius, radius, state.error(), 0};
  auto& trace = result.trace;
  trace.metadata["method"] = "pattern-search";
  trace.metadata["objective"] = "mse";
  trace.metadata["initial_radius"] = format_double(radius);
  trace.metadata["radius_source"] = config.initial_radius ? "explicit" : "auto";
  trace.metadata["seed"] = std::to_string(config.seed);
  trace.metadata["bad_moves"] = config.allow_bad_moves ? "true" : "false";
  trace.records.push_back({0, state.error(), radius, elapsed()});

  if (n == 1) {
    trace.termination_reason = TerminationReason::radius_below_delta;
    result.final_radius = 0.0;
    return result;
  }

  std::mt19937_64 rng = direction_rng(config.seed);
  double error = state.error();
  double previous = std::numeric_limits<double>::infinity();
  double best_error = error;
  PointMatrix best_points = state.points();
  std::size_t epoch = 0;
  const double unbounded = std::numeric_limits<double>::infinity();

  while (true) {
    if (previous - error <= config.epsilon * error) radius /= 2.0;
    if (radius < config.delta) {
      trace.termination_reason = TerminationReason::radius_below_delta;
      break;
    }
    if (epoch == config.max_epochs) {
      trace.termination_reason = TerminationReason::max_epochs;
      break;
    }

    const SearchDirectionSet dirs = sample_directions(search_directions(radius, dim),
                                                      config.direction_sample_fraction, rng);
    for (std::size_t i = 0; i < n; ++i)
      optimal_move(state, i, dirs, config.allow_bad_moves ? unbounded : state.error());
    ++epoch;

    if (epoch % config.recompute_every == 0) state.recompute();
    previous = error;
    error = state.refresh_error();
    trace.records.push_back({epoch, error, radius, elapsed()});
    if (error < best_error) {
      best_error = error;
      best_points = state.points();
    }
    if (observer) observer(epoch, state);
  }

  result.final_radius = radius;
  result.distance_evaluations = state.distance_evaluations();
  if (config.allow_bad_moves && best_error < error) {
    result.embedding = std::move(best_points);
    result.final_error = best_error;
  } else {
    result.embedding = state.points();
    result.final_error = error;
  }
  return result;
}

}  // namespace psmds
