#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace bfd::opt {

enum class Sense { kMinimize, kMaximize };

using Objective = std::function<double(std::span<const double>)>;

/// Box-bounded search problem. A dimension with lower == upper is fixed at
/// that value.
struct SearchSpace {
  std::vector<double> lower;
  std::vector<double> upper;
  Objective objective;
  Sense sense = Sense::kMinimize;

  std::size_t dimension() const noexcept { return lower.size(); }
  bool contains(std::span<const double> x) const;
  void validate() const;  // throws ArgumentError
};

// True when `a` is strictly better than `b` under `sense`.
constexpr bool better(double a, double b, Sense sense) noexcept {
  return sense == Sense::kMinimize ? a < b : a > b;
}

struct FoodSource {
  std::vector<double> position;
  double value = 0.0;
  std::size_t trials = 0;
  std::size_t region = 0;  // owning sub-region (always 0 for plain ABC)
};

/// Axis-aligned cell of the search box. Membership is half-open on the upper
/// face except where that face is the outer boundary of the space.
struct SubRegion {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> closed_upper;
  double weight = 1.0;
  double best_value = 0.0;

  bool contains(std::span<const double> x) const;
};

enum class RegionLayout {
  kSlices,  // v equal slices along the first non-degenerate dimension
  kGrid,    // m^D equal cells, requires v == m^D
};

struct IterationState;

struct RunConfig {
  std::size_t colony_size = 200;  // food sources == employed bees == onlookers
  std::size_t max_iterations = 1000;
  std::size_t limit = 0;  // scout threshold; 0 selects colony_size * D
  std::size_t regions = 4;
  double weight_step = 0.1;
  double weight_min = 1e-3;
  double weight_max = 1e3;
  RegionLayout layout = RegionLayout::kSlices;
  std::uint64_t seed = 0;
  // Called once per iteration after the scout phase.
  std::function<void(const IterationState&)> on_iteration;

  void validate(std::size_t dimension) const;  // throws ArgumentError
  std::size_t effective_limit(std::size_t dimension) const noexcept {
    return limit == 0 ? colony_size * dimension : limit;
  }
};

struct IterationState {
  std::size_t iteration = 0;  // 1-based
  std::span<const FoodSource> sources;
  std::span<const SubRegion> regions;
  std::size_t limit = 0;
};

struct RunTrace {
  double initial_best = 0.0;
  std::vector<double> best_values;  // best-so-far after each iteration
  std::vector<double> best_position;
  double best_value = 0.0;
  // First 1-based iteration whose best is within 1e-12 of the final best.
  std::size_t convergence_iteration = 0;
  std::size_t evaluations = 0;
};

inline constexpr double kConvergenceTolerance = 1e-12;

/// Copy of x_i with coordinate k moved to x_ik + u (x_ik - x_jk), clamped
/// to [lower_k, upper_k].
std::vector<double> neighborhood_move(std::span<const double> x_i, std::span<const double> x_j,
                                      std::size_t k, double u, std::span<const double> lower,
                                      std::span<const double> upper);

// Same move with u drawn from Uniform(-1, 1).
std::vector<double> neighborhood_move(std::span<const double> x_i, std::span<const double> x_j,
                                      std::size_t k, std::mt19937_64& rng,
                                      std::span<const double> lower,
                                      std::span<const double> upper);

/// Positive fitness used for roulette selection: 1 / (1 + f - floor) when
/// minimizing, 1 + (f - floor) when maximizing, where floor is the smallest
/// objective value in the current population.
double fitness(double value, double floor, Sense sense);

// fit_i / sum(fit). Throws ArgumentError for empty input or a fit <= 0.
std::vector<double> selection_probs(std::span<const double> fits);
// theta_j / sum(theta). Same error rules.
std::vector<double> region_probs(std::span<const double> weights);

std::vector<SubRegion> partition(const SearchSpace& space, std::size_t count,
                                 RegionLayout layout);

/// Canonical employed / onlooker / scout loop.
RunTrace run_abc(const SearchSpace& space, const RunConfig& config);

/// Sub-region variant: sources are spread round-robin over `regions` cells
/// and search inside them; after the employed phase each cell's weight is
/// multiplied by (1 + step) if its best improved, else by (1 - step), then
/// clamped; onlookers pick a cell by weight and exploit its best source.
RunTrace run_iabc(const SearchSpace& space, const RunConfig& config);

// First 1-based iteration whose best is within `tolerance` of `target`, or
// 0 if never reached.
std::size_t iterations_to_target(const RunTrace& trace, double target, double tolerance);

}  // namespace bfd::opt
