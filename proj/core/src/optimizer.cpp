#include "bfd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bfd/error.hpp"

namespace bfd::opt {

bool SearchSpace::contains(std::span<const double> x) const {
  if (x.size() != dimension()) return false;
  for (std::size_t d = 0; d < x.size(); ++d) {
    if (!(x[d] >= lower[d] && x[d] <= upper[d])) return false;
  }
  return true;
}

void SearchSpace::validate() const {
  if (lower.empty()) throw ArgumentError("search space needs at least one dimension");
  if (lower.size() != upper.size()) throw ArgumentError("bound vectors differ in length");
  for (std::size_t d = 0; d < lower.size(); ++d) {
    if (!std::isfinite(lower[d]) || !std::isfinite(upper[d])) {
      throw ArgumentError("non-finite bound in dimension " + std::to_string(d));
    }
    if (lower[d] > upper[d]) {
      throw ArgumentError("lower > upper in dimension " + std::to_string(d));
    }
  }
  if (!objective) throw ArgumentError("search space has no objective");
}

bool SubRegion::contains(std::span<const double> x) const {
  for (std::size_t d = 0; d < x.size(); ++d) {
    if (x[d] < lower[d]) return false;
    if (closed_upper[d] ? x[d] > upper[d] : x[d] >= upper[d]) return false;
  }
  return true;
}

void RunConfig::validate(std::size_t dimension) const {
  if (colony_size < 2) throw ArgumentError("colony_size must be >= 2");
  if (max_iterations < 1) throw ArgumentError("max_iterations must be >= 1");
  if (regions < 1) throw ArgumentError("regions must be >= 1");
  if (!(weight_step > 0.0 && weight_step < 1.0)) {
    throw ArgumentError("weight_step must be in (0, 1)");
  }
  if (!(weight_min > 0.0 && weight_min <= weight_max)) {
    throw ArgumentError("weight clamp must satisfy 0 < min <= max");
  }
  if (effective_limit(dimension) < 1) throw ArgumentError("limit must be >= 1");
}

std::vector<double> neighborhood_move(std::span<const double> x_i, std::span<const double> x_j,
                                      std::size_t k, double u, std::span<const double> lower,
                                      std::span<const double> upper) {
  std::vector<double> out(x_i.begin(), x_i.end());
  out[k] = std::clamp(x_i[k] + u * (x_i[k] - x_j[k]), lower[k], upper[k]);
  return out;
}

std::vector<double> neighborhood_move(std::span<const double> x_i, std::span<const double> x_j,
                                      std::size_t k, std::mt19937_64& rng,
                                      std::span<const double> lower,
                                      std::span<const double> upper) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return neighborhood_move(x_i, x_j, k, u(rng), lower, upper);
}

double fitness(double value, double floor, Sense sense) {
  const double gap = value - floor;
  return sense == Sense::kMinimize ? 1.0 / (1.0 + gap) : 1.0 + gap;
}

namespace {

std::vector<double> normalize_positive(std::span<const double> w, const char* what) {
  if (w.empty()) throw ArgumentError(std::string(what) + ": empty input");
  double total = 0.0;
  for (double v : w) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ArgumentError(std::string(what) + ": every entry must be positive and finite");
    }
    total += v;
  }
  std::vector<double> p(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) p[i] = w[i] / total;
  return p;
}

}  // namespace

std::vector<double> selection_probs(std::span<const double> fits) {
  return normalize_positive(fits, "selection_probs");
}

std::vector<double> region_probs(std::span<const double> weights) {
  return normalize_positive(weights, "region_probs");
}

std::vector<SubRegion> partition(const SearchSpace& space, std::size_t count,
                                 RegionLayout layout) {
  space.validate();
  if (count < 1) throw ArgumentError("region count must be >= 1");
  const std::size_t D = space.dimension();

  // Per-dimension cut counts.
  std::vector<std::size_t> cuts(D, 1);
  if (layout == RegionLayout::kSlices) {
    std::size_t axis = 0;
    for (std::size_t d = 0; d < D; ++d) {
      if (space.upper[d] > space.lower[d]) {
        axis = d;
        break;
      }
    }
    cuts[axis] = count;
  } else {
    if (D > 3) throw ArgumentError("grid layout supports at most 3 dimensions");
    const auto m = static_cast<std::size_t>(
        std::llround(std::pow(static_cast<double>(count), 1.0 / static_cast<double>(D))));
    std::size_t total = 1;
    for (std::size_t d = 0; d < D; ++d) total *= m;
    if (total != count) {
      throw ArgumentError("grid layout needs a region count that is a perfect D-th power");
    }
    std::fill(cuts.begin(), cuts.end(), m);
  }

  std::vector<SubRegion> regions;
  regions.reserve(count);
  std::vector<std::size_t> idx(D, 0);
  for (std::size_t r = 0; r < count; ++r) {
    SubRegion reg;
    reg.lower.resize(D);
    reg.upper.resize(D);
    reg.closed_upper.resize(D);
    for (std::size_t d = 0; d < D; ++d) {
      const double lo = space.lower[d], hi = space.upper[d];
      const double width = (hi - lo) / static_cast<double>(cuts[d]);
      reg.lower[d] = lo + width * static_cast<double>(idx[d]);
      const bool last = idx[d] + 1 == cuts[d];
      reg.upper[d] = last ? hi : lo + width * static_cast<double>(idx[d] + 1);
      reg.closed_upper[d] = last;
    }
    regions.push_back(std::move(reg));
    // Odometer increment, first dimension fastest.
    for (std::size_t d = 0; d < D; ++d) {
      if (++idx[d] < cuts[d]) break;
      idx[d] = 0;
    }
  }
  return regions;
}

namespace {

class Colony {
 public:
  Colony(const SearchSpace& space, const RunConfig& config)
      : space_(space),
        config_(config),
        limit_(config.effective_limit(space.dimension())),
        rng_(config.seed) {}

  // Uniform random position within [lower, upper].
  std::vector<double> random_position(std::span<const double> lower,
                                      std::span<const double> upper) {
    std::vector<double> x(lower.size());
    for (std::size_t d = 0; d < x.size(); ++d) {
      std::uniform_real_distribution<double> u(lower[d], upper[d]);
      x[d] = lower[d] == upper[d] ? lower[d] : u(rng_);
    }
    return x;
  }

  double evaluate(std::span<const double> x) {
    ++trace_.evaluations;
    const double f = space_.objective(x);
    if (!have_best_ || better(f, trace_.best_value, space_.sense)) {
      have_best_ = true;
      trace_.best_value = f;
      trace_.best_position.assign(x.begin(), x.end());
    }
    return f;
  }

  void add_source(std::size_t region, std::span<const double> lower,
                  std::span<const double> upper) {
    FoodSource s;
    s.region = region;
    s.position = random_position(lower, upper);
    s.value = evaluate(s.position);
    sources_.push_back(std::move(s));
  }

  // One neighborhood trial on source i with partner j; greedy acceptance.
  // Returns true when the source improved.
  bool try_improve(std::size_t i, std::size_t j, std::span<const double> lower,
                   std::span<const double> upper) {
    std::uniform_int_distribution<std::size_t> pick_dim(0, space_.dimension() - 1);
    const std::size_t k = pick_dim(rng_);
    auto cand = neighborhood_move(sources_[i].position, sources_[j].position, k, rng_, lower, upper);
    const double f = evaluate(cand);
    auto& s = sources_[i];
    if (better(f, s.value, space_.sense)) {
      s.position = std::move(cand);
      s.value = f;
      s.trials = 0;
      return true;
    }
    ++s.trials;
    return false;
  }

  std::size_t random_other(std::size_t i, std::size_t n) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 2);
    const std::size_t j = pick(rng_);
    return j >= i ? j + 1 : j;
  }

  std::vector<double> population_probs() const {
    double floor = std::numeric_limits<double>::infinity();
    for (const auto& s : sources_) floor = std::min(floor, s.value);
    std::vector<double> fits(sources_.size());
    for (std::size_t i = 0; i < fits.size(); ++i) {
      fits[i] = fitness(sources_[i].value, floor, space_.sense);
    }
    return selection_probs(fits);
  }

  void start_trace() { trace_.initial_best = trace_.best_value; }

  void end_iteration(std::size_t iteration, std::span<const SubRegion> regions) {
    trace_.best_values.push_back(trace_.best_value);
    if (config_.on_iteration) {
      config_.on_iteration(IterationState{iteration, sources_, regions, limit_});
    }
  }

  RunTrace finish() {
    const double final_best = trace_.best_value;
    for (std::size_t t = 0; t < trace_.best_values.size(); ++t) {
      if (std::abs(trace_.best_values[t] - final_best) <= kConvergenceTolerance) {
        trace_.convergence_iteration = t + 1;
        break;
      }
    }
    return std::move(trace_);
  }

  const SearchSpace& space_;
  const RunConfig& config_;
  const std::size_t limit_;
  std::mt19937_64 rng_;
  std::vector<FoodSource> sources_;
  RunTrace trace_;
  bool have_best_ = false;
};

}  // namespace

RunTrace run_abc(const SearchSpace& space, const RunConfig& config) {
  space.validate();
  config.validate(space.dimension());
  Colony colony(space, config);
  const std::size_t N = config.colony_size;
  const auto& lo = space.lower;
  const auto& hi = space.upper;

  for (std::size_t i = 0; i < N; ++i) colony.add_source(0, lo, hi);
  colony.start_trace();

  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    for (std::size_t i = 0; i < N; ++i) colony.try_improve(i, colony.random_other(i, N), lo, hi);

    const auto probs = colony.population_probs();
    std::discrete_distribution<std::size_t> roulette(probs.begin(), probs.end());
    for (std::size_t m = 0; m < N; ++m) {
      const std::size_t i = roulette(colony.rng_);
      colony.try_improve(i, colony.random_other(i, N), lo, hi);
    }

    for (auto& s : colony.sources_) {
      if (s.trials > colony.limit_) {
        s.position = colony.random_position(lo, hi);
        s.value = colony.evaluate(s.position);
        s.trials = 0;
      }
    }
    colony.end_iteration(it, {});
  }
  return colony.finish();
}

RunTrace run_iabc(const SearchSpace& space, const RunConfig& config) {
  space.validate();
  config.validate(space.dimension());
  const std::size_t N = config.colony_size;
  const std::size_t V = config.regions;
  if (V > N) throw ArgumentError("regions must not exceed colony_size");

  Colony colony(space, config);
  auto regions = partition(space, V, config.layout);
  const Sense sense = space.sense;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& r : regions) r.weight = 1.0 - unit(colony.rng_);  // (0, 1]

  std::vector<std::vector<std::size_t>> members(V);
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t r = i % V;
    members[r].push_back(i);
    colony.add_source(r, regions[r].lower, regions[r].upper);
  }
  auto region_best = [&](std::size_t r) {
    std::size_t best = members[r].front();
    for (auto i : members[r]) {
      if (better(colony.sources_[i].value, colony.sources_[best].value, sense)) best = i;
    }
    return best;
  };
  for (std::size_t r = 0; r < V; ++r) regions[r].best_value = colony.sources_[region_best(r)].value;
  colony.start_trace();

  auto partner = [&](std::size_t i) {
    const auto& m = members[colony.sources_[i].region];
    if (m.size() < 2) return colony.random_other(i, N);
    std::uniform_int_distribution<std::size_t> pick(0, m.size() - 2);
    std::size_t p = pick(colony.rng_);
    if (m[p] >= i) ++p;  // members are sorted, so this skips i itself
    return m[p];
  };
  auto note_region = [&](std::size_t i) {
    auto& reg = regions[colony.sources_[i].region];
    if (better(colony.sources_[i].value, reg.best_value, sense)) {
      reg.best_value = colony.sources_[i].value;
    }
  };

  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    for (std::size_t i = 0; i < N; ++i) {
      const auto& reg = regions[colony.sources_[i].region];
      colony.try_improve(i, partner(i), reg.lower, reg.upper);
    }

    for (std::size_t r = 0; r < V; ++r) {
      auto& reg = regions[r];
      const double current = colony.sources_[region_best(r)].value;
      if (better(current, reg.best_value, sense)) {
        reg.weight *= 1.0 + config.weight_step;
        reg.best_value = current;
      } else {
        reg.weight *= 1.0 - config.weight_step;
      }
      reg.weight = std::clamp(reg.weight, config.weight_min, config.weight_max);
    }

    std::vector<double> weights(V);
    for (std::size_t r = 0; r < V; ++r) weights[r] = regions[r].weight;
    const auto probs = region_probs(weights);
    std::discrete_distribution<std::size_t> choose(probs.begin(), probs.end());
    for (std::size_t m = 0; m < N; ++m) {
      const std::size_t r = choose(colony.rng_);
      const std::size_t i = region_best(r);
      if (colony.try_improve(i, partner(i), regions[r].lower, regions[r].upper)) note_region(i);
    }

    for (std::size_t i = 0; i < N; ++i) {
      auto& s = colony.sources_[i];
      if (s.trials > colony.limit_) {
        const auto& reg = regions[s.region];
        s.position = colony.random_position(reg.lower, reg.upper);
        s.value = colony.evaluate(s.position);
        s.trials = 0;
        note_region(i);
      }
    }
    colony.end_iteration(it, regions);
  }
  return colony.finish();
}

std::size_t iterations_to_target(const RunTrace& trace, double target, double tolerance) {
  for (std::size_t t = 0; t < trace.best_values.size(); ++t) {
    if (std::abs(trace.best_values[t] - target) <= tolerance) return t + 1;
  }
  return 0;
}

}  // namespace bfd::opt
