#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bfd/signal.hpp"

namespace bfd::shapelet {

/// A discriminative subsequence cut from a training record.
struct Shapelet {
  std::vector<double> values;
  std::size_t source_record = 0;  // index into the owning Dataset
  std::size_t start = 0;
  double ig = 0.0;  // bits

  std::size_t length() const noexcept { return values.size(); }
  friend bool operator==(const Shapelet&, const Shapelet&) = default;
};

/// Selected shapelets, ig non-increasing, plus the ternary threshold derived
/// from them.
struct ShapeletSet {
  std::vector<Shapelet> shapelets;
  double beta = 0.0;

  std::size_t max_length() const noexcept;
  std::size_t total_length() const noexcept;
  friend bool operator==(const ShapeletSet&, const ShapeletSet&) = default;
};

// One entry of a distance profile: minimal window distance to a record and
// that record's label.
struct ProfileEntry {
  double distance = 0.0;
  int label = 0;
};

struct WindowMatch {
  std::size_t start = 0;
  double distance = 0.0;
};

/// Minimum over all length-L windows of sum((w_k - t_k)^2); no square root.
/// Ties resolve to the smallest start. Throws ArgumentError when the series
/// is shorter than the shapelet or the shapelet is empty.
WindowMatch best_match(std::span<const double> shapelet, std::span<const double> series);
double subsequence_distance(std::span<const double> shapelet, std::span<const double> series);

/// Binary Shannon entropy in bits of a group split into `in_class` and
/// `out_class` members; 0*log(0) is 0. Throws on an empty group.
double entropy(std::size_t in_class, std::size_t out_class);

// IG of splitting `profile` at `threshold` (<= goes left), with labels
// binarized as `positive_label` vs the rest.
double information_gain_at(std::span<const ProfileEntry> profile, int positive_label,
                           double threshold);

struct SplitScore {
  double gain = 0.0;
  double threshold = std::numeric_limits<double>::quiet_NaN();
};

/// Best IG over thresholds at midpoints between consecutive distinct
/// distances. `profile` must be sorted ascending by distance and hold at
/// least two entries. When every distance is equal the gain is 0 and the
/// threshold NaN.
SplitScore information_gain(std::span<const ProfileEntry> profile, int positive_label);

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

struct DiscoveryOptions {
  std::size_t min_length = 3;
  std::size_t max_length = 24;
  // Maximum shapelets kept; 0 selects 10 x number of training records.
  std::size_t max_shapelets = 0;
  double quality = 0.05;
  // Windows are enumerated exhaustively up to this count, sampled above it.
  std::size_t candidate_budget = 50000;
  std::uint64_t seed = 0;
};

// Number of (record, length, start) windows over the training records.
std::uint64_t count_candidates(const Dataset& dataset, std::size_t min_length,
                               std::size_t max_length);

/// Samples candidate windows from the training records, scores each by the
/// best one-vs-rest information gain of its distance profile, drops those
/// below `quality`, and keeps the best `max_shapelets`. Throws
/// NoShapeletsFound when nothing passes the quality floor.
ShapeletSet discover(const Dataset& dataset, const DiscoveryOptions& options);

/// Sample standard deviation (n - 1 divisor) over the concatenated values of
/// every shapelet in the set. Needs at least two values in total.
double compute_beta(const ShapeletSet& set);

/// Concatenation of the record's best-aligned window for each shapelet, in
/// set order.
std::vector<double> transform(std::span<const double> record, const ShapeletSet& set);

nlohmann::json to_json(const ShapeletSet& set);
ShapeletSet shapelet_set_from_json(const nlohmann::json& j);

}  // namespace bfd::shapelet
