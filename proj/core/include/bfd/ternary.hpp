#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bfd::ternary {

struct TernaryConfig {
  std::size_t neighbors_per_side = 4;  // k
  double beta = 0.0;

  std::size_t pattern_bits() const noexcept { return 2 * neighbors_per_side; }
  std::size_t bins() const noexcept { return std::size_t{1} << pattern_bits(); }
};

// Largest supported k; histograms have 2^(2k) bins each.
inline constexpr std::size_t kMaxNeighborsPerSide = 10;

/// +1 when center > neighbor + beta, -1 when center < neighbor - beta,
/// 0 inside the dead zone.
constexpr int code_point(double center, double neighbor, double beta) noexcept {
  if (center > neighbor + beta) return 1;
  if (center < neighbor - beta) return -1;
  return 0;
}

struct TernaryCodes {
  std::vector<std::uint32_t> positive;
  std::vector<std::uint32_t> negative;
};

/// Encodes every center c in [k, n-1-k]. Neighbor j (0 <= j < 2k) is
/// c-k+j for j < k and c+j-k+1 otherwise, i.e. [left_k .. left_1,
/// right_1 .. right_k]; its bit carries weight 2^j. A +1 code sets the bit
/// in the positive pattern, a -1 code in the negative one.
TernaryCodes encode(std::span<const double> sequence, const TernaryConfig& config);

struct TernaryFeatureVector {
  std::vector<std::uint64_t> hist_pos;
  std::vector<std::uint64_t> hist_neg;
  std::uint64_t total_centers = 0;

  // hist_pos ++ hist_neg, each divided by total_centers.
  std::vector<double> normalized() const;
};

TernaryFeatureVector featurize(std::span<const double> sequence, const TernaryConfig& config);

}  // namespace bfd::ternary
