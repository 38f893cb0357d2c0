#include "bfd/ternary.hpp"

#include <cmath>
#include <string>

#include "bfd/error.hpp"

namespace bfd::ternary {
namespace {

void validate(std::size_t n, const TernaryConfig& config) {
  const std::size_t k = config.neighbors_per_side;
  if (k < 1 || k > kMaxNeighborsPerSide) {
    throw ArgumentError("neighbors_per_side must be in [1, " +
                        std::to_string(kMaxNeighborsPerSide) + "]");
  }
  if (!std::isfinite(config.beta) || config.beta < 0.0) {
    throw ArgumentError("beta must be finite and non-negative");
  }
  if (n < 2 * k + 1) {
    throw ArgumentError("sequence of length " + std::to_string(n) + " too short for k=" +
                        std::to_string(k));
  }
}

}  // namespace

TernaryCodes encode(std::span<const double> x, const TernaryConfig& config) {
  validate(x.size(), config);
  const std::size_t k = config.neighbors_per_side;
  const std::size_t centers = x.size() - 2 * k;
  TernaryCodes out;
  out.positive.resize(centers);
  out.negative.resize(centers);
  for (std::size_t i = 0; i < centers; ++i) {
    const std::size_t c = i + k;
    std::uint32_t pos = 0, neg = 0;
    for (std::size_t j = 0; j < 2 * k; ++j) {
      const std::size_t nb = j < k ? c - k + j : c + (j - k) + 1;
      const int code = code_point(x[c], x[nb], config.beta);
      pos |= static_cast<std::uint32_t>(code > 0) << j;
      neg |= static_cast<std::uint32_t>(code < 0) << j;
    }
    out.positive[i] = pos;
    out.negative[i] = neg;
  }
  return out;
}

TernaryFeatureVector featurize(std::span<const double> x, const TernaryConfig& config) {
  const auto codes = encode(x, config);
  TernaryFeatureVector f;
  f.hist_pos.assign(config.bins(), 0);
  f.hist_neg.assign(config.bins(), 0);
  for (auto c : codes.positive) ++f.hist_pos[c];
  for (auto c : codes.negative) ++f.hist_neg[c];
  f.total_centers = codes.positive.size();
  return f;
}

std::vector<double> TernaryFeatureVector::normalized() const {
  std::vector<double> out;
  out.reserve(hist_pos.size() + hist_neg.size());
  const double n = total_centers == 0 ? 1.0 : static_cast<double>(total_centers);
  for (auto c : hist_pos) out.push_back(static_cast<double>(c) / n);
  for (auto c : hist_neg) out.push_back(static_cast<double>(c) / n);
  return out;
}

}  // namespace bfd::ternary
