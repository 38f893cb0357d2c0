#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bfd/matrix.hpp"
#include "bfd/shapelet.hpp"
#include "bfd/signal.hpp"

namespace bfd::pipeline {

struct FeatureTable {
  Matrix features;
  std::vector<int> labels;
};

struct ExtractOptions {
  shapelet::DiscoveryOptions discovery;
  std::size_t neighbors_per_side = 4;
};

struct Extraction {
  shapelet::ShapeletSet shapelets;
  FeatureTable train;
  FeatureTable test;  // empty when the dataset has no test split
};

/// Shapelet-aligned subsequence of the record, ternary-encoded with the
/// set's beta; returns the normalized positive ++ negative histograms.
std::vector<double> shapelet_ternary_features(std::span<const double> record,
                                              const shapelet::ShapeletSet& set,
                                              std::size_t neighbors_per_side);

FeatureTable shapelet_ternary_table(const Dataset& dataset, std::span<const std::size_t> rows,
                                    const shapelet::ShapeletSet& set,
                                    std::size_t neighbors_per_side);

// Time-domain condition indicators per record (the statistics baseline).
FeatureTable time_domain_table(const Dataset& dataset, std::span<const std::size_t> rows);

/// Discovers shapelets on the training split and featurizes both splits.
Extraction extract(const Dataset& dataset, const ExtractOptions& options);

}  // namespace bfd::pipeline
