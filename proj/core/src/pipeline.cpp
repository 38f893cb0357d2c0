#include "bfd/pipeline.hpp"

#include "bfd/ternary.hpp"

namespace bfd::pipeline {

std::vector<double> shapelet_ternary_features(std::span<const double> record,
                                              const shapelet::ShapeletSet& set,
                                              std::size_t neighbors_per_side) {
  const auto aligned = shapelet::transform(record, set);
  ternary::TernaryConfig cfg{neighbors_per_side, set.beta};
  return ternary::featurize(aligned, cfg).normalized();
}

FeatureTable shapelet_ternary_table(const Dataset& dataset, std::span<const std::size_t> rows,
                                    const shapelet::ShapeletSet& set,
                                    std::size_t neighbors_per_side) {
  FeatureTable t;
  const std::size_t width = 2 * (std::size_t{1} << (2 * neighbors_per_side));
  t.features = Matrix(0, width);
  t.labels.reserve(rows.size());
  for (auto i : rows) {
    t.features.append_row(shapelet_ternary_features(dataset[i].samples, set, neighbors_per_side));
    t.labels.push_back(dataset[i].label);
  }
  return t;
}

FeatureTable time_domain_table(const Dataset& dataset, std::span<const std::size_t> rows) {
  FeatureTable t;
  t.features = Matrix(0, kTimeDomainFeatureCount);
  for (auto i : rows) {
    t.features.append_row(time_domain_features(dataset[i].samples));
    t.labels.push_back(dataset[i].label);
  }
  return t;
}

Extraction extract(const Dataset& dataset, const ExtractOptions& options) {
  Extraction out;
  out.shapelets = shapelet::discover(dataset, options.discovery);
  const auto train = dataset.training_indices();
  out.train = shapelet_ternary_table(dataset, train, out.shapelets, options.neighbors_per_side);
  out.test = shapelet_ternary_table(dataset, dataset.split().test, out.shapelets,
                                    options.neighbors_per_side);
  return out;
}

}  // namespace bfd::pipeline
