#include <gtest/gtest.h>

#include <numeric>

#include "bfd/pipeline.hpp"
#include "bfd/ternary.hpp"

using namespace bfd;

namespace {

pipeline::ExtractOptions small_options() {
  pipeline::ExtractOptions o;
  o.discovery.max_length = 8;
  o.discovery.max_shapelets = 6;
  o.discovery.candidate_budget = 150;
  o.discovery.seed = 2;
  o.neighbors_per_side = 2;
  return o;
}

}  // namespace

TEST(Pipeline, ExtractShapesFollowSplit) {
  const auto ds = split(synthesize_dataset(3, 8, 256, 1), 5, 3, 4);
  const auto ex = pipeline::extract(ds, small_options());
  EXPECT_EQ(ex.train.features.rows(), 15u);
  EXPECT_EQ(ex.test.features.rows(), 9u);
  EXPECT_EQ(ex.train.features.cols(), 32u);
  EXPECT_EQ(ex.test.features.cols(), 32u);
  EXPECT_EQ(ex.train.labels.size(), 15u);
  for (std::size_t i = 0; i < ds.split().test.size(); ++i) {
    EXPECT_EQ(ex.test.labels[i], ds[ds.split().test[i]].label);
  }
}

TEST(Pipeline, UnsplitDatasetUsesEveryRecordForTraining) {
  const auto ds = synthesize_dataset(2, 4, 200, 3);
  const auto ex = pipeline::extract(ds, small_options());
  EXPECT_EQ(ex.train.features.rows(), 8u);
  EXPECT_EQ(ex.test.features.rows(), 0u);
}

TEST(Pipeline, FeatureRowsAreTwoNormalizedHistograms) {
  const auto ds = split(synthesize_dataset(2, 6, 256, 5), 4, 2, 1);
  const auto ex = pipeline::extract(ds, small_options());
  for (std::size_t r = 0; r < ex.train.features.rows(); ++r) {
    const auto row = ex.train.features.row(r);
    const double pos = std::accumulate(row.begin(), row.begin() + 16, 0.0);
    const double neg = std::accumulate(row.begin() + 16, row.end(), 0.0);
    EXPECT_NEAR(pos, 1.0, 1e-12);
    EXPECT_NEAR(neg, 1.0, 1e-12);
  }
}

TEST(Pipeline, RowMatchesComposedTransformAndFeaturize) {
  const auto ds = split(synthesize_dataset(2, 6, 256, 6), 4, 2, 1);
  const auto ex = pipeline::extract(ds, small_options());
  const auto& rec = ds[ds.split().test[0]].samples;
  const auto aligned = shapelet::transform(rec, ex.shapelets);
  const auto expected =
      ternary::featurize(aligned, {2, ex.shapelets.beta}).normalized();
  const auto row = ex.test.features.row(0);
  EXPECT_EQ(std::vector<double>(row.begin(), row.end()), expected);
}

TEST(Pipeline, TimeDomainTableShape) {
  const auto ds = synthesize_dataset(2, 3, 128, 1);
  const std::vector<std::size_t> rows{0, 4};
  const auto t = pipeline::time_domain_table(ds, rows);
  EXPECT_EQ(t.features.rows(), 2u);
  EXPECT_EQ(t.features.cols(), kTimeDomainFeatureCount);
  EXPECT_EQ(t.labels, (std::vector<int>{0, 1}));
}
