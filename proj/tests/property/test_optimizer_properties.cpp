#include <gtest/gtest.h>

#include "properties.hpp"

using namespace bfd::testing;

TEST(OptimizerProperties, SelectionAndRegionProbabilitiesNormalize) {
  const auto r = probability_normalization(201, 500);
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(OptimizerProperties, SubRegionsPartitionTheBox) {
  const auto r = subregion_partition_coverage(202, 40);
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(OptimizerProperties, BestSoFarTraceNeverWorsens) {
  const auto r = optimizer_trace_monotonicity(203, 40);
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(OptimizerProperties, EveryEvaluationInsideBounds) {
  const auto r = optimizer_stays_in_bounds(204, 40);
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(OptimizerProperties, TrialCountersNeverExceedLimit) {
  const auto r = scout_limit_respected(205, 40);
  EXPECT_TRUE(r.ok) << r.detail;
}
