#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "bfd/error.hpp"
#include "bfd/tuner.hpp"
#include "oracles.hpp"

using namespace bfd;
using tune::TuneSpace;

namespace {

gbdt::BoosterParams quick_params() {
  gbdt::BoosterParams p;
  p.n_estimators = 10;
  p.max_depth = 3;
  p.learning_rate = 0.3;
  return p;
}

opt::RunConfig small_run(std::uint64_t seed) {
  opt::RunConfig c;
  c.colony_size = 6;
  c.max_iterations = 3;
  c.regions = 2;
  c.seed = seed;
  return c;
}

TuneSpace narrow_space() {
  auto s = TuneSpace::estimators_and_rate();
  s.params[0].upper = 20.0;
  s.base.max_depth = 3;
  return s;
}

}  // namespace

TEST(Objective, SeparableDataScoresOne) {
  std::mt19937_64 rng(1);
  auto d = bfd::testing::separable_data(rng, 30, 3, 2);
  EXPECT_EQ(tune::objective(d.x, d.y, quick_params(), 3, 0), 1.0);
}

TEST(Objective, ShuffledLabelsNearChance) {
  std::mt19937_64 rng(2);
  auto d = bfd::testing::blob_data(rng, 200, 2, 3, 1.0);
  std::shuffle(d.y.begin(), d.y.end(), rng);
  const double acc = tune::objective(d.x, d.y, quick_params(), 3, 0);
  EXPECT_NEAR(acc, 0.5, 0.1);
}

TEST(Objective, DeterministicForSeed) {
  std::mt19937_64 rng(3);
  auto d = bfd::testing::blob_data(rng, 30, 3, 3, 2.0);
  const double a = tune::objective(d.x, d.y, quick_params(), 3, 5);
  EXPECT_EQ(a, tune::objective(d.x, d.y, quick_params(), 3, 5));
  EXPECT_GE(a, 0.0);
  EXPECT_LE(a, 1.0);
}

TEST(Objective, ClassSmallerThanFoldCountRejected) {
  Matrix x(7, 1, std::vector<double>{0, 1, 2, 3, 4, 5, 6});
  std::vector<int> y{0, 0, 0, 0, 0, 1, 1};
  try {
    tune::objective(x, y, quick_params(), 3, 0);
    FAIL() << "expected ArgumentError";
  } catch (const ArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find("class 1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(tune::objective(x, y, quick_params(), 1, 0), ArgumentError);
}

TEST(TuneSpace, DecodeRoundsAndClamps) {
  const auto s = TuneSpace::estimators_and_rate();
  const auto p = s.decode(std::vector<double>{875.6, 0.26});
  EXPECT_EQ(p.n_estimators, 876);
  EXPECT_EQ(p.learning_rate, 0.26);
  EXPECT_EQ(s.decode(std::vector<double>{1000.4, 1.0}).n_estimators, 1000);
  EXPECT_EQ(s.decode(std::vector<double>{0.6, 0.5}).n_estimators, 1);
  EXPECT_THROW(s.decode(std::vector<double>{1.0}), ArgumentError);
}

TEST(TuneSpace, ValidationRejectsBadDescriptors) {
  TuneSpace s = TuneSpace::estimators_and_rate();
  s.params.push_back({"reg_lambda", tune::ParamKind::kReal, 0.0, 1.0});
  EXPECT_THROW(s.validate(), ArgumentError);
  s = TuneSpace::estimators_and_rate();
  s.params.push_back(s.params[0]);
  EXPECT_THROW(s.validate(), ArgumentError);
  s = TuneSpace::estimators_and_rate();
  s.params[0].lower = 2.2;
  s.params[0].upper = 2.8;
  EXPECT_THROW(s.validate(), ArgumentError);
  EXPECT_THROW(TuneSpace{}.validate(), ArgumentError);
  EXPECT_NO_THROW(TuneSpace::all_parameters().validate());
}

TEST(Tune, CollapsedBoxReturnsThatPoint) {
  std::mt19937_64 rng(4);
  auto d = bfd::testing::blob_data(rng, 20, 3, 3, 1.5);
  auto s = TuneSpace::estimators_and_rate();
  s.params[0].lower = s.params[0].upper = 7;
  s.params[1].lower = s.params[1].upper = 0.4;
  s.base.max_depth = 3;
  const auto r = tune::tune(d.x, d.y, s, small_run(1), tune::Algorithm::kIabc);
  EXPECT_EQ(r.best_params.n_estimators, 7);
  EXPECT_EQ(r.best_params.learning_rate, 0.4);
  EXPECT_EQ(r.distinct_evaluations, 1u);
  EXPECT_EQ(r.best_accuracy, tune::objective(d.x, d.y, r.best_params, 3, 0));
}

TEST(Tune, BestAccuracyReproducesWhenReevaluated) {
  std::mt19937_64 rng(5);
  auto d = bfd::testing::blob_data(rng, 20, 3, 3, 1.5);
  for (auto algo : {tune::Algorithm::kAbc, tune::Algorithm::kIabc}) {
    const tune::Validation v{3, 11, std::nullopt};
    const auto r = tune::tune(d.x, d.y, narrow_space(), small_run(2), algo, v);
    EXPECT_EQ(r.best_accuracy, tune::evaluate(d.x, d.y, r.best_params, v));
    EXPECT_GE(r.best_params.n_estimators, 1);
    EXPECT_LE(r.best_params.n_estimators, 20);
    EXPECT_GE(r.best_params.learning_rate, 0.01);
    EXPECT_LE(r.best_params.learning_rate, 1.0);
    EXPECT_EQ(r.best_params.max_depth, 3);
    EXPECT_LE(r.distinct_evaluations, r.trace.evaluations);
  }
}

TEST(Tune, HoldoutModeUsesGivenRows) {
  std::mt19937_64 rng(6);
  auto d = bfd::testing::separable_data(rng, 20, 2, 1);
  tune::Holdout h;
  for (std::size_t i = 0; i < d.x.rows(); ++i) (i % 4 == 0 ? h.test : h.train).push_back(i);
  const tune::Validation v{3, 0, h};
  const auto r = tune::tune(d.x, d.y, narrow_space(), small_run(3), tune::Algorithm::kAbc, v);
  EXPECT_EQ(r.best_accuracy, 1.0);
  EXPECT_EQ(r.best_accuracy, tune::holdout_accuracy(d.x, d.y, r.best_params, h));
  EXPECT_THROW(tune::holdout_accuracy(d.x, d.y, quick_params(), {h.train, {}}), ArgumentError);
}

TEST(Tune, SameSeedSameResult) {
  std::mt19937_64 rng(7);
  auto d = bfd::testing::blob_data(rng, 15, 3, 3, 1.5);
  const auto a = tune::tune(d.x, d.y, narrow_space(), small_run(4), tune::Algorithm::kIabc);
  const auto b = tune::tune(d.x, d.y, narrow_space(), small_run(4), tune::Algorithm::kIabc);
  EXPECT_EQ(a.best_params, b.best_params);
  EXPECT_EQ(a.trace.best_values, b.trace.best_values);
}
