#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "bfd/error.hpp"
#include "bfd/shapelet.hpp"
#include "bfd/signal.hpp"
#include "oracles.hpp"

using namespace bfd;
using shapelet::ProfileEntry;

namespace {

std::vector<ProfileEntry> sorted_profile(std::vector<ProfileEntry> p) {
  std::stable_sort(p.begin(), p.end(),
                   [](const ProfileEntry& a, const ProfileEntry& b) { return a.distance < b.distance; });
  return p;
}

shapelet::ShapeletSet set_of(std::vector<std::vector<double>> values) {
  shapelet::ShapeletSet set;
  for (auto& v : values) set.shapelets.push_back({std::move(v), 0, 0, 0.0});
  set.beta = shapelet::compute_beta(set);
  return set;
}

struct MotifData {
  Dataset dataset;
  std::vector<std::size_t> motif_start;  // per record, only meaningful for class 1
};

constexpr std::size_t kMotifLength = 8;

MotifData motif_dataset(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<double> motif{0, 2.5, 3.5, 1, -2.5, -3.5, -1, 0};
  std::uniform_int_distribution<std::size_t> where(0, 64 - kMotifLength);
  MotifData out;
  std::vector<VibrationRecord> recs;
  for (int label = 0; label < 2; ++label) {
    for (int i = 0; i < 15; ++i) {
      VibrationRecord r{bfd::testing::random_sequence(rng, 64, 0.3), label};
      std::size_t at = 0;
      if (label == 1) {
        at = where(rng);
        for (std::size_t k = 0; k < kMotifLength; ++k) r.samples[at + k] += motif[k];
      }
      out.motif_start.push_back(at);
      recs.push_back(std::move(r));
    }
  }
  out.dataset = Dataset(std::move(recs), 2);
  return out;
}

}  // namespace

TEST(SubsequenceDistance, ExactWindowIsZero) {
  const std::vector<double> t{4, 1, 5, 9, 2, 6};
  EXPECT_EQ(shapelet::subsequence_distance(std::vector<double>{5, 9, 2}, t), 0.0);
}

TEST(SubsequenceDistance, SingleWindowNoSquareRoot) {
  EXPECT_EQ(shapelet::subsequence_distance(std::vector<double>{1, 2}, std::vector<double>{3, 4}), 8.0);
}

TEST(SubsequenceDistance, MatchesExhaustiveWindowScan) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = bfd::testing::random_sequence(rng, 4);
    const auto t = bfd::testing::random_sequence(rng, 32);
    const auto oracle = bfd::testing::brute_best_window(w, t);
    const auto got = shapelet::best_match(w, t);
    EXPECT_EQ(bfd::testing::window_distances(w, t).size(), 29u);
    EXPECT_NEAR(got.distance, oracle.distance, 1e-12 * (1 + oracle.distance));
    EXPECT_EQ(got.start, oracle.start);
  }
}

TEST(SubsequenceDistance, ZeroIffVerbatimWindow) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = bfd::testing::gridded_sequence(rng, 20, 3);
    const auto w = bfd::testing::gridded_sequence(rng, 3, 3);
    bool verbatim = false;
    for (std::size_t s = 0; s + 3 <= t.size(); ++s) {
      verbatim = verbatim || std::equal(w.begin(), w.end(), t.begin() + static_cast<std::ptrdiff_t>(s));
    }
    EXPECT_EQ(shapelet::subsequence_distance(w, t) == 0.0, verbatim);
  }
}

TEST(SubsequenceDistance, ShortRecordRejected) {
  EXPECT_THROW(shapelet::subsequence_distance(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}),
               ArgumentError);
}

TEST(Entropy, KnownValues) {
  EXPECT_DOUBLE_EQ(shapelet::entropy(5, 5), 1.0);
  EXPECT_DOUBLE_EQ(shapelet::entropy(7, 0), 0.0);
  EXPECT_NEAR(shapelet::entropy(3, 1), -0.75 * std::log2(0.75) - 0.25 * std::log2(0.25), 1e-15);
  EXPECT_NEAR(shapelet::entropy(3, 1), 0.8113, 1e-4);
  EXPECT_THROW(shapelet::entropy(0, 0), ArgumentError);
}

TEST(InformationGain, PerfectBalancedSplitIsOneBit) {
  const std::vector<ProfileEntry> p{{0.1, 1}, {0.2, 1}, {0.3, 0}, {0.4, 0}};
  const auto s = shapelet::information_gain(p, 1);
  EXPECT_DOUBLE_EQ(s.gain, 1.0);
  EXPECT_DOUBLE_EQ(s.threshold, 0.25);
}

TEST(InformationGain, IndependentLabelsNearZero) {
  std::mt19937_64 rng(8);
  std::vector<ProfileEntry> p;
  for (int i = 0; i < 20; ++i) p.push_back({static_cast<double>(i), i % 2});
  const auto s = shapelet::information_gain(p, 1);
  EXPECT_NEAR(s.gain, bfd::testing::exhaustive_ig(p, 1), 1e-12);
  EXPECT_LT(s.gain, 0.2);
}

TEST(InformationGain, RejectsShortProfile) {
  const std::vector<ProfileEntry> one{{0.1, 1}};
  EXPECT_THROW(shapelet::information_gain(one, 1), ArgumentError);
}

TEST(InformationGain, AllEqualDistancesGiveZero) {
  const std::vector<ProfileEntry> p{{1.0, 1}, {1.0, 0}, {1.0, 1}};
  const auto s = shapelet::information_gain(p, 1);
  EXPECT_EQ(s.gain, 0.0);
  EXPECT_TRUE(std::isnan(s.threshold));
}

TEST(InformationGain, MatchesExhaustiveEnumerationOnRandomProfiles) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 19;
    std::vector<ProfileEntry> p;
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse grid so equal distances appear.
      p.push_back({static_cast<double>(rng() % 8) * 0.5, static_cast<int>(rng() % 3)});
    }
    p = sorted_profile(p);
    const int positive = static_cast<int>(rng() % 3);
    EXPECT_NEAR(shapelet::information_gain(p, positive).gain, bfd::testing::exhaustive_ig(p, positive), 1e-12);
  }
}

TEST(InformationGain, BoundedByParentEntropyAtEveryThreshold) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ProfileEntry> p;
    for (int i = 0; i < 12; ++i) p.push_back({std::abs(bfd::testing::random_sequence(rng, 1)[0]), static_cast<int>(rng() % 2)});
    p = sorted_profile(p);
    std::size_t in = 0;
    for (const auto& e : p) in += e.label == 1;
    const double parent = shapelet::entropy(in, p.size() - in);
    for (const auto& e : p) {
      const double ig = shapelet::information_gain_at(p, 1, e.distance);
      EXPECT_GE(ig, -1e-15);
      EXPECT_LE(ig, parent + 1e-12);
    }
  }
}

TEST(InformationGain, InvariantToMonotoneRescaling) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ProfileEntry> p;
    for (int i = 0; i < 15; ++i) p.push_back({std::abs(bfd::testing::random_sequence(rng, 1)[0]), static_cast<int>(rng() % 2)});
    p = sorted_profile(p);
    auto q = p;
    for (auto& e : q) e.distance = std::exp(3 * e.distance) + 10;
    EXPECT_NEAR(shapelet::information_gain(p, 1).gain, shapelet::information_gain(q, 1).gain, 1e-12);
  }
}

TEST(ComputeBeta, KnownValues) {
  EXPECT_DOUBLE_EQ(set_of({{1, 2, 3}}).beta, 1.0);
  EXPECT_DOUBLE_EQ(set_of({{4, 4}, {4, 4, 4}}).beta, 0.0);
  EXPECT_NEAR(set_of({{0, 0}, {1, 1}}).beta, std::sqrt(1.0 / 3.0), 1e-15);
  EXPECT_THROW(set_of({{5}}), ArgumentError);
}

TEST(ComputeBeta, PermutationInvariant) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> parts;
    for (int i = 0; i < 4; ++i) parts.push_back(bfd::testing::random_sequence(rng, 3 + rng() % 4));
    const double beta = set_of(parts).beta;
    std::shuffle(parts.begin(), parts.end(), rng);
    for (auto& p : parts) std::shuffle(p.begin(), p.end(), rng);
    EXPECT_NEAR(set_of(parts).beta, beta, 1e-12 * (1 + beta));
  }
}

TEST(Transform, ExactMatchReturnsWindow) {
  const auto set = set_of({{9, 2, 6}});
  const std::vector<double> rec{3, 1, 4, 1, 5, 9, 2, 6, 5};
  EXPECT_EQ(shapelet::transform(rec, set), (std::vector<double>{9, 2, 6}));
}

TEST(Transform, EmptyRecordRejected) {
  const auto set = set_of({{1, 2}});
  EXPECT_THROW(shapelet::transform(std::vector<double>{}, set), ArgumentError);
}

TEST(Transform, MatchesBruteForceAlignment) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto set = set_of({bfd::testing::random_sequence(rng, 3), bfd::testing::random_sequence(rng, 5),
                             bfd::testing::random_sequence(rng, 4)});
    const auto rec = bfd::testing::random_sequence(rng, 40);
    std::vector<double> expected;
    for (const auto& s : set.shapelets) {
      const auto best = bfd::testing::brute_best_window(s.values, rec);
      expected.insert(expected.end(), rec.begin() + static_cast<std::ptrdiff_t>(best.start),
                      rec.begin() + static_cast<std::ptrdiff_t>(best.start + s.values.size()));
    }
    const auto got = shapelet::transform(rec, set);
    EXPECT_EQ(got, expected);
    EXPECT_EQ(got.size(), set.total_length());
  }
}

TEST(Transform, TiesResolveToEarliestWindow) {
  const auto set = set_of({{1, 1}});
  const std::vector<double> rec{0, 1, 1, 0, 1, 1};
  // Windows at 1 and 4 both match exactly; the first is used.
  EXPECT_EQ(shapelet::best_match(set.shapelets[0].values, rec).start, 1u);
}

TEST(Discover, MotifLocatedInMostSeeds) {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto data = motif_dataset(seed);
    shapelet::DiscoveryOptions o;
    o.min_length = 4;
    o.max_length = 10;
    o.max_shapelets = 5;
    o.candidate_budget = 2000;
    o.seed = seed;
    const auto set = shapelet::discover(data.dataset, o);
    const auto& top = set.shapelets.front();
    const auto& rec = data.dataset[top.source_record];
    if (rec.label != 1) continue;
    const std::size_t m = data.motif_start[top.source_record];
    if (top.start < m + kMotifLength && m < top.start + top.length()) ++hits;
  }
  EXPECT_GE(hits, 18);
}

TEST(Discover, ExhaustiveEnumerationKeepsEveryCandidate) {
  std::vector<VibrationRecord> recs{{{0, 1, 2, 3, 4, 5}, 0},
                                    {{1, 1, 2, 3, 5, 8}, 0},
                                    {{5, 4, 3, 2, 1, 0}, 1},
                                    {{9, 7, 5, 3, 1, 0}, 1}};
  const Dataset ds(recs, 2);
  shapelet::DiscoveryOptions o;
  o.min_length = 2;
  o.max_length = 4;
  o.quality = 0.0;
  o.max_shapelets = shapelet::kUnlimited;
  const auto expected = shapelet::count_candidates(ds, 2, 4);
  // Lengths 2, 3, 4 over four length-6 records: (5 + 4 + 3) * 4.
  EXPECT_EQ(expected, 48u);
  EXPECT_EQ(shapelet::discover(ds, o).shapelets.size(), expected);
}

TEST(Discover, IdenticalClassesFindNothing) {
  std::vector<VibrationRecord> recs;
  for (int i = 0; i < 4; ++i) recs.push_back({{1, 3, 2, 5, 4, 6, 1}, i % 2});
  try {
    shapelet::discover(Dataset(recs, 2), {});
    FAIL() << "expected NoShapeletsFound";
  } catch (const NoShapeletsFound& e) {
    EXPECT_NE(std::string(e.what()).find("no shapelets found"), std::string::npos);
  }
}

TEST(Discover, OutputOrderedAndBounded) {
  const auto ds = split(synthesize_dataset(3, 10, 200, 2), 6, 4, 2);
  shapelet::DiscoveryOptions o;
  o.min_length = 3;
  o.max_length = 12;
  o.max_shapelets = 25;
  o.candidate_budget = 400;
  o.seed = 4;
  const auto set = shapelet::discover(ds, o);
  ASSERT_FALSE(set.shapelets.empty());
  EXPECT_LE(set.shapelets.size(), 25u);
  for (std::size_t i = 1; i < set.shapelets.size(); ++i) {
    EXPECT_GE(set.shapelets[i - 1].ig, set.shapelets[i].ig);
  }
  for (const auto& s : set.shapelets) {
    EXPECT_GE(s.length(), 3u);
    EXPECT_LE(s.length(), 12u);
    EXPECT_GE(s.ig, o.quality);
    // Candidates come only from the training split.
    EXPECT_TRUE(std::binary_search(ds.split().train.begin(), ds.split().train.end(), s.source_record));
  }
  EXPECT_DOUBLE_EQ(set.beta, shapelet::compute_beta(set));
}

TEST(Discover, DefaultKeepLimitIsTenPerTrainingRecord) {
  const auto ds = split(synthesize_dataset(2, 4, 120, 8), 2, 2, 1);
  shapelet::DiscoveryOptions o;
  o.quality = 0.0;
  o.max_length = 6;
  const auto set = shapelet::discover(ds, o);
  EXPECT_EQ(set.shapelets.size(), 40u);
}

TEST(Discover, PreconditionErrors) {
  const auto ds = synthesize_dataset(2, 3, 100, 1);
  shapelet::DiscoveryOptions o;
  o.min_length = 1;
  EXPECT_THROW(shapelet::discover(ds, o), ArgumentError);
  o.min_length = 200;
  o.max_length = 300;
  EXPECT_THROW(shapelet::discover(ds, o), ArgumentError);
  EXPECT_THROW(shapelet::discover(synthesize_dataset(1, 4, 100, 1), {}), ArgumentError);
}

TEST(ShapeletJson, RoundTrip) {
  const auto ds = synthesize_dataset(2, 4, 100, 3);
  shapelet::DiscoveryOptions o;
  o.max_length = 5;
  o.candidate_budget = 100;
  const auto set = shapelet::discover(ds, o);
  EXPECT_EQ(shapelet::shapelet_set_from_json(shapelet::to_json(set)), set);
}
