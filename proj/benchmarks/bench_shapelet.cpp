#include <benchmark/benchmark.h>

#include <random>

#include "bfd/shapelet.hpp"
#include "bfd/signal.hpp"

namespace {

void BM_SubsequenceDistance(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::vector<double> w(static_cast<std::size_t>(state.range(0))), t(1024);
  for (auto& v : w) v = g(rng);
  for (auto& v : t) v = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(bfd::shapelet::subsequence_distance(w, t));
}
BENCHMARK(BM_SubsequenceDistance)->Arg(4)->Arg(16)->Arg(64);

void BM_Discover(benchmark::State& state) {
  const auto ds = bfd::split(bfd::synthesize_dataset(4, 20, 512, 1), 15, 5, 1);
  bfd::shapelet::DiscoveryOptions o;
  o.max_length = 16;
  o.max_shapelets = 20;
  o.candidate_budget = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bfd::shapelet::discover(ds, o));
}
BENCHMARK(BM_Discover)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
