#include <benchmark/benchmark.h>

#include <random>

#include "bfd/ternary.hpp"

namespace {

std::vector<double> noise(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

void BM_Encode(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  const bfd::ternary::TernaryConfig cfg{static_cast<std::size_t>(state.range(1)), 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(bfd::ternary::encode(x, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Encode)->Args({1024, 2})->Args({1024, 4})->Args({16384, 4});

void BM_Featurize(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  const bfd::ternary::TernaryConfig cfg{4, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(bfd::ternary::featurize(x, cfg).normalized());
}
BENCHMARK(BM_Featurize)->Arg(512)->Arg(4096);

}  // namespace
