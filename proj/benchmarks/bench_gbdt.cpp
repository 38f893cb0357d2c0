#include <benchmark/benchmark.h>

#include <random>

#include "bfd/gbdt.hpp"

namespace {

struct Data {
  bfd::Matrix x;
  std::vector<int> y;
};

Data blobs(std::size_t rows, std::size_t cols, int classes) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Data d{bfd::Matrix(rows, cols), std::vector<int>(rows)};
  for (std::size_t r = 0; r < rows; ++r) {
    d.y[r] = static_cast<int>(r % static_cast<std::size_t>(classes));
    for (std::size_t c = 0; c < cols; ++c) d.x(r, c) = g(rng) + (c % 4 == 0 ? d.y[r] : 0);
  }
  return d;
}

void BM_Train(benchmark::State& state) {
  const auto d = blobs(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), 4);
  bfd::gbdt::BoosterParams p;
  p.n_estimators = 20;
  for (auto _ : state) benchmark::DoNotOptimize(bfd::gbdt::train(d.x, d.y, p));
}
BENCHMARK(BM_Train)->Args({400, 32})->Args({2000, 32})->Args({400, 512})->Unit(benchmark::kMillisecond);

void BM_PredictProba(benchmark::State& state) {
  const auto d = blobs(2000, 32, 4);
  const auto model = bfd::gbdt::train(d.x, d.y, {});
  for (auto _ : state) benchmark::DoNotOptimize(bfd::gbdt::predict_proba(model, d.x));
}
BENCHMARK(BM_PredictProba)->Unit(benchmark::kMillisecond);

}  // namespace
