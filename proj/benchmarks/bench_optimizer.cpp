#include <benchmark/benchmark.h>

#include "bfd/benchmark_functions.hpp"
#include "bfd/optimizer.hpp"

namespace {

template <bool Improved>
void BM_Run(benchmark::State& state) {
  const auto space = bfd::opt::find_benchmark("f5")->space();
  bfd::opt::RunConfig c;
  c.colony_size = static_cast<std::size_t>(state.range(0));
  c.max_iterations = 200;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Improved ? bfd::opt::run_iabc(space, c) : bfd::opt::run_abc(space, c));
    ++c.seed;
  }
}
BENCHMARK(BM_Run<false>)->Name("BM_RunAbc")->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Run<true>)->Name("BM_RunIabc")->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
