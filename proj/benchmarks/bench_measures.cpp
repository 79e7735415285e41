#include <benchmark/benchmark.h>

#include "minkdim/dimension.hpp"
#include "minkdim/flow.hpp"

using namespace minkdim;

static void BM_Measure1dExact(benchmark::State& state) {
  const auto seq = power_sequence(1.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(measure_1d_exact(seq, 1e-6));
}
BENCHMARK(BM_Measure1dExact)->Arg(1'000'000);

static void BM_Measure1dBruteforce(benchmark::State& state) {
  const auto seq = power_sequence(1.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(measure_1d_bruteforce(seq, 1e-6));
}
BENCHMARK(BM_Measure1dBruteforce)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

static void BM_SequenceDimension(benchmark::State& state) {
  const auto seq = power_sequence(1.0, 1'000'000);
  const auto ladder = default_ladder_1d();
  for (auto _ : state) benchmark::DoNotOptimize(sequence_dimension(seq, ladder));
}
BENCHMARK(BM_SequenceDimension);

static void BM_Grid2dStadium(benchmark::State& state) {
  TrajectorySegment seg;
  seg.points = {{0.0, 0.0}, {1.0, 0.0}};
  const double delta = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(measure_2d_grid(std::span(&seg, 1), delta));
}
BENCHMARK(BM_Grid2dStadium)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

static void BM_Grid2dBundle(benchmark::State& state) {
  const auto entry = power_sequence(1.0, 500, 2);
  const double delta = 1.0 / static_cast<double>(state.range(0));
  const auto bundle = build_bundle(SaddleSpec{0.5, {}}, entry, delta / 32.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(measure_2d_grid(bundle.segments(), delta));
  }
}
BENCHMARK(BM_Grid2dBundle)->Arg(32)->Arg(100)->Arg(316)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
