#include <benchmark/benchmark.h>

#include "minkdim/flow.hpp"

using namespace minkdim;

static void BM_SaddleBundleClosedForm(benchmark::State& state) {
  const auto entry = power_sequence(1.0, static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(build_bundle(SaddleSpec{0.5, {}}, entry, 1e-3 / 32));
}
BENCHMARK(BM_SaddleBundleClosedForm)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_SaddleBundleIntegrated(benchmark::State& state) {
  const auto entry = power_sequence(1.0, static_cast<std::size_t>(state.range(0)), 2);
  const SaddleSpec spec{0.5, {{0.1, 1, 2}}};
  for (auto _ : state) benchmark::DoNotOptimize(build_bundle(spec, entry, 1e-3 / 32));
}
BENCHMARK(BM_SaddleBundleIntegrated)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_IntegrateTrajectory(benchmark::State& state) {
  const SemiHypSpec spec{1.0, 2, {}};
  for (auto _ : state) benchmark::DoNotOptimize(integrate_trajectory(spec, {1.0, 0.05}));
}
BENCHMARK(BM_IntegrateTrajectory)->Unit(benchmark::kMicrosecond);
