// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "anchorsec/detect.hpp"
#include "anchorsec/harness.hpp"

namespace {

using namespace anchorsec;

void BM_Trilaterate(benchmark::State& state) {
  const std::array<geometry::Point, 3> anchors{geometry::Point{10, 20}, geometry::Point{480, 35},
                                               geometry::Point{200, 510}};
  const geometry::Point target{250, 260};
  const geometry::RangeTriple r{geometry::distance(target, anchors[0]),
                                geometry::distance(target, anchors[1]),
                                geometry::distance(target, anchors[2])};
  for (auto _ : state) benchmark::DoNotOptimize(geometry::trilaterate(anchors, r));
}
BENCHMARK(BM_Trilaterate);

void BM_Deploy(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(++seed);
    benchmark::DoNotOptimize(network::deploy({}, std::size_t(state.range(0)), rng));
  }
}
BENCHMARK(BM_Deploy)->Arg(117)->Arg(1000);

void BM_BuildReferences(benchmark::State& state) {
  Rng rng(1);
  const auto dep = network::deploy({}, 117, rng);
  for (auto _ : state) benchmark::DoNotOptimize(registry::build_references(dep));
}
BENCHMARK(BM_BuildReferences);

void BM_Mahalanobis(benchmark::State& state) {
  const geometry::Matrix2 c{4, 1, 1, 2};
  geometry::Point x{1, 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(detect::mahalanobis_distance(x, {0, 0}, c));
    x.x += 1e-9;
  }
}
BENCHMARK(BM_Mahalanobis);

void BM_RunTrial(benchmark::State& state) {
  harness::SimulationConfig cfg;
  cfg.detector = static_cast<harness::DetectorChoice>(state.range(0));
  cfg.attack.count = 20;
  std::size_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(harness::run_trial(cfg, trial++));
  state.SetLabel(std::string(harness::to_string(cfg.detector)));
}
BENCHMARK(BM_RunTrial)
    ->Arg(int(harness::DetectorChoice::none))
    ->Arg(int(harness::DetectorChoice::consistency))
    ->Arg(int(harness::DetectorChoice::mle))
    ->Arg(int(harness::DetectorChoice::mahalanobis))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
