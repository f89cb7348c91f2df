#include <benchmark/benchmark.h>

#include "mzsim/diffraction.hpp"
#include "mzsim/engine.hpp"
#include "mzsim/network.hpp"

namespace {

void BM_EnumeratePaths(benchmark::State& state) {
  const auto net = mzsim::build_mzi({});
  for (auto _ : state) {
    benchmark::DoNotOptimize(mzsim::enumerate_paths(net, mzsim::mzi_ids::det1));
  }
}
BENCHMARK(BM_EnumeratePaths);

void BM_SimulateContinuous(benchmark::State& state) {
  const auto net = mzsim::build_mzi({});
  const mzsim::SwitchingSchedule sched{10e-9, {{"aom2", false, 0.0}}, {}};
  const mzsim::SimParams params{-20e-9, -20e-9 + state.range(0) * 0.5e-9, 0.5e-9, {}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mzsim::simulate(net, sched, mzsim::PropagationModel::local, params));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateContinuous)->Arg(240)->Arg(24000);

void BM_SimulatePulsedTwoPackets(benchmark::State& state) {
  const auto net = mzsim::build_mzi({});
  const mzsim::SwitchingSchedule sched{10e-9, {{"aom2", false, 0.0}}, {}};
  const mzsim::WavePacket p1{-100e-9, 633e-9, 50.0, 1.0};
  mzsim::WavePacket p2 = p1;
  p2.emit_time += 50.0 / mzsim::kSpeedOfLight;
  const mzsim::SimParams params{-600e-9, 700e-9, 0.5e-9, {p1, p2}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mzsim::simulate(net, sched, mzsim::PropagationModel::local, params));
  }
}
BENCHMARK(BM_SimulatePulsedTwoPackets);

void BM_SlitPattern(benchmark::State& state) {
  const mzsim::SlitGeometry geom;
  const double z = 3.0;
  const auto grid = mzsim::default_grid(geom, z, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mzsim::slit_pattern(geom, z, grid));
}
BENCHMARK(BM_SlitPattern)->Arg(401)->Arg(2001)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
