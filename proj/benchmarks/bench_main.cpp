// Copyright 2026 The evstereo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "evstereo/edges.hpp"
#include "evstereo/hpf.hpp"
#include "evstereo/matcher.hpp"
#include "evstereo/synth.hpp"

using namespace evstereo;

namespace {

struct EdgePair {
  BinaryEdgeMap left;
  BinaryEdgeMap right;
};

EdgePair vga_edges(int d) {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution on(0.1);
  EdgePair p{BinaryEdgeMap(640, 480, Modality::frame), BinaryEdgeMap(640, 480, Modality::event)};
  for (auto& v : p.right.mask.pixels()) v = on(rng);
  for (int y = 0; y < 480; ++y) {
    for (int x = 0; x + d < 640; ++x) p.left(x, y) = p.right(x + d, y);
  }
  return p;
}

const SyntheticFixture& vga_fixture() {
  static const SyntheticFixture fx = make_fixture(random_two_region_scene(1));
  return fx;
}

void BM_SparseDisparity(benchmark::State& state) {
  const auto p = vga_edges(20);
  MatcherConfig cfg;
  cfg.window_radius = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sparse_disparity(p.left, p.right, cfg));
}
BENCHMARK(BM_SparseDisparity)->Arg(3)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_PyramidDisparity(benchmark::State& state) {
  const auto p = vga_edges(20);
  MatcherConfig cfg;
  cfg.levels = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(prune_outliers(pyramid_disparity(p.left, p.right, cfg), cfg));
}
BENCHMARK(BM_PyramidDisparity)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_HighPassReconstruct(benchmark::State& state) {
  const auto& fx = vga_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct(fx.events, {640, 480}, fx.timestamps.back()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(fx.events.size()));
}
BENCHMARK(BM_HighPassReconstruct)->Unit(benchmark::kMillisecond);

void BM_SobelNms(benchmark::State& state) {
  const auto& fx = vga_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(edge_from_frame(fx.left));
}
BENCHMARK(BM_SobelNms)->Unit(benchmark::kMillisecond);

void BM_EventsFromFrames(benchmark::State& state) {
  const auto& fx = vga_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(events_from_frames(fx.right_frames, fx.timestamps, 0.1));
}
BENCHMARK(BM_EventsFromFrames)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
