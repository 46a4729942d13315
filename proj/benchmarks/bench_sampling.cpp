// Copyright 2026 The StrataFlow Authors
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

#include <vector>

#include "strataflow/reservoir.hpp"
#include "strataflow/simnet.hpp"
#include "strataflow/whs.hpp"

namespace {

using namespace strataflow;

std::vector<Item> make_items(std::uint64_t n, std::uint64_t strata) {
  Rng rng(7);
  std::vector<Item> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(Item{SubStreamId{1 + i % strata}, rng.uniform01(), i, 0});
  return out;
}

void BM_ReservoirOffer(benchmark::State& state) {
  const auto items = make_items(static_cast<std::uint64_t>(state.range(0)), 1);
  Rng rng(1);
  for (auto _ : state) {
    Reservoir r(1000);
    for (const auto& it : items) r.offer(it, rng);
    benchmark::DoNotOptimize(r.drain());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReservoirOffer)->Arg(10'000)->Arg(100'000);

void BM_Whsamp(benchmark::State& state) {
  const auto items = make_items(100'000, 8);
  WhsOptions opt;
  opt.workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    opt.seed++;
    benchmark::DoNotOptimize(whsamp(items, 8000, {}, {}, opt));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(items.size()));
}
BENCHMARK(BM_Whsamp)->Arg(1)->Arg(4);

void BM_SimulateGaussian(benchmark::State& state) {
  for (auto _ : state) {
    sim::SimOptions opt;
    opt.fraction = 0.1;
    benchmark::DoNotOptimize(sim::Simulation(sim::scenario_preset("gaussian"), opt).run(2));
  }
}
BENCHMARK(BM_SimulateGaussian)->Unit(benchmark::kMillisecond);

}  // namespace
