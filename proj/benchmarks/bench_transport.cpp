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

#include "strataflow/transport.hpp"

namespace {

using namespace strataflow;

IntervalBatch make_batch(std::uint64_t per_entry) {
  IntervalBatch b(1, NodeId{2});
  for (std::uint64_t s = 1; s <= 8; ++s) {
    std::vector<Item> xs;
    for (std::uint64_t i = 0; i < per_entry; ++i) xs.push_back(Item{SubStreamId{s}, static_cast<double>(i), i, 1});
    b.add_entry(SubStreamId{s}, {3.0, per_entry}, std::move(xs));
  }
  return b;
}

void BM_EncodeBatch(benchmark::State& state) {
  const auto b = make_batch(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(transport::encode_batch(b));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(transport::encode_batch(b).size()));
}
BENCHMARK(BM_EncodeBatch)->Arg(100)->Arg(10'000);

void BM_DecodeBatch(benchmark::State& state) {
  const auto bytes = transport::encode_batch(make_batch(static_cast<std::uint64_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(transport::decode_batch(bytes));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_DecodeBatch)->Arg(100)->Arg(10'000);

}  // namespace
