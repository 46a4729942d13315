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

#include <random>

#include "oracles.hpp"
#include "strataflow/reservoir.hpp"
#include "strataflow/rng.hpp"
#include "strataflow/whs.hpp"

using namespace strataflow;

namespace {

std::map<SubStreamId, std::uint64_t> arrivals(std::initializer_list<std::pair<std::uint64_t, std::uint64_t>> xs) {
  std::map<SubStreamId, std::uint64_t> out;
  for (auto [id, n] : xs) out[SubStreamId{id}] = n;
  return out;
}

std::vector<std::uint64_t> values(const std::map<SubStreamId, std::uint64_t>& m) {
  std::vector<std::uint64_t> out;
  for (const auto& [id, v] : m) out.push_back(v);
  return out;
}

}  // namespace

TEST_CASE("stratify partitions by substream and keeps order") {
  CHECK(stratify({}).empty());
  const std::vector<Item> xs = {item(1, 1.0, 0), item(2, 2.0, 0), item(1, 3.0, 1)};
  const auto s = stratify(xs);
  REQUIRE(s.size() == 2);
  CHECK(s.at(SubStreamId{1}) == std::vector<Item>{xs[0], xs[2]});
  CHECK(s.at(SubStreamId{2}) == std::vector<Item>{xs[1]});
}

TEST_CASE("stratify counts match a direct tally of interleaved generators") {
  Rng rng(3);
  std::map<std::uint64_t, std::size_t> tally;
  std::vector<Item> xs;
  for (int i = 0; i < 5000; ++i) {
    const auto id = 1 + rng.below(4);
    ++tally[id];
    xs.push_back(item(id, i));
  }
  const auto s = stratify(xs);
  CHECK(s.size() == 4);
  for (auto [id, n] : tally) CHECK(s.at(SubStreamId{id}).size() == n);
}

TEST_CASE("equal allocation") {
  CHECK(values(allocate_sample_sizes(30, arrivals({{1, 5}, {2, 5}, {3, 5}}), AllocationPolicy::Equal)) ==
        std::vector<std::uint64_t>{10, 10, 10});
  CHECK(values(allocate_sample_sizes(10, arrivals({{1, 5}, {2, 5}, {3, 5}}), AllocationPolicy::Equal)) ==
        std::vector<std::uint64_t>{4, 3, 3});
  CHECK_RAISES(ErrorCode::BudgetTooSmall, allocate_sample_sizes(2, arrivals({{1, 5}, {2, 5}, {3, 5}}), AllocationPolicy::Equal));
}

TEST_CASE("proportional allocation") {
  CHECK(values(allocate_sample_sizes(10, arrivals({{1, 80}, {2, 15}, {3, 5}}), AllocationPolicy::ProportionalToArrivals)) ==
        std::vector<std::uint64_t>{8, 1, 1});

  SUBCASE("every stratum gets at least one slot") {
    const auto a = allocate_sample_sizes(10, arrivals({{1, 10'000}, {2, 1}, {3, 1}}), AllocationPolicy::ProportionalToArrivals);
    CHECK(values(a) == std::vector<std::uint64_t>{8, 1, 1});
  }
  SUBCASE("matches Hamilton's method when no floor binds") {
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
      std::map<std::uint64_t, std::uint64_t> raw;
      const auto k = 1 + rng.below(6);
      for (std::uint64_t i = 1; i <= k; ++i) raw[i] = 50 + rng.below(1000);
      const std::uint64_t total = k * 20 + rng.below(500);
      std::map<SubStreamId, std::uint64_t> in;
      for (auto [id, n] : raw) in[SubStreamId{id}] = n;
      const auto got = allocate_sample_sizes(total, in, AllocationPolicy::ProportionalToArrivals);
      const auto want = oracle::largest_remainder(total, raw);
      std::uint64_t sum = 0;
      for (auto [id, n] : want) {
        CHECK(got.at(SubStreamId{id}) == n);
        sum += got.at(SubStreamId{id});
      }
      CHECK(sum == total);
    }
  }
}

TEST_CASE("local weight") {
  CHECK(compute_local_weight(6, 3) == 2.0);
  CHECK(compute_local_weight(2, 3) == 1.0);
  CHECK(compute_local_weight(100, 10) == 10.0);
  CHECK(compute_local_weight(0, 3) == 1.0);
}

TEST_CASE("calibrated weight") {
  const double c_src = 1000, n1 = 100, n2 = 10;
  SUBCASE("full batch arrives") {
    const double w = calibrate_weight(c_src / n1, n1 / n2, 100, 100);
    CHECK(w == doctest::Approx(c_src / n2).epsilon(1e-12));
  }
  SUBCASE("only a share alpha arrives") {
    const double alpha = 0.3;
    const auto arrived = static_cast<std::uint64_t>(alpha * n1);
    const double w = calibrate_weight(c_src / n1, arrived / n2, 100, arrived);
    CHECK(w == doctest::Approx(c_src / n2).epsilon(1e-12));
  }
  SUBCASE("synchronized arrival reduces to the product") {
    CHECK(calibrate_weight(3.0, 4.0, 50, 50) == doctest::Approx(12.0));
  }
  CHECK_RAISES(ErrorCode::DegenerateArrival, calibrate_weight(1.0, 1.0, 5, 0));
}

TEST_CASE("sampling 3 of 6 gives weight 2, count 3") {
  const auto xs = items_of(1, {1, 2, 3, 4, 5, 6});
  const auto r = whsamp(xs, 3, {}, {}, WhsOptions{});
  CHECK(r.sample.at(SubStreamId{1}).size() == 3);
  CHECK(r.w_out.at(SubStreamId{1}) == 2.0);
  CHECK(r.c_out.at(SubStreamId{1}) == 3);
  CHECK(r.sample_size() == 3);
}

TEST_CASE("undersubscribed input passes through with its weights") {
  std::vector<Item> xs = items_of(1, {1, 2});
  for (const auto& it : items_of(2, {5, 6, 7})) xs.push_back(it);
  const std::map<SubStreamId, double> w_in{{SubStreamId{1}, 4.0}, {SubStreamId{2}, 1.5}};
  const std::map<SubStreamId, std::uint64_t> c_in{{SubStreamId{1}, 2}, {SubStreamId{2}, 3}};
  const auto r = whsamp(xs, 100, w_in, c_in, WhsOptions{});
  CHECK(r.sample.at(SubStreamId{1}) == items_of(1, {1, 2}));
  CHECK(r.sample.at(SubStreamId{2}) == items_of(2, {5, 6, 7}));
  CHECK(r.w_out.at(SubStreamId{1}) == 4.0);
  CHECK(r.w_out.at(SubStreamId{2}) == 1.5);
  CHECK(r.c_out.at(SubStreamId{2}) == 3);
}

TEST_CASE("two-node chain keeps Y times W equal to the source count") {
  std::vector<double> vals(1000);
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = static_cast<double>(i);
  WhsOptions opts;
  opts.seed = 8;
  const auto first = whsamp(items_of(1, vals), 100, {}, {}, opts);
  const auto& s1 = first.sample.at(SubStreamId{1});
  const auto second = whsamp(s1, 10, first.w_out, first.c_out, opts);
  CHECK(second.sample.at(SubStreamId{1}).size() == 10);
  CHECK(second.w_out.at(SubStreamId{1}) == doctest::Approx(100.0).epsilon(1e-12));
  // Bookkeeping oracle: each stage multiplies by arrivals over kept.
  const double expected = (1000.0 / 100.0) * (100.0 / 10.0);
  CHECK(10 * second.w_out.at(SubStreamId{1}) == doctest::Approx(10 * expected));
}

TEST_CASE("epoch groups calibrate separately and combine") {
  std::map<SubStreamId, std::vector<EpochGroup>> in;
  std::vector<double> v(60);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EpochGroup tail{5.0, 80, items_of(1, std::vector<double>(v.begin(), v.begin() + 20))};
  EpochGroup head{4.0, 50, items_of(1, std::vector<double>(v.begin() + 20, v.end()))};
  in[SubStreamId{1}] = {tail, head};
  WhsOptions opts;
  opts.seed = 3;
  const auto r = whsamp_groups(in, 10, opts);
  const auto y = static_cast<double>(r.sample.at(SubStreamId{1}).size());
  CHECK(y == 10);
  // Each group stands for w_in * c_in source items.
  CHECK(y * r.w_out.at(SubStreamId{1}) == doctest::Approx(5.0 * 80 + 4.0 * 50).epsilon(1e-12));
}

TEST_CASE("shard_and_merge") {
  std::vector<double> vals(100, 1.0);
  const auto xs = items_of(1, vals);

  SUBCASE("capacity arithmetic") {
    const auto s = shard_and_merge(xs, 10, 2, 5);
    CHECK(s.sample.size() == 10);
    CHECK(s.seen_total == 100);
    CHECK(s.merged_capacity == 10);
  }
  SUBCASE("one worker reproduces the plain reservoir") {
    Rng rng(77);
    Reservoir r(10);
    for (const auto& it : xs) r.offer(it, rng);
    CHECK(shard_and_merge(xs, 10, 1, 77).sample == r.drain().items);
  }
  SUBCASE("invalid worker counts") {
    CHECK_RAISES(ErrorCode::InvalidWorkers, shard_and_merge(xs, 10, 0, 1));
    CHECK_RAISES(ErrorCode::InvalidWorkers, shard_and_merge(xs, 3, 4, 1));
  }
}

TEST_CASE("sharded and unsharded estimators agree in mean") {
  Rng data(1);
  std::normal_distribution<double> dist(50.0, 10.0);
  std::vector<Item> xs;
  for (std::uint64_t i = 0; i < 2000; ++i) xs.push_back(item(1, dist(data), i));
  std::vector<double> a, b;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    for (unsigned w : {1u, 4u}) {
      WhsOptions o;
      o.workers = w;
      o.seed = seed;
      const auto r = whsamp(xs, 200, {}, {}, o);
      double sum = 0;
      for (const auto& it : r.sample.at(SubStreamId{1})) sum += it.value;
      (w == 1 ? a : b).push_back(sum * r.w_out.at(SubStreamId{1}));
      CHECK(r.sample.at(SubStreamId{1}).size() <= 200);
    }
  }
  auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
  auto var = [&](const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
  };
  const double se = std::sqrt(var(a) / a.size() + var(b) / b.size());
  CHECK(std::abs(mean(a) - mean(b)) <= 4 * se);
}
