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

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "strataflow/error.hpp"
#include "strataflow/simnet.hpp"

namespace strataflow::sim {

namespace {

std::uint64_t emitted_before(double rate, std::uint64_t interval) noexcept {
  return static_cast<std::uint64_t>(std::floor(static_cast<long double>(rate) * interval));
}

}  // namespace

std::uint64_t items_in_interval(double rate, std::uint64_t interval) noexcept {
  if (!(rate > 0.0)) return 0;
  return emitted_before(rate, interval + 1) - emitted_before(rate, interval);
}

std::vector<Item> generate(const GeneratorSpec& spec, std::uint64_t interval, std::uint64_t data_seed) {
  if (!(spec.rate >= 0.0) || !std::isfinite(spec.rate)) {
    raise(ErrorCode::InvalidConfig, "generator rate must be >= 0");
  }
  const std::uint64_t n = items_in_interval(spec.rate, interval);
  const std::uint64_t first_seq = emitted_before(spec.rate, interval);

  std::vector<Item> items(n);
  for (std::uint64_t m = 0; m < n; ++m) {
    items[m].substream = spec.substream;
    items[m].source_seq = first_seq + m;
    items[m].source_interval = interval;
  }
  if (n == 0) return items;

  Rng rng(derive_seed(data_seed, {spec.seed_component, spec.substream.value, interval}));
  if (const auto* g = std::get_if<Gaussian>(&spec.distribution)) {
    if (!(g->stddev >= 0.0)) raise(ErrorCode::InvalidConfig, "gaussian stddev must be >= 0");
    if (g->stddev == 0.0) {
      for (auto& item : items) item.value = g->mean;
    } else {
      std::normal_distribution<double> dist(g->mean, g->stddev);
      for (auto& item : items) item.value = dist(rng);
    }
  } else {
    const auto& p = std::get<Poisson>(spec.distribution);
    if (!(p.lambda > 0.0)) raise(ErrorCode::InvalidConfig, "poisson lambda must be > 0");
    std::poisson_distribution<long long> dist(p.lambda);
    for (auto& item : items) item.value = static_cast<double>(dist(rng));
  }
  return items;
}

ExactResult exact_oracle(std::span<const Item> items) {
  ExactResult out;
  for (const Item& item : items) {
    ++out.count;
    out.sum += item.value;
  }
  if (out.count > 0) out.mean = out.sum / static_cast<double>(out.count);
  return out;
}

double accuracy_loss(double approx, double exact) noexcept {
  if (exact == 0.0) return approx == 0.0 ? 0.0 : std::abs(approx);
  return std::abs(approx - exact) / std::abs(exact);
}

SourceFeed::SourceFeed(const SourceSpec& spec, const StratumMap& strata, SimTime interval_length,
                       std::uint64_t data_seed)
    : interval_length_(interval_length), data_seed_(data_seed) {
  if (const auto* gen = std::get_if<GeneratorSpec>(&spec.input)) {
    if (!(gen->rate >= 0.0) || !std::isfinite(gen->rate)) raise(ErrorCode::InvalidConfig, "generator rate must be >= 0");
    stratum_ = strata.resolve(gen->substream.value);
    input_ = *gen;
  } else {
    auto result = ingest::replay(std::get<ingest::ReplaySpec>(spec.input), interval_length);
    for (auto& t : result.items) t.item.substream = strata.resolve(t.item.substream.value);
    input_ = std::move(result.items);
  }
}

SourceFeed::Emission SourceFeed::emit(std::uint64_t k) const {
  Emission out;
  const SimTime L = interval_length_;
  if (const auto* gen = std::get_if<GeneratorSpec>(&input_)) {
    out.items = generate(*gen, k, data_seed_);
    const double step = static_cast<double>(L) / static_cast<double>(std::max<std::size_t>(1, out.items.size()));
    out.times.reserve(out.items.size());
    for (std::size_t m = 0; m < out.items.size(); ++m) {
      out.items[m].substream = stratum_;
      out.times.push_back(static_cast<SimTime>(k) * L + static_cast<SimTime>((static_cast<double>(m) + 0.5) * step));
    }
    return out;
  }
  const auto& all = std::get<std::vector<ingest::TimedItem>>(input_);
  const auto before = [](const ingest::TimedItem& t, SimTime v) { return t.time < v; };
  auto lo = std::lower_bound(all.begin(), all.end(), static_cast<SimTime>(k) * L, before);
  auto hi = std::lower_bound(lo, all.end(), static_cast<SimTime>(k + 1) * L, before);
  for (auto it = lo; it != hi; ++it) {
    out.items.push_back(it->item);
    out.times.push_back(it->time);
  }
  out.more = hi != all.end();
  return out;
}

std::vector<SubStreamId> SourceFeed::strata() const {
  if (std::holds_alternative<GeneratorSpec>(input_)) return {stratum_};
  std::vector<SubStreamId> out;
  for (const auto& t : std::get<std::vector<ingest::TimedItem>>(input_)) out.push_back(t.item.substream);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double SourceFeed::expected_rate() const {
  if (const auto* gen = std::get_if<GeneratorSpec>(&input_)) return gen->rate;
  const auto& items = std::get<std::vector<ingest::TimedItem>>(input_);
  if (items.empty()) return 0.0;
  const double intervals = static_cast<double>(items.back().time / interval_length_ + 1);
  return static_cast<double>(items.size()) / intervals;
}

}  // namespace strataflow::sim
