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

#include "strataflow/whs.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "strataflow/error.hpp"
#include "strataflow/reservoir.hpp"
#include "strataflow/rng.hpp"

namespace strataflow {

__extension__ typedef unsigned __int128 u128;

namespace {

std::map<SubStreamId, std::uint64_t> allocate_equal(std::uint64_t total,
                                                    const std::map<SubStreamId, std::uint64_t>& arrivals) {
  std::map<SubStreamId, std::uint64_t> out;
  const std::uint64_t n = arrivals.size();
  const std::uint64_t base = total / n;
  std::uint64_t extra = total % n;
  for (const auto& [id, count] : arrivals) {
    out[id] = base + (extra > 0 ? 1 : 0);
    if (extra > 0) --extra;
  }
  return out;
}

std::map<SubStreamId, std::uint64_t> allocate_proportional(std::uint64_t total,
                                                           const std::map<SubStreamId, std::uint64_t>& arrivals) {
  u128 sum_arrivals = 0;
  for (const auto& [id, count] : arrivals) sum_arrivals += count;
  if (sum_arrivals == 0) return allocate_equal(total, arrivals);

  struct Share {
    SubStreamId id;
    std::uint64_t size;
    u128 remainder;
    bool lifted;
  };
  std::vector<Share> shares;
  shares.reserve(arrivals.size());
  std::uint64_t assigned = 0;
  for (const auto& [id, count] : arrivals) {
    const u128 scaled = static_cast<u128>(total) * count;
    const auto floor = static_cast<std::uint64_t>(scaled / sum_arrivals);
    Share s{id, std::max<std::uint64_t>(floor, 1), scaled % sum_arrivals, floor == 0};
    assigned += s.size;
    shares.push_back(s);
  }

  // Largest remainder first, smaller id on ties; strata lifted to the floor
  // of 1 have already received more than their quota.
  if (assigned < total) {
    std::vector<Share*> order;
    for (auto& s : shares)
      if (!s.lifted) order.push_back(&s);
    std::stable_sort(order.begin(), order.end(),
                     [](const Share* a, const Share* b) { return a->remainder > b->remainder; });
    for (std::size_t k = 0; assigned < total && !order.empty(); k = (k + 1) % order.size()) {
      ++order[k]->size;
      ++assigned;
    }
  }
  // Flooring overshot the total: take back from the largest allocations.
  while (assigned > total) {
    Share* victim = nullptr;
    for (auto& s : shares) {
      if (s.size <= 1) continue;
      if (victim == nullptr || s.size > victim->size ||
          (s.size == victim->size && s.remainder <= victim->remainder)) {
        victim = &s;
      }
    }
    --victim->size;
    --assigned;
  }

  std::map<SubStreamId, std::uint64_t> out;
  for (const auto& s : shares) out[s.id] = s.size;
  return out;
}

struct GroupSample {
  std::vector<Item> items;
  double weight = 1.0;
};

GroupSample sample_group(const EpochGroup& group, std::uint64_t capacity, unsigned workers, std::uint64_t seed) {
  const std::uint64_t arrived = group.items.size();
  if (arrived <= capacity) return {group.items, group.w_in};

  GroupSample out;
  const unsigned effective_workers =
      static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, capacity));
  if (effective_workers > 1) {
    out.items = shard_and_merge(group.items, capacity, effective_workers, seed).sample;
  } else {
    Reservoir reservoir(capacity);
    Rng rng(seed);
    for (const Item& item : group.items) reservoir.offer(item, rng);
    out.items = reservoir.drain().items;
  }
  const double w_local = compute_local_weight(arrived, out.items.size());
  out.weight = w_local > 1.0 ? calibrate_weight(group.w_in, w_local, group.c_in.value_or(arrived), arrived)
                             : group.w_in;
  return out;
}

}  // namespace

std::map<SubStreamId, std::vector<Item>> stratify(std::span<const Item> items) {
  std::map<SubStreamId, std::vector<Item>> out;
  for (const Item& item : items) out[item.substream].push_back(item);
  return out;
}

std::map<SubStreamId, std::uint64_t> allocate_sample_sizes(std::uint64_t total,
                                                           const std::map<SubStreamId, std::uint64_t>& arrivals,
                                                           AllocationPolicy policy) {
  if (arrivals.empty()) return {};
  if (total < arrivals.size()) {
    raise(ErrorCode::BudgetTooSmall, "sample size " + std::to_string(total) + " for " +
                                         std::to_string(arrivals.size()) + " strata");
  }
  return policy == AllocationPolicy::Equal ? allocate_equal(total, arrivals) : allocate_proportional(total, arrivals);
}

double compute_local_weight(std::uint64_t arrived, std::uint64_t capacity) {
  if (capacity == 0) raise(ErrorCode::BudgetTooSmall, "capacity must be positive");
  return arrived > capacity ? static_cast<double>(arrived) / static_cast<double>(capacity) : 1.0;
}

double calibrate_weight(double w_in, double w_local, std::uint64_t c_in, std::uint64_t arrived) {
  if (arrived == 0) raise(ErrorCode::DegenerateArrival, "calibration with zero arrivals");
  return w_in * w_local * static_cast<double>(c_in) / static_cast<double>(arrived);
}

std::uint64_t WhsResult::sample_size() const noexcept {
  std::uint64_t n = 0;
  for (const auto& [id, count] : c_out) n += count;
  return n;
}

WhsResult whsamp(std::span<const Item> items, std::uint64_t sample_size, const std::map<SubStreamId, double>& w_in,
                 const std::map<SubStreamId, std::uint64_t>& c_in, const WhsOptions& options) {
  std::map<SubStreamId, std::vector<EpochGroup>> input;
  for (auto& [id, stratum] : stratify(items)) {
    EpochGroup group;
    if (auto it = w_in.find(id); it != w_in.end()) group.w_in = it->second;
    if (auto it = c_in.find(id); it != c_in.end()) group.c_in = it->second;
    group.items = std::move(stratum);
    input[id].push_back(std::move(group));
  }
  return whsamp_groups(input, sample_size, options);
}

WhsResult whsamp_groups(const std::map<SubStreamId, std::vector<EpochGroup>>& input, std::uint64_t sample_size,
                        const WhsOptions& options) {
  std::map<SubStreamId, std::uint64_t> arrivals;
  for (const auto& [id, groups] : input) {
    std::uint64_t c = 0;
    for (const auto& g : groups) c += g.items.size();
    if (c > 0) arrivals[id] = c;
  }
  const auto capacities = allocate_sample_sizes(sample_size, arrivals, options.policy);

  WhsResult out;
  for (const auto& [id, capacity] : capacities) {
    std::vector<const EpochGroup*> groups;
    for (const auto& g : input.at(id))
      if (!g.items.empty()) groups.push_back(&g);

    std::vector<Item> sample;
    double weight = 1.0;
    if (groups.size() == 1) {
      auto gs = sample_group(*groups.front(), capacity, options.workers, derive_seed(options.seed, {id.value, 0}));
      sample = std::move(gs.items);
      weight = gs.weight;
    } else if (capacity < groups.size()) {
      // Too few slots to give every epoch group one: pool them and keep the
      // total count each group's metadata stands for.
      EpochGroup pooled;
      double represented = 0.0;
      for (const auto* g : groups) {
        represented += g->w_in * static_cast<double>(g->c_in.value_or(g->items.size()));
        pooled.items.insert(pooled.items.end(), g->items.begin(), g->items.end());
      }
      Reservoir reservoir(capacity);
      Rng rng(derive_seed(options.seed, {id.value, 0}));
      for (const Item& item : pooled.items) reservoir.offer(item, rng);
      sample = reservoir.drain().items;
      weight = std::max(1.0, represented / static_cast<double>(sample.size()));
    } else {
      std::map<SubStreamId, std::uint64_t> group_arrivals;
      for (std::size_t g = 0; g < groups.size(); ++g) group_arrivals[SubStreamId{g}] = groups[g]->items.size();
      const auto split = allocate_sample_sizes(capacity, group_arrivals, AllocationPolicy::ProportionalToArrivals);
      double weighted_count = 0.0;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        auto gs = sample_group(*groups[g], split.at(SubStreamId{g}), options.workers,
                               derive_seed(options.seed, {id.value, g}));
        weighted_count += gs.weight * static_cast<double>(gs.items.size());
        sample.insert(sample.end(), gs.items.begin(), gs.items.end());
      }
      weight = weighted_count / static_cast<double>(sample.size());
    }
    out.w_out[id] = weight;
    out.c_out[id] = sample.size();
    out.sample[id] = std::move(sample);
  }
  return out;
}

ShardedSample shard_and_merge(std::span<const Item> items, std::uint64_t capacity, unsigned workers,
                              std::uint64_t seed) {
  if (workers < 1 || capacity / workers == 0) {
    raise(ErrorCode::InvalidWorkers,
          std::to_string(workers) + " workers for capacity " + std::to_string(capacity));
  }
  const std::uint64_t local_capacity = capacity / workers;
  std::vector<Reservoir> reservoirs(workers, Reservoir(local_capacity));
  std::vector<Rng> rngs;
  rngs.reserve(workers);
  rngs.emplace_back(seed);
  for (unsigned k = 1; k < workers; ++k) rngs.emplace_back(derive_seed(seed, {k}));

  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::size_t k = i % workers;
    reservoirs[k].offer(items[i], rngs[k]);
  }

  ShardedSample out;
  out.merged_capacity = local_capacity * workers;
  for (auto& r : reservoirs) {
    auto drained = r.drain();
    out.seen_total += drained.seen;
    out.sample.insert(out.sample.end(), drained.items.begin(), drained.items.end());
  }
  return out;
}

}  // namespace strataflow
