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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "strataflow/stream_model.hpp"

namespace strataflow {

/// How a node splits its per-interval sample size across strata.
enum class AllocationPolicy {
  /// floor(total/|S|) each; remainder one slot at a time in ascending id order.
  Equal,
  /// Proportional to this interval's arrivals, floored at 1 per stratum,
  /// largest-remainder rounding with ties to the smaller id.
  ProportionalToArrivals,
};

/// Partitions items by substream, preserving per-substream order.
std::map<SubStreamId, std::vector<Item>> stratify(std::span<const Item> items);

/// Every stratum receives at least one slot and the sizes sum to at most
/// `total`. BudgetTooSmall when total < number of strata.
std::map<SubStreamId, std::uint64_t> allocate_sample_sizes(std::uint64_t total,
                                                           const std::map<SubStreamId, std::uint64_t>& arrivals,
                                                           AllocationPolicy policy);

/// Local weight of a stratum after sampling n of c arrivals: c/n if c > n, else 1.
double compute_local_weight(std::uint64_t arrived, std::uint64_t capacity);

/// Effective weight corrected for interval misalignment:
/// w_in * w_local * c_in / arrived. Only meaningful when w_local > 1;
/// DegenerateArrival if arrived == 0.
double calibrate_weight(double w_in, double w_local, std::uint64_t c_in, std::uint64_t arrived);

/// Items of one substream that arrived under the same downstream metadata
/// record during one local interval.
struct EpochGroup {
  double w_in = 1.0;
  /// Count the sender forwarded for this record; empty for source-attached
  /// input, where the arrivals themselves are the count.
  std::optional<std::uint64_t> c_in;
  std::vector<Item> items;
};

struct WhsResult {
  std::map<SubStreamId, std::vector<Item>> sample;
  std::map<SubStreamId, double> w_out;
  std::map<SubStreamId, std::uint64_t> c_out;

  std::uint64_t sample_size() const noexcept;
};

struct WhsOptions {
  AllocationPolicy policy = AllocationPolicy::Equal;
  /// Workers per substream; see shard_and_merge.
  unsigned workers = 1;
  /// All random draws derive from this seed, keyed by substream and epoch
  /// group.
  std::uint64_t seed = 0;
};

/// Weighted hierarchical sampling over one interval's input, with a single
/// metadata record per substream. Substreams missing from w_in/c_in default
/// to weight 1 and count = arrivals.
WhsResult whsamp(std::span<const Item> items, std::uint64_t sample_size,
                 const std::map<SubStreamId, double>& w_in, const std::map<SubStreamId, std::uint64_t>& c_in,
                 const WhsOptions& options);

/// General form used by nodes: a substream may carry several epoch groups when
/// a downstream interval straddled this node's interval boundary. Each group
/// is sampled and calibrated on its own; capacity is split across groups in
/// proportion to their arrivals (min 1 each). Groups of one substream are
/// forwarded as one entry with weight sum(Y_g * W_g) / sum(Y_g).
WhsResult whsamp_groups(const std::map<SubStreamId, std::vector<EpochGroup>>& input, std::uint64_t sample_size,
                        const WhsOptions& options);

struct ShardedSample {
  std::vector<Item> sample;
  std::uint64_t seen_total = 0;
  std::uint64_t merged_capacity = 0;
};

/// Splits one substream round-robin over `workers` local reservoirs of
/// capacity floor(capacity/workers) each and concatenates the results.
/// Worker 0 draws from Rng(seed), worker k > 0 from derive_seed(seed, {k}),
/// so workers == 1 reproduces the unsharded path exactly.
/// InvalidWorkers if workers < 1 or floor(capacity/workers) == 0.
ShardedSample shard_and_merge(std::span<const Item> items, std::uint64_t capacity, unsigned workers,
                              std::uint64_t seed);

}  // namespace strataflow
