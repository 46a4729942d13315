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
#include <variant>
#include <vector>

#include "strataflow/stream_model.hpp"
#include "strataflow/whs.hpp"

namespace strataflow {

/// Simulated time in nanoseconds.
using SimTime = std::int64_t;

inline constexpr SimTime kNanosPerMilli = 1'000'000;
inline constexpr SimTime kNanosPerSecond = 1'000'000'000;

struct NodeConfig {
  NodeId id;
  std::optional<NodeId> parent;  ///< absent for the root
  SimTime interval_length = kNanosPerSecond;
  /// Start of local interval 0 on the simulated clock. Nodes' clocks need not
  /// be aligned.
  SimTime clock_offset = 0;
  std::uint64_t budget = 1;  ///< items per interval
  AllocationPolicy policy = AllocationPolicy::Equal;
  unsigned workers = 1;

  bool is_root() const noexcept { return !parent.has_value(); }
};

/// Maps a resource budget to a per-interval sample size. Identity for now.
/// InvalidBudget when budget == 0.
std::uint64_t cost_function(std::uint64_t budget);

struct OutgoingBatch {
  IntervalBatch batch;
};

/// The root's weighted sample for one window, ready for the query module.
struct RootSample {
  IntervalBatch sample;
};

using IntervalOutput = std::variant<OutgoingBatch, RootSample>;

/// One node's interval loop: buffer arrivals into tumbling local intervals,
/// track the latest downstream metadata per substream, and sample at close.
///
/// Deliveries name the local interval they arrived in; anything for an
/// already closed interval is dropped and counted as stale.
class NodeEngine {
 public:
  NodeEngine(NodeConfig config, std::uint64_t run_seed);

  const NodeConfig& config() const noexcept { return config_; }
  std::uint64_t current_interval() const noexcept { return current_interval_; }

  /// Takes effect from the next close.
  void set_budget(std::uint64_t budget);

  /// Fresh metadata for a substream: bumps its epoch. Items arriving after it
  /// are weighted with it until the next record arrives.
  bool on_metadata(SubStreamId id, MetadataRecord meta, std::uint64_t arrival_interval);
  bool on_metadata(SubStreamId id, MetadataRecord meta) { return on_metadata(id, meta, current_interval_); }

  /// Items without accompanying metadata: raw source items, or the tail of a
  /// batch whose metadata arrived earlier.
  bool on_items(std::span<const Item> items, std::uint64_t arrival_interval);
  bool on_items(std::span<const Item> items) { return on_items(items, current_interval_); }

  bool on_batch(const IntervalBatch& batch, std::uint64_t arrival_interval);
  bool on_batch(const IntervalBatch& batch) { return on_batch(batch, current_interval_); }

  /// Samples the current interval, resets its state and advances the clock.
  /// Empty intervals still produce an (empty) batch.
  IntervalOutput close_interval();

  std::uint64_t stale_deliveries() const noexcept { return stale_deliveries_; }
  std::uint64_t stale_items() const noexcept { return stale_items_; }
  std::uint64_t epoch(SubStreamId id) const;
  std::optional<MetadataRecord> latest_metadata(SubStreamId id) const;
  /// Items buffered for the current interval, all substreams or one.
  std::uint64_t arrived() const;
  std::uint64_t arrived(SubStreamId id) const;
  /// Arrivals seen by the most recent close.
  std::uint64_t last_arrived() const noexcept { return last_arrived_; }
  /// Items held for any interval not yet closed.
  std::uint64_t buffered_items() const;

 private:
  struct SubstreamState {
    std::uint64_t epoch = 0;
    std::optional<MetadataRecord> latest;
  };
  struct BufferedGroup {
    std::uint64_t epoch = 0;
    EpochGroup group;
  };
  using Window = std::map<SubStreamId, std::vector<BufferedGroup>>;

  bool accept(std::uint64_t arrival_interval, std::size_t items);

  NodeConfig config_;
  std::uint64_t run_seed_;
  std::uint64_t current_interval_ = 0;
  std::map<SubStreamId, SubstreamState> substreams_;
  std::map<std::uint64_t, Window> windows_;
  std::uint64_t stale_deliveries_ = 0;
  std::uint64_t stale_items_ = 0;
  std::uint64_t last_arrived_ = 0;
};

}  // namespace strataflow
