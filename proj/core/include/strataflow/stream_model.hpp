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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace strataflow {

/// One stratum. Unique per source, or per merged group of identically
/// distributed sources.
struct SubStreamId {
  std::uint64_t value = 0;
  friend auto operator<=>(const SubStreamId&, const SubStreamId&) = default;
};

struct NodeId {
  std::uint64_t value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

/// One stream record. `source_interval` is ground-truth bookkeeping for the
/// simulator; sampling never reads it.
struct Item {
  SubStreamId substream;
  double value = 0.0;
  std::uint64_t source_seq = 0;
  std::uint64_t source_interval = 0;

  friend bool operator==(const Item&, const Item&) = default;
};

/// Throws NonFiniteValue for NaN/inf payloads.
void validate_item(const Item& item);

/// Per-substream metadata that travels ahead of the sampled items:
/// the effective weight W (>= 1) and the forwarded count C.
struct MetadataRecord {
  double weight = 1.0;
  std::uint64_t count = 0;

  friend bool operator==(const MetadataRecord&, const MetadataRecord&) = default;
};

struct SubstreamEntry {
  MetadataRecord meta;
  std::vector<Item> items;

  friend bool operator==(const SubstreamEntry&, const SubstreamEntry&) = default;
};

/// What a node sends to its parent once per local interval.
class IntervalBatch {
 public:
  using Entries = std::map<SubStreamId, SubstreamEntry>;

  IntervalBatch() = default;
  IntervalBatch(std::uint64_t interval_id, NodeId sender) : interval_id_(interval_id), sender_(sender) {}

  /// Adds one substream entry. meta.count must equal items.size() and the
  /// weight must be finite and >= 1; a substream may appear only once.
  /// CountMismatchInEntry, InvalidPayload, NonFiniteValue, OverlappingSubstream.
  void add_entry(SubStreamId id, MetadataRecord meta, std::vector<Item> items);

  std::uint64_t interval_id() const noexcept { return interval_id_; }
  NodeId sender() const noexcept { return sender_; }
  const Entries& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t item_count() const noexcept;

  friend bool operator==(const IntervalBatch&, const IntervalBatch&) = default;

 private:
  std::uint64_t interval_id_ = 0;
  NodeId sender_;
  Entries entries_;
};

/// Union of two batches bound for the same receiving interval. Keeps a's
/// header. Substream key sets must be disjoint (unique-path invariant),
/// otherwise OverlappingSubstream.
IntervalBatch batch_merge(const IntervalBatch& a, const IntervalBatch& b);

/// Optional many-to-one mapping from raw source ids onto strata. Ids without
/// an explicit mapping are their own stratum.
class StratumMap {
 public:
  void merge(std::uint64_t source_id, SubStreamId stratum) { table_[source_id] = stratum; }
  SubStreamId resolve(std::uint64_t source_id) const;
  bool empty() const noexcept { return table_.empty(); }
  const std::map<std::uint64_t, SubStreamId>& table() const noexcept { return table_; }

 private:
  std::map<std::uint64_t, SubStreamId> table_;
};

}  // namespace strataflow

template <>
struct std::hash<strataflow::SubStreamId> {
  std::size_t operator()(const strataflow::SubStreamId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};

template <>
struct std::hash<strataflow::NodeId> {
  std::size_t operator()(const strataflow::NodeId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
