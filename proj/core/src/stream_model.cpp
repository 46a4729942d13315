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

#include "strataflow/stream_model.hpp"

#include <cmath>
#include <string>

#include "strataflow/error.hpp"

namespace strataflow {

void validate_item(const Item& item) {
  if (!std::isfinite(item.value)) {
    raise(ErrorCode::NonFiniteValue,
          "substream " + std::to_string(item.substream.value) + " seq " + std::to_string(item.source_seq));
  }
}

void IntervalBatch::add_entry(SubStreamId id, MetadataRecord meta, std::vector<Item> items) {
  if (meta.count != items.size()) {
    raise(ErrorCode::CountMismatchInEntry, "substream " + std::to_string(id.value) + " declares " +
                                               std::to_string(meta.count) + " items, carries " +
                                               std::to_string(items.size()));
  }
  if (!std::isfinite(meta.weight) || meta.weight < 1.0) {
    raise(ErrorCode::InvalidPayload, "substream " + std::to_string(id.value) + " weight " + std::to_string(meta.weight));
  }
  for (const Item& item : items) validate_item(item);
  auto [it, inserted] = entries_.try_emplace(id, SubstreamEntry{meta, std::move(items)});
  if (!inserted) raise(ErrorCode::OverlappingSubstream, "substream " + std::to_string(id.value));
}

std::size_t IntervalBatch::item_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [id, entry] : entries_) n += entry.items.size();
  return n;
}

IntervalBatch batch_merge(const IntervalBatch& a, const IntervalBatch& b) {
  IntervalBatch out = a;
  for (const auto& [id, entry] : b.entries()) {
    if (a.entries().contains(id)) {
      raise(ErrorCode::OverlappingSubstream, "substream " + std::to_string(id.value) + " arrives from senders " +
                                                 std::to_string(a.sender().value) + " and " +
                                                 std::to_string(b.sender().value));
    }
    out.add_entry(id, entry.meta, entry.items);
  }
  return out;
}

SubStreamId StratumMap::resolve(std::uint64_t source_id) const {
  auto it = table_.find(source_id);
  return it == table_.end() ? SubStreamId{source_id} : it->second;
}

}  // namespace strataflow
