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

#include "strataflow/node_engine.hpp"

#include <string>

#include "strataflow/error.hpp"
#include "strataflow/rng.hpp"

namespace strataflow {

std::uint64_t cost_function(std::uint64_t budget) {
  if (budget == 0) raise(ErrorCode::InvalidBudget, "budget must be at least one item per interval");
  return budget;
}

NodeEngine::NodeEngine(NodeConfig config, std::uint64_t run_seed) : config_(config), run_seed_(run_seed) {
  cost_function(config_.budget);
  if (config_.workers == 0) raise(ErrorCode::InvalidWorkers, "node " + std::to_string(config_.id.value));
}

void NodeEngine::set_budget(std::uint64_t budget) {
  cost_function(budget);
  config_.budget = budget;
}

bool NodeEngine::accept(std::uint64_t arrival_interval, std::size_t items) {
  if (arrival_interval >= current_interval_) return true;
  ++stale_deliveries_;
  stale_items_ += items;
  return false;
}

bool NodeEngine::on_metadata(SubStreamId id, MetadataRecord meta, std::uint64_t arrival_interval) {
  if (!accept(arrival_interval, 0)) return false;
  auto& state = substreams_[id];
  ++state.epoch;
  state.latest = meta;
  return true;
}

bool NodeEngine::on_items(std::span<const Item> items, std::uint64_t arrival_interval) {
  if (!accept(arrival_interval, items.size())) return false;
  Window& window = windows_[arrival_interval];
  for (const Item& item : items) {
    const auto& state = substreams_[item.substream];
    auto& groups = window[item.substream];
    if (groups.empty() || groups.back().epoch != state.epoch) {
      BufferedGroup fresh;
      fresh.epoch = state.epoch;
      if (state.latest) {
        fresh.group.w_in = state.latest->weight;
        fresh.group.c_in = state.latest->count;
      }
      groups.push_back(std::move(fresh));
    }
    groups.back().group.items.push_back(item);
  }
  return true;
}

bool NodeEngine::on_batch(const IntervalBatch& batch, std::uint64_t arrival_interval) {
  if (!accept(arrival_interval, batch.item_count())) return false;
  for (const auto& [id, entry] : batch.entries()) {
    on_metadata(id, entry.meta, arrival_interval);
    on_items(entry.items, arrival_interval);
  }
  return true;
}

IntervalOutput NodeEngine::close_interval() {
  std::map<SubStreamId, std::vector<EpochGroup>> input;
  last_arrived_ = 0;
  if (auto node = windows_.extract(current_interval_)) {
    for (auto& [id, groups] : node.mapped()) {
      auto& dst = input[id];
      for (auto& g : groups) {
        last_arrived_ += g.group.items.size();
        dst.push_back(std::move(g.group));
      }
    }
  }

  WhsOptions options;
  options.policy = config_.policy;
  options.workers = config_.workers;
  options.seed = derive_seed(run_seed_, {config_.id.value, current_interval_});
  WhsResult result = whsamp_groups(input, cost_function(config_.budget), options);

  IntervalBatch batch(current_interval_, config_.id);
  for (auto& [id, items] : result.sample) {
    batch.add_entry(id, MetadataRecord{result.w_out.at(id), result.c_out.at(id)}, std::move(items));
  }
  ++current_interval_;
  if (config_.parent) return OutgoingBatch{std::move(batch)};
  return RootSample{std::move(batch)};
}

std::uint64_t NodeEngine::epoch(SubStreamId id) const {
  auto it = substreams_.find(id);
  return it == substreams_.end() ? 0 : it->second.epoch;
}

std::optional<MetadataRecord> NodeEngine::latest_metadata(SubStreamId id) const {
  auto it = substreams_.find(id);
  return it == substreams_.end() ? std::nullopt : it->second.latest;
}

std::uint64_t NodeEngine::arrived() const {
  auto it = windows_.find(current_interval_);
  if (it == windows_.end()) return 0;
  std::uint64_t n = 0;
  for (const auto& [id, groups] : it->second)
    for (const auto& g : groups) n += g.group.items.size();
  return n;
}

std::uint64_t NodeEngine::buffered_items() const {
  std::uint64_t n = 0;
  for (const auto& [k, window] : windows_)
    for (const auto& [id, groups] : window)
      for (const auto& g : groups) n += g.group.items.size();
  return n;
}

std::uint64_t NodeEngine::arrived(SubStreamId id) const {
  auto it = windows_.find(current_interval_);
  if (it == windows_.end()) return 0;
  auto jt = it->second.find(id);
  if (jt == it->second.end()) return 0;
  std::uint64_t n = 0;
  for (const auto& g : jt->second) n += g.group.items.size();
  return n;
}

}  // namespace strataflow
