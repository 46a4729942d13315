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

#include <limits>

#include "oracles.hpp"
#include "strataflow/stream_model.hpp"

using namespace strataflow;

TEST_CASE("add_entry enforces count, weight and finiteness") {
  IntervalBatch b(1, NodeId{2});
  CHECK_RAISES(ErrorCode::CountMismatchInEntry, b.add_entry(SubStreamId{1}, {1.0, 3}, items_of(1, {1, 2})));
  CHECK_RAISES(ErrorCode::InvalidPayload, b.add_entry(SubStreamId{1}, {0.5, 2}, items_of(1, {1, 2})));
  CHECK_RAISES(ErrorCode::InvalidPayload,
               b.add_entry(SubStreamId{1}, {std::numeric_limits<double>::infinity(), 2}, items_of(1, {1, 2})));
  CHECK_RAISES(ErrorCode::NonFiniteValue,
               b.add_entry(SubStreamId{1}, {1.0, 1}, items_of(1, {std::numeric_limits<double>::quiet_NaN()})));
  CHECK(b.empty());

  b.add_entry(SubStreamId{1}, {2.0, 2}, items_of(1, {1, 2}));
  CHECK_RAISES(ErrorCode::OverlappingSubstream, b.add_entry(SubStreamId{1}, {1.0, 0}, {}));
  CHECK(b.item_count() == 2);
  CHECK(b.entries().at(SubStreamId{1}).meta == MetadataRecord{2.0, 2});
}

TEST_CASE("validate_item rejects NaN and infinity") {
  CHECK_NOTHROW(validate_item(item(1, 3.5)));
  CHECK_RAISES(ErrorCode::NonFiniteValue, validate_item(item(1, std::numeric_limits<double>::quiet_NaN())));
  CHECK_RAISES(ErrorCode::NonFiniteValue, validate_item(item(1, -std::numeric_limits<double>::infinity())));
}

TEST_CASE("batch_merge is a disjoint union") {
  IntervalBatch a(4, NodeId{7});
  a.add_entry(SubStreamId{1}, {2.0, 3}, items_of(1, {1, 2, 3}));
  IntervalBatch b(4, NodeId{8});
  b.add_entry(SubStreamId{2}, {1.0, 5}, items_of(2, {1, 2, 3, 4, 5}));

  const auto m = batch_merge(a, b);
  CHECK(m.entries().size() == 2);
  CHECK(m.item_count() == 8);
  CHECK(m.interval_id() == 4);
  CHECK(m.sender() == NodeId{7});
  CHECK(m.entries().at(SubStreamId{2}) == b.entries().at(SubStreamId{2}));

  SUBCASE("identity") { CHECK(batch_merge(a, IntervalBatch(4, NodeId{9})) == a); }
  SUBCASE("overlap") { CHECK_RAISES(ErrorCode::OverlappingSubstream, batch_merge(a, a)); }
  SUBCASE("counts still agree after merge") {
    for (const auto& [id, e] : m.entries()) CHECK(e.meta.count == e.items.size());
  }
}

TEST_CASE("StratumMap merges many sources onto one stratum") {
  StratumMap map;
  CHECK(map.empty());
  CHECK(map.resolve(5) == SubStreamId{5});
  map.merge(5, SubStreamId{100});
  map.merge(6, SubStreamId{100});
  CHECK(map.resolve(5) == SubStreamId{100});
  CHECK(map.resolve(6) == SubStreamId{100});
  CHECK(map.resolve(7) == SubStreamId{7});
  CHECK(map.table().size() == 2);
}

TEST_CASE("ids order and hash by value") {
  CHECK(SubStreamId{1} < SubStreamId{2});
  CHECK(NodeId{3} == NodeId{3});
  CHECK(std::hash<SubStreamId>{}(SubStreamId{9}) == std::hash<std::uint64_t>{}(9));
}
