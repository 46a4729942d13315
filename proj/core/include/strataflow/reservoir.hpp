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
#include <span>
#include <vector>

#include "strataflow/rng.hpp"
#include "strataflow/stream_model.hpp"

namespace strataflow {

/// Single-stream uniform sample of at most `capacity` items (Algorithm R).
/// Single owner; parallelism goes through shard_and_merge, never a lock.
class Reservoir {
 public:
  struct Drained {
    std::vector<Item> items;
    std::uint64_t seen = 0;
  };

  explicit Reservoir(std::uint64_t capacity);

  /// Fill phase appends; afterwards draw j uniformly from {1..seen} and
  /// replace slot j iff j <= capacity.
  void offer(const Item& item, Rng& rng);

  /// Returns the retained items in slot order plus the offered count, and
  /// resets to empty with the same capacity.
  Drained drain();

  std::uint64_t capacity() const noexcept { return capacity_; }
  std::uint64_t seen() const noexcept { return seen_; }
  std::span<const Item> slots() const noexcept { return slots_; }

 private:
  std::uint64_t capacity_;
  std::uint64_t seen_ = 0;
  std::vector<Item> slots_;
};

struct SrsSample {
  std::vector<Item> sample;
  double weight = 1.0;
};

/// Simple random sampling by independent coin flips (the baseline). Each
/// item survives with probability `fraction`; weight is 1/fraction.
/// InvalidFraction unless fraction is in (0, 1].
SrsSample srs_pass(std::span<const Item> items, double fraction, Rng& rng);

}  // namespace strataflow
