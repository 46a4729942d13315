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

#include "strataflow/reservoir.hpp"

#include <algorithm>
#include <string>

#include "strataflow/error.hpp"

namespace strataflow {

Reservoir::Reservoir(std::uint64_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) raise(ErrorCode::BudgetTooSmall, "reservoir capacity must be positive");
  slots_.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(capacity_, 1u << 16)));
}

void Reservoir::offer(const Item& item, Rng& rng) {
  ++seen_;
  if (seen_ <= capacity_) {
    slots_.push_back(item);
    return;
  }
  const std::uint64_t j = rng.below(seen_) + 1;
  if (j <= capacity_) slots_[j - 1] = item;
}

Reservoir::Drained Reservoir::drain() {
  Drained out{std::move(slots_), seen_};
  slots_ = {};
  seen_ = 0;
  return out;
}

SrsSample srs_pass(std::span<const Item> items, double fraction, Rng& rng) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    raise(ErrorCode::InvalidFraction, "fraction " + std::to_string(fraction) + " outside (0, 1]");
  }
  SrsSample out;
  out.weight = 1.0 / fraction;
  if (fraction == 1.0) {
    out.sample.assign(items.begin(), items.end());
    return out;
  }
  for (const Item& item : items) {
    if (rng.uniform01() < fraction) out.sample.push_back(item);
  }
  return out;
}

}  // namespace strataflow
