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

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "strataflow/simnet.hpp"

namespace strataflow::sim::detail {

/// Index-based view of a validated tree.
struct TreeIndex {
  std::map<NodeId, std::size_t> index;
  std::vector<std::optional<std::size_t>> parent;
  std::vector<std::optional<std::size_t>> parent_edge;  ///< into config.edges
  std::vector<std::vector<std::size_t>> children;
  std::vector<std::vector<std::size_t>> sources;  ///< into config.sources
  std::vector<std::size_t> depth;
  /// Children before parents.
  std::vector<std::size_t> bottom_up;
  std::size_t root = 0;
};

/// Validates the tree invariants and fills in NodeConfig::parent from the
/// edge list.
TreeIndex analyze_tree(TopologyConfig& config);

}  // namespace strataflow::sim::detail
