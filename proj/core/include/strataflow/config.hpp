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

#include <string>
#include <string_view>

#include "strataflow/simnet.hpp"

namespace strataflow::config {

inline constexpr int kConfigVersion = 1;

/// Parses a topology document (JSON, "version": 1). Relative replay paths
/// resolve against `base_dir`. InvalidConfig on schema errors and the
/// topology errors raised by validation later.
sim::TopologyConfig parse_topology(std::string_view text, const std::string& base_dir = ".");

/// Reads and parses a file; Io when it cannot be read.
sim::TopologyConfig load_topology(const std::string& path);

/// Serializes a topology in the same dialect (round-trips through parse).
std::string dump_topology(const sim::TopologyConfig& config);

}  // namespace strataflow::config
