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
#include <optional>
#include <string>
#include <vector>

#include "strataflow/error.hpp"
#include "strataflow/query.hpp"
#include "strataflow/whs.hpp"

namespace strataflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// "1,2,10-20" → {1, 2, 10, ..., 20}. InvalidConfig on bad syntax.
std::vector<std::uint64_t> parse_seeds(const std::string& text);

/// Comma-separated fractions; values above 1 are percentages.
std::vector<double> parse_fractions(const std::string& text);

AllocationPolicy parse_policy(const std::string& text);
Confidence parse_confidence_flag(const std::string& text);
QueryKind parse_query_flag(const std::string& text);

/// STRATAFLOW_SEED when set and numeric, else 1.
std::uint64_t default_seed();

/// Configuration problems map to 1, everything else to 2.
int exit_code_for(ErrorCode code) noexcept;

}  // namespace strataflow::cli
