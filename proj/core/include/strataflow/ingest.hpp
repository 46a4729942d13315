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
#include <string>
#include <vector>

#include "strataflow/node_engine.hpp"
#include "strataflow/stream_model.hpp"

namespace strataflow::ingest {

/// Column reference: a header name, or a zero-based index given as digits.
using ColumnRef = std::string;

struct ReplaySpec {
  std::string path;
  ColumnRef key_column;
  ColumnRef value_column;
  std::optional<ColumnRef> time_column;  ///< seconds; scaled by 1/speed
  char delimiter = ',';
  bool has_header = true;
  double speed = 1.0;
  /// Without a time column, rows are spread evenly over this many intervals.
  std::uint64_t spread_intervals = 1;
  /// Distinct keys beyond this many share the overflow stratum.
  std::size_t max_strata = 64;
  /// Explicit key → substream ids; other keys hash (FNV-1a 64).
  std::map<std::string, std::uint64_t> key_map;
  std::uint64_t overflow_substream = 0;  ///< 0 → hash of "__other__"
  bool strict = false;
};

struct TimedItem {
  SimTime time = 0;
  Item item;
};

struct ReplayResult {
  std::vector<TimedItem> items;  ///< ordered by emission time, file order on ties
  std::uint64_t rows = 0;        ///< data rows read (header excluded)
  std::uint64_t malformed = 0;   ///< rows skipped in lenient mode
  std::map<std::string, SubStreamId> strata;  ///< key → stratum actually used
};

std::uint64_t fnv1a64(std::string_view text) noexcept;

/// Splits one delimited line; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_delimited(std::string_view line, char delimiter);

/// Reads the whole file into timed items. MissingColumn when a referenced
/// column does not exist; MalformedRow for unparsable rows in strict mode
/// (lenient mode skips and counts them); Io when the file cannot be read.
ReplayResult replay(const ReplaySpec& spec, SimTime interval_length);

}  // namespace strataflow::ingest
