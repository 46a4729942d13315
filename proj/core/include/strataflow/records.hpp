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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "strataflow/simnet.hpp"

namespace strataflow::records {

/// One line of simulate output. Field order is part of the format.
struct OutputRecord {
  std::string scenario;
  double fraction = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t window = 0;
  std::string approach;  ///< whs, srs or exact
  std::optional<double> estimate;  ///< null for an undefined MEAN
  double error_bound = 0.0;
  std::optional<double> exact;
  double accuracy_loss = 0.0;
  double forwarded_fraction = 0.0;
  double sim_latency = 0.0;  ///< milliseconds

  bool operator==(const OutputRecord&) const = default;
};

/// Three records (whs, srs, exact) per window.
std::vector<OutputRecord> from_run(const std::string& scenario, double fraction, std::uint64_t seed,
                                   const sim::RunResult& run, QueryKind kind);

std::string to_jsonl(const OutputRecord& record);

/// MalformedRow for a line that is not a record.
OutputRecord parse_record(std::string_view line);

/// Skips blank lines.
std::vector<OutputRecord> read_records(std::istream& in);

struct ReportRow {
  std::string scenario;
  double fraction = 0.0;
  std::string approach;
  std::uint64_t windows = 0;
  double median_loss = 0.0;
  double mean_loss = 0.0;
  double coverage = 0.0;  ///< share of windows with |estimate - exact| <= bound
  double mean_forwarded = 0.0;
};

/// Groups by (scenario, fraction, approach), in that sort order.
std::vector<ReportRow> summarize(const std::vector<OutputRecord>& records);

/// Fixed-width text table with a header line.
std::string format_table(const std::vector<ReportRow>& rows);

double median(std::vector<double> values);

}  // namespace strataflow::records
