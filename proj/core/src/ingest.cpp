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

#include "strataflow/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "strataflow/error.hpp"

namespace strataflow::ingest {

namespace {

std::optional<double> parse_real(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::size_t resolve_column(const ColumnRef& ref, const std::vector<std::string>& header, std::size_t width) {
  if (!header.empty()) {
    auto it = std::find(header.begin(), header.end(), ref);
    if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
  }
  const bool numeric = !ref.empty() && std::all_of(ref.begin(), ref.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (numeric) {
    const std::size_t index = std::stoul(ref);
    if (index < width) return index;
  }
  raise(ErrorCode::MissingColumn, "column '" + ref + "' not found");
}

}  // namespace

std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> split_delimited(std::string_view line, char delimiter) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.emplace_back();
    } else if (c != '\r' || i + 1 != line.size()) {
      fields.back().push_back(c);
    }
  }
  return fields;
}

ReplayResult replay(const ReplaySpec& spec, SimTime interval_length) {
  std::ifstream in(spec.path);
  if (!in) raise(ErrorCode::Io, "cannot open " + spec.path);
  if (!(spec.speed > 0.0)) raise(ErrorCode::InvalidConfig, "replay speed must be positive");
  if (interval_length <= 0) raise(ErrorCode::InvalidConfig, "interval length must be positive");

  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::uint64_t> line_numbers;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_delimited(line, spec.delimiter);
    if (spec.has_header && header.empty()) {
      header = std::move(fields);
      continue;
    }
    rows.push_back(std::move(fields));
    line_numbers.push_back(line_no);
  }

  const std::size_t width = !header.empty() ? header.size() : (rows.empty() ? 0 : rows.front().size());
  const std::size_t key_col = resolve_column(spec.key_column, header, width);
  const std::size_t value_col = resolve_column(spec.value_column, header, width);
  std::optional<std::size_t> time_col;
  if (spec.time_column) time_col.emplace(resolve_column(*spec.time_column, header, width));

  const SubStreamId overflow{spec.overflow_substream != 0 ? spec.overflow_substream : fnv1a64("__other__")};

  ReplayResult result;
  result.rows = rows.size();

  struct Parsed {
    std::string key;
    double value;
    double seconds;
  };
  std::vector<Parsed> parsed;
  parsed.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& fields = rows[r];
    const auto fail = [&](const std::string& why) {
      if (spec.strict) raise(ErrorCode::MalformedRow, spec.path + ":" + std::to_string(line_numbers[r]) + ": " + why);
      ++result.malformed;
    };
    const std::size_t needed = std::max({key_col, value_col, time_col.value_or(0)}) + 1;
    if (fields.size() < needed) {
      fail("expected at least " + std::to_string(needed) + " fields");
      continue;
    }
    auto value = parse_real(fields[value_col]);
    if (!value) {
      fail("value '" + fields[value_col] + "' is not a finite number");
      continue;
    }
    double seconds = 0.0;
    if (time_col) {
      auto t = parse_real(fields[*time_col]);
      if (!t) {
        fail("time '" + fields[*time_col] + "' is not a number");
        continue;
      }
      seconds = *t;
    }
    parsed.push_back({fields[key_col], *value, seconds});
  }

  std::map<SubStreamId, std::uint64_t> next_seq;
  std::size_t distinct = 0;
  const double t0 = !parsed.empty() && time_col ? parsed.front().seconds : 0.0;
  const std::uint64_t spread = std::max<std::uint64_t>(spec.spread_intervals, 1);
  result.items.reserve(parsed.size());
  for (std::size_t r = 0; r < parsed.size(); ++r) {
    const auto& p = parsed[r];
    auto it = result.strata.find(p.key);
    if (it == result.strata.end()) {
      SubStreamId id = overflow;
      if (distinct < spec.max_strata) {
        auto mapped = spec.key_map.find(p.key);
        id = SubStreamId{mapped != spec.key_map.end() ? mapped->second : fnv1a64(p.key)};
        ++distinct;
      }
      it = result.strata.emplace(p.key, id).first;
    }

    SimTime t = 0;
    if (time_col) {
      t = static_cast<SimTime>(std::llround(std::max(0.0, p.seconds - t0) / spec.speed * kNanosPerSecond));
    } else {
      const long double span = static_cast<long double>(spread) * interval_length;
      t = static_cast<SimTime>(span * r / parsed.size());
    }
    TimedItem ti;
    ti.time = t;
    ti.item.substream = it->second;
    ti.item.value = p.value;
    ti.item.source_interval = static_cast<std::uint64_t>(t / interval_length);
    result.items.push_back(ti);
  }
  std::stable_sort(result.items.begin(), result.items.end(),
                   [](const TimedItem& a, const TimedItem& b) { return a.time < b.time; });
  for (auto& ti : result.items) ti.item.source_seq = next_seq[ti.item.substream]++;
  return result;
}

}  // namespace strataflow::ingest
