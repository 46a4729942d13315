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

#include "strataflow/records.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <tuple>

#include "json.hpp"
#include "strataflow/error.hpp"

namespace strataflow::records {

namespace {

using json = nlohmann::ordered_json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

double exact_of(const sim::WindowReport& w, QueryKind kind, bool& defined) {
  defined = true;
  switch (kind) {
    case QueryKind::Sum: return w.exact.sum;
    case QueryKind::Count: return static_cast<double>(w.exact.count);
    case QueryKind::Mean:
      defined = w.exact.mean.has_value();
      return w.exact.mean.value_or(0.0);
  }
  return 0.0;
}

}  // namespace

std::vector<OutputRecord> from_run(const std::string& scenario, double fraction, std::uint64_t seed,
                                   const sim::RunResult& run, QueryKind kind) {
  std::vector<OutputRecord> out;
  out.reserve(run.windows.size() * 3);
  for (const auto& w : run.windows) {
    bool exact_defined = true;
    const double exact = exact_of(w, kind, exact_defined);
    const std::optional<double> truth = exact_defined ? std::optional(exact) : std::nullopt;
    const auto make = [&](const char* approach, const QueryResult& q, double forwarded) {
      OutputRecord r;
      r.scenario = scenario;
      r.fraction = fraction;
      r.seed = seed;
      r.window = w.window;
      r.approach = approach;
      if (q.defined) r.estimate = q.estimate;
      r.error_bound = q.error_bound;
      r.exact = truth;
      r.accuracy_loss = (r.estimate && truth) ? sim::accuracy_loss(*r.estimate, exact) : 0.0;
      r.forwarded_fraction = forwarded;
      r.sim_latency = w.latency_ms;
      return r;
    };
    out.push_back(make("whs", w.approx, w.forwarded_fraction));
    out.push_back(make("srs", w.srs, w.srs_forwarded_fraction));
    OutputRecord ex;
    ex.scenario = scenario;
    ex.fraction = fraction;
    ex.seed = seed;
    ex.window = w.window;
    ex.approach = "exact";
    ex.estimate = truth;
    ex.exact = truth;
    ex.forwarded_fraction = 1.0;
    ex.sim_latency = w.latency_ms;
    out.push_back(ex);
  }
  return out;
}

std::string to_jsonl(const OutputRecord& r) {
  json j;
  j["scenario"] = r.scenario;
  j["fraction"] = r.fraction;
  j["seed"] = r.seed;
  j["window"] = r.window;
  j["approach"] = r.approach;
  j["estimate"] = optional_number(r.estimate);
  j["error_bound"] = r.error_bound;
  j["exact"] = optional_number(r.exact);
  j["accuracy_loss"] = r.accuracy_loss;
  j["forwarded_fraction"] = r.forwarded_fraction;
  j["sim_latency"] = r.sim_latency;
  return j.dump();
}

OutputRecord parse_record(std::string_view line) {
  try {
    const json j = json::parse(line);
    OutputRecord r;
    r.scenario = j.at("scenario").get<std::string>();
    r.fraction = j.at("fraction").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.window = j.at("window").get<std::uint64_t>();
    r.approach = j.at("approach").get<std::string>();
    if (!j.at("estimate").is_null()) r.estimate = j.at("estimate").get<double>();
    r.error_bound = j.at("error_bound").get<double>();
    if (!j.at("exact").is_null()) r.exact = j.at("exact").get<double>();
    r.accuracy_loss = j.at("accuracy_loss").get<double>();
    r.forwarded_fraction = j.at("forwarded_fraction").get<double>();
    r.sim_latency = j.at("sim_latency").get<double>();
    return r;
  } catch (const json::exception& e) {
    raise(ErrorCode::MalformedRow, std::string("bad record: ") + e.what());
  }
}

std::vector<OutputRecord> read_records(std::istream& in) {
  std::vector<OutputRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_record(line));
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::vector<ReportRow> summarize(const std::vector<OutputRecord>& records) {
  struct Acc {
    std::vector<double> losses;
    std::uint64_t covered = 0;
    std::uint64_t judged = 0;
    double forwarded = 0.0;
  };
  std::map<std::tuple<std::string, double, std::string>, Acc> groups;
  for (const auto& r : records) {
    Acc& a = groups[{r.scenario, r.fraction, r.approach}];
    a.losses.push_back(r.accuracy_loss);
    a.forwarded += r.forwarded_fraction;
    if (r.estimate && r.exact) {
      ++a.judged;
      if (std::abs(*r.estimate - *r.exact) <= r.error_bound) ++a.covered;
    }
  }
  std::vector<ReportRow> rows;
  for (auto& [key, a] : groups) {
    ReportRow row;
    std::tie(row.scenario, row.fraction, row.approach) = key;
    row.windows = a.losses.size();
    double total = 0.0;
    for (double l : a.losses) total += l;
    row.mean_loss = total / static_cast<double>(row.windows);
    row.median_loss = median(std::move(a.losses));
    row.coverage = a.judged > 0 ? static_cast<double>(a.covered) / static_cast<double>(a.judged) : 0.0;
    row.mean_forwarded = a.forwarded / static_cast<double>(row.windows);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_table(const std::vector<ReportRow>& rows) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-18s %9s %-8s %8s %14s %14s %9s %10s\n", "scenario", "fraction", "approach",
                "windows", "median_loss", "mean_loss", "coverage", "forwarded");
  out += buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-18s %9.4f %-8s %8llu %14.6e %14.6e %9.4f %10.4f\n", r.scenario.c_str(), r.fraction,
                  r.approach.c_str(), static_cast<unsigned long long>(r.windows), r.median_loss, r.mean_loss,
                  r.coverage, r.mean_forwarded);
    out += buf;
  }
  return out;
}

}  // namespace strataflow::records
