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

#include "strataflow/query.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "strataflow/error.hpp"

namespace strataflow {

std::string_view to_string(QueryKind kind) noexcept {
  switch (kind) {
    case QueryKind::Sum: return "SUM";
    case QueryKind::Mean: return "MEAN";
    case QueryKind::Count: return "COUNT";
  }
  return "?";
}

std::string_view to_string(Confidence level) noexcept {
  switch (level) {
    case Confidence::P68: return "68";
    case Confidence::P95: return "95";
    case Confidence::P997: return "99.7";
  }
  return "?";
}

std::optional<QueryKind> parse_query_kind(std::string_view text) noexcept {
  if (text == "SUM" || text == "sum") return QueryKind::Sum;
  if (text == "MEAN" || text == "mean") return QueryKind::Mean;
  if (text == "COUNT" || text == "count") return QueryKind::Count;
  return std::nullopt;
}

std::optional<Confidence> parse_confidence(std::string_view text) noexcept {
  if (text == "68") return Confidence::P68;
  if (text == "95") return Confidence::P95;
  if (text == "99.7") return Confidence::P997;
  return std::nullopt;
}

double z_score(Confidence level) noexcept {
  switch (level) {
    case Confidence::P68: return 1.0;
    case Confidence::P95: return 2.0;
    case Confidence::P997: return 3.0;
  }
  return 0.0;
}

double estimate_substream_sum(std::span<const Item> items, double weight) {
  double sum = 0.0;
  for (const Item& item : items) sum += item.value;
  return sum * weight;
}

double estimate_total_sum(std::span<const double> substream_sums) {
  return std::accumulate(substream_sums.begin(), substream_sums.end(), 0.0);
}

double estimate_mean(std::span<const StratumMean> strata) {
  double total = 0.0;
  for (const auto& s : strata) total += s.estimated_count;
  if (strata.empty() || total <= 0.0) raise(ErrorCode::EmptyWindow, "mean over an empty window");
  double mean = 0.0;
  for (const auto& s : strata) mean += (s.estimated_count / total) * s.mean;
  return mean;
}

double sample_variance(std::span<const Item> items) {
  if (items.size() < 2) {
    raise(ErrorCode::InsufficientSample, "sample variance needs 2 items, got " + std::to_string(items.size()));
  }
  // Two-pass to keep large-magnitude streams (μ=1e7) stable.
  double mean = 0.0;
  for (const Item& item : items) mean += item.value;
  mean /= static_cast<double>(items.size());
  double ss = 0.0;
  for (const Item& item : items) ss += (item.value - mean) * (item.value - mean);
  return ss / static_cast<double>(items.size() - 1);
}

double variance_of_sum(std::span<const StratumSpread> strata) {
  double v = 0.0;
  for (const auto& s : strata) {
    if (s.sample_size == 0) continue;
    const double y = static_cast<double>(s.sample_size);
    v += s.estimated_count * (s.estimated_count - y) * s.sample_variance / y;
  }
  return v;
}

double variance_of_mean(std::span<const StratumSpread> strata) {
  double total = 0.0;
  for (const auto& s : strata) total += s.estimated_count;
  if (total <= 0.0) raise(ErrorCode::EmptyWindow, "mean variance over an empty window");
  double v = 0.0;
  for (const auto& s : strata) {
    if (s.sample_size == 0 || s.estimated_count <= 0.0) continue;
    const double phi = s.estimated_count / total;
    const double y = static_cast<double>(s.sample_size);
    v += phi * phi * (s.sample_variance / y) * (s.estimated_count - y) / s.estimated_count;
  }
  return v;
}

double error_bound(double variance, Confidence level) { return z_score(level) * std::sqrt(variance); }

QueryResult run_query(const IntervalBatch& sample, QueryKind kind, Confidence level) {
  QueryResult result;
  result.window_id = sample.interval_id();
  result.kind = kind;
  result.confidence = level;

  std::vector<StratumSpread> spreads;
  std::vector<StratumMean> means;
  std::vector<double> sums;
  double count = 0.0;
  for (const auto& [id, entry] : sample.entries()) {
    SubstreamDiagnostics d;
    d.substream = id;
    d.sample_size = entry.items.size();
    d.weight = entry.meta.weight;
    d.estimated_count = static_cast<double>(d.sample_size) * d.weight;
    d.estimated_sum = estimate_substream_sum(entry.items, d.weight);
    if (d.sample_size >= 2) {
      d.sample_variance = sample_variance(entry.items);
    } else {
      d.variance_understated = d.estimated_count > static_cast<double>(d.sample_size);
    }
    if (d.sample_size > 0) {
      spreads.push_back({d.estimated_count, d.sample_size, d.sample_variance});
      means.push_back({d.estimated_sum / d.estimated_count, d.estimated_count});
    }
    sums.push_back(d.estimated_sum);
    count += d.estimated_count;
    result.per_substream.push_back(d);
  }

  switch (kind) {
    case QueryKind::Sum:
      result.estimate = estimate_total_sum(sums);
      result.variance = variance_of_sum(spreads);
      break;
    case QueryKind::Count:
      result.estimate = count;
      result.variance = 0.0;
      break;
    case QueryKind::Mean:
      if (means.empty()) {
        result.defined = false;
        break;
      }
      result.estimate = estimate_mean(means);
      result.variance = variance_of_mean(spreads);
      break;
  }
  result.error_bound = error_bound(result.variance, level);
  return result;
}

}  // namespace strataflow
