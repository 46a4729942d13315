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
#include <span>
#include <string_view>
#include <vector>

#include "strataflow/stream_model.hpp"

namespace strataflow {

enum class QueryKind { Sum, Mean, Count };

/// Confidence levels of the 68-95-99.7 rule.
enum class Confidence { P68, P95, P997 };

std::string_view to_string(QueryKind kind) noexcept;
std::string_view to_string(Confidence level) noexcept;
std::optional<QueryKind> parse_query_kind(std::string_view text) noexcept;
std::optional<Confidence> parse_confidence(std::string_view text) noexcept;

/// 1, 2 or 3 standard deviations.
double z_score(Confidence level) noexcept;

struct SubstreamDiagnostics {
  SubStreamId substream;
  std::uint64_t sample_size = 0;     ///< Y_i
  double weight = 1.0;               ///< W_i
  double sample_variance = 0.0;      ///< s²_i
  double estimated_count = 0.0;      ///< ĉ_src,i = Y_i · W_i
  double estimated_sum = 0.0;
  bool variance_understated = false;  ///< Y_i < 2, s² reported as 0
};

struct QueryResult {
  std::uint64_t window_id = 0;
  QueryKind kind = QueryKind::Sum;
  double estimate = 0.0;
  double variance = 0.0;
  double error_bound = 0.0;
  Confidence confidence = Confidence::P95;
  /// False only for MEAN over an empty window.
  bool defined = true;
  std::vector<SubstreamDiagnostics> per_substream;
};

/// (Σ values) · weight.
double estimate_substream_sum(std::span<const Item> items, double weight);

double estimate_total_sum(std::span<const double> substream_sums);

struct StratumMean {
  double mean = 0.0;
  double estimated_count = 0.0;
};

/// Count-weighted average of stratum means. EmptyWindow if there are no
/// strata or the counts sum to zero.
double estimate_mean(std::span<const StratumMean> strata);

/// Unbiased s² over Y sampled values; InsufficientSample when Y < 2.
double sample_variance(std::span<const Item> items);

struct StratumSpread {
  double estimated_count = 0.0;  ///< ĉ_src
  std::uint64_t sample_size = 0;  ///< Y
  double sample_variance = 0.0;   ///< s²
};

/// Σ ĉ (ĉ − Y) s² / Y.
double variance_of_sum(std::span<const StratumSpread> strata);

/// Σ φ² (s²/Y) (ĉ − Y)/ĉ with φ = ĉ / Σ ĉ.
double variance_of_mean(std::span<const StratumSpread> strata);

/// z · sqrt(variance).
double error_bound(double variance, Confidence level);

/// Runs one linear query over a root sample and attaches its error bound.
QueryResult run_query(const IntervalBatch& sample, QueryKind kind, Confidence level);

}  // namespace strataflow
