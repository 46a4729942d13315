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

#include "args.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace strataflow::cli {

namespace {

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) raise(ErrorCode::InvalidConfig, "not a seed: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) {
    const auto b = part.find_first_not_of(" \t");
    const auto e = part.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(part.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& part : split(text, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(to_u64(part));
      continue;
    }
    const auto lo = to_u64(part.substr(0, dash));
    const auto hi = to_u64(part.substr(dash + 1));
    if (hi < lo) raise(ErrorCode::InvalidConfig, "empty seed range '" + part + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) raise(ErrorCode::InvalidConfig, "no seeds given");
  return seeds;
}

std::vector<double> parse_fractions(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    char* end = nullptr;
    double v = std::strtod(part.c_str(), &end);
    if (end != part.c_str() + part.size() || !std::isfinite(v)) raise(ErrorCode::InvalidConfig, "not a fraction: '" + part + "'");
    if (v > 1.0) v /= 100.0;
    if (!(v > 0.0 && v <= 1.0)) raise(ErrorCode::InvalidFraction, "fraction out of range: '" + part + "'");
    out.push_back(v);
  }
  if (out.empty()) raise(ErrorCode::InvalidConfig, "no fractions given");
  return out;
}

AllocationPolicy parse_policy(const std::string& text) {
  if (text == "equal") return AllocationPolicy::Equal;
  if (text == "proportional") return AllocationPolicy::ProportionalToArrivals;
  raise(ErrorCode::InvalidConfig, "policy must be equal or proportional");
}

Confidence parse_confidence_flag(const std::string& text) {
  if (auto c = parse_confidence(text)) return *c;
  raise(ErrorCode::InvalidConfig, "confidence must be 68, 95 or 99.7");
}

QueryKind parse_query_flag(const std::string& text) {
  if (auto q = parse_query_kind(text)) return *q;
  raise(ErrorCode::InvalidConfig, "query must be sum, mean or count");
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("STRATAFLOW_SEED")) {
    std::uint64_t v = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) return v;
  }
  return 1;
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidFraction:
    case ErrorCode::InvalidBudget:
    case ErrorCode::InvalidWorkers:
    case ErrorCode::BudgetTooSmall:
    case ErrorCode::UnknownScenario:
    case ErrorCode::CycleDetected:
    case ErrorCode::MultipleRoots:
    case ErrorCode::NoRoot:
    case ErrorCode::OrphanSource:
    case ErrorCode::UnknownNode:
    case ErrorCode::UniquePathViolation:
    case ErrorCode::MissingColumn:
    case ErrorCode::MalformedRow:
    case ErrorCode::Io:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

}  // namespace strataflow::cli
