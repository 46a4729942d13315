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

#include <stdexcept>
#include <string>
#include <string_view>

namespace strataflow {

enum class ErrorCode {
  // stream_model
  OverlappingSubstream,
  NonFiniteValue,
  CountMismatchInEntry,
  // reservoir
  InvalidFraction,
  // whs
  BudgetTooSmall,
  DegenerateArrival,
  InvalidWorkers,
  // node_engine
  StaleBatch,
  InvalidBudget,
  // query
  EmptyWindow,
  InsufficientSample,
  // simnet
  CycleDetected,
  MultipleRoots,
  NoRoot,
  OrphanSource,
  UnknownNode,
  UniquePathViolation,
  UnknownScenario,
  InvalidConfig,
  // transport
  TruncatedPayload,
  BadMagic,
  UnsupportedVersion,
  CountMismatch,
  UnknownMessageType,
  NonCanonical,
  InvalidPayload,
  ConnectionFailed,
  // ingest
  MalformedRow,
  MissingColumn,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the named codes above;
/// callers branch on code(), humans read what().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace strataflow
