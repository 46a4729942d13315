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

#include "strataflow/error.hpp"

namespace strataflow {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::OverlappingSubstream: return "OverlappingSubstream";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::CountMismatchInEntry: return "CountMismatchInEntry";
    case ErrorCode::InvalidFraction: return "InvalidFraction";
    case ErrorCode::BudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::DegenerateArrival: return "DegenerateArrival";
    case ErrorCode::InvalidWorkers: return "InvalidWorkers";
    case ErrorCode::StaleBatch: return "StaleBatch";
    case ErrorCode::InvalidBudget: return "InvalidBudget";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::InsufficientSample: return "InsufficientSample";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::MultipleRoots: return "MultipleRoots";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::OrphanSource: return "OrphanSource";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UniquePathViolation: return "UniquePathViolation";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::UnknownMessageType: return "UnknownMessageType";
    case ErrorCode::NonCanonical: return "NonCanonical";
    case ErrorCode::InvalidPayload: return "InvalidPayload";
    case ErrorCode::ConnectionFailed: return "ConnectionFailed";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace strataflow
