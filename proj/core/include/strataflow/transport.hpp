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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "strataflow/stream_model.hpp"

namespace strataflow::transport {

// Frame layout, little-endian throughout:
//
//   magic "AIOT" (4) | version (1) | msg_type (1) | payload_len u32 (4) | payload
//
// Batch payload:
//   interval_id u64 | sender u64 | entry_count u32
//   per entry (ascending substream id):
//     substream u64 | weight f64 | count u64
//     per item: value f64 | source_seq u64 | source_interval u64
//
// Heartbeat payload: interval_id u64.

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::array<std::uint8_t, 4> kMagic{0x41, 0x49, 0x4F, 0x54};
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kFrameHeaderSize = 10;
inline constexpr std::size_t kBatchHeaderSize = 20;
inline constexpr std::size_t kEntryHeaderSize = 24;
inline constexpr std::size_t kItemSize = 24;

enum class MessageType : std::uint8_t { Batch = 0x01, Heartbeat = 0x02 };

struct Frame {
  MessageType type = MessageType::Batch;
  Bytes payload;

  friend bool operator==(const Frame&, const Frame&) = default;
};

Bytes encode_frame(MessageType type, std::span<const std::uint8_t> payload);

/// Decodes exactly one frame occupying all of `bytes`.
/// BadMagic, UnsupportedVersion, UnknownMessageType, TruncatedPayload.
Frame decode_frame(std::span<const std::uint8_t> bytes);

Bytes encode_batch_payload(const IntervalBatch& batch);
IntervalBatch decode_batch_payload(std::span<const std::uint8_t> payload);

/// Full frame (header + payload) for one batch. Canonical: entries are
/// written in ascending substream order.
Bytes encode_batch(const IntervalBatch& batch);

/// Inverse of encode_batch. Besides the frame errors: TruncatedPayload when a
/// header is cut short, CountMismatch when an entry's declared count does not
/// match the items present, NonCanonical for out-of-order or duplicate
/// entries, InvalidPayload for weights < 1 or non-finite values.
IntervalBatch decode_batch(std::span<const std::uint8_t> frame);

Bytes encode_heartbeat(std::uint64_t interval_id);
std::uint64_t decode_heartbeat(std::span<const std::uint8_t> frame);
std::uint64_t decode_heartbeat_payload(std::span<const std::uint8_t> payload);

/// Incremental frame extraction from an ordered byte stream. Header errors
/// surface as soon as the first 10 bytes of a frame are buffered.
class FrameReader {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  std::optional<Frame> next();
  std::size_t buffered() const noexcept { return buffer_.size() - offset_; }

 private:
  Bytes buffer_;
  std::size_t offset_ = 0;
};

}  // namespace strataflow::transport
