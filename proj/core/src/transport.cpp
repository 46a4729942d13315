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

#include "strataflow/transport.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "strataflow/error.hpp"

namespace strataflow::transport {

namespace {

static_assert(std::endian::native == std::endian::little, "wire codec assumes a little-endian host");

template <typename T>
void put(Bytes& out, T value) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));
}

class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

  template <typename T>
  T take() {
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

struct FrameHeader {
  MessageType type;
  std::uint32_t payload_len;
};

FrameHeader parse_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderSize) {
    raise(ErrorCode::TruncatedPayload, "frame header needs 10 bytes, got " + std::to_string(bytes.size()));
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) raise(ErrorCode::BadMagic, "expected AIOT");
  if (bytes[4] != kVersion) raise(ErrorCode::UnsupportedVersion, "version " + std::to_string(bytes[4]));
  const std::uint8_t type = bytes[5];
  if (type != static_cast<std::uint8_t>(MessageType::Batch) &&
      type != static_cast<std::uint8_t>(MessageType::Heartbeat)) {
    raise(ErrorCode::UnknownMessageType, "msg_type " + std::to_string(type));
  }
  std::uint32_t len;
  std::memcpy(&len, bytes.data() + 6, sizeof(len));
  return {static_cast<MessageType>(type), len};
}

}  // namespace

Bytes encode_frame(MessageType type, std::span<const std::uint8_t> payload) {
  Bytes out(kFrameHeaderSize + payload.size());
  std::memcpy(out.data(), kMagic.data(), kMagic.size());
  out[4] = kVersion;
  out[5] = static_cast<std::uint8_t>(type);
  const auto len = static_cast<std::uint32_t>(payload.size());
  std::memcpy(out.data() + 6, &len, sizeof(len));
  if (!payload.empty()) std::memcpy(out.data() + kFrameHeaderSize, payload.data(), payload.size());
  return out;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  const FrameHeader header = parse_header(bytes);
  const std::size_t available = bytes.size() - kFrameHeaderSize;
  if (available < header.payload_len) {
    raise(ErrorCode::TruncatedPayload, "payload_len " + std::to_string(header.payload_len) + ", " +
                                           std::to_string(available) + " bytes present");
  }
  if (available > header.payload_len) {
    raise(ErrorCode::InvalidPayload, std::to_string(available - header.payload_len) + " trailing bytes");
  }
  return Frame{header.type, Bytes(bytes.begin() + kFrameHeaderSize, bytes.end())};
}

Bytes encode_batch_payload(const IntervalBatch& batch) {
  Bytes out;
  out.reserve(kBatchHeaderSize + batch.entries().size() * kEntryHeaderSize + batch.item_count() * kItemSize);
  put<std::uint64_t>(out, batch.interval_id());
  put<std::uint64_t>(out, batch.sender().value);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(batch.entries().size()));
  for (const auto& [id, entry] : batch.entries()) {
    put<std::uint64_t>(out, id.value);
    put<double>(out, entry.meta.weight);
    put<std::uint64_t>(out, entry.meta.count);
    for (const Item& item : entry.items) {
      put<double>(out, item.value);
      put<std::uint64_t>(out, item.source_seq);
      put<std::uint64_t>(out, item.source_interval);
    }
  }
  return out;
}

IntervalBatch decode_batch_payload(std::span<const std::uint8_t> payload) {
  Cursor in(payload);
  if (in.remaining() < kBatchHeaderSize) {
    raise(ErrorCode::TruncatedPayload, "batch header needs 20 bytes, got " + std::to_string(in.remaining()));
  }
  const auto interval_id = in.take<std::uint64_t>();
  const auto sender = in.take<std::uint64_t>();
  const auto entry_count = in.take<std::uint32_t>();

  IntervalBatch batch(interval_id, NodeId{sender});
  std::optional<std::uint64_t> previous;
  for (std::uint32_t e = 0; e < entry_count; ++e) {
    if (in.remaining() < kEntryHeaderSize) {
      raise(ErrorCode::TruncatedPayload, "entry " + std::to_string(e) + " header cut short");
    }
    const auto id = in.take<std::uint64_t>();
    const auto weight = in.take<double>();
    const auto count = in.take<std::uint64_t>();
    if (previous && id <= *previous) {
      raise(ErrorCode::NonCanonical, "substream " + std::to_string(id) + " after " + std::to_string(*previous));
    }
    previous = id;
    if (!std::isfinite(weight) || weight < 1.0) {
      raise(ErrorCode::InvalidPayload, "substream " + std::to_string(id) + " weight " + std::to_string(weight));
    }
    const std::size_t present = in.remaining() / kItemSize;
    if (count > present) {
      raise(ErrorCode::CountMismatch, "substream " + std::to_string(id) + " declares " + std::to_string(count) +
                                          " items, " + std::to_string(present) + " present");
    }
    std::vector<Item> items;
    items.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t k = 0; k < count; ++k) {
      Item item;
      item.substream = SubStreamId{id};
      item.value = in.take<double>();
      item.source_seq = in.take<std::uint64_t>();
      item.source_interval = in.take<std::uint64_t>();
      if (!std::isfinite(item.value)) raise(ErrorCode::InvalidPayload, "non-finite item value");
      items.push_back(item);
    }
    batch.add_entry(SubStreamId{id}, MetadataRecord{weight, count}, std::move(items));
  }
  if (in.remaining() != 0) {
    raise(ErrorCode::CountMismatch, std::to_string(in.remaining()) + " bytes beyond the declared entries");
  }
  return batch;
}

Bytes encode_batch(const IntervalBatch& batch) {
  return encode_frame(MessageType::Batch, encode_batch_payload(batch));
}

IntervalBatch decode_batch(std::span<const std::uint8_t> frame) {
  Frame f = decode_frame(frame);
  if (f.type != MessageType::Batch) raise(ErrorCode::InvalidPayload, "expected a batch frame");
  return decode_batch_payload(f.payload);
}

Bytes encode_heartbeat(std::uint64_t interval_id) {
  Bytes payload;
  put<std::uint64_t>(payload, interval_id);
  return encode_frame(MessageType::Heartbeat, payload);
}

std::uint64_t decode_heartbeat_payload(std::span<const std::uint8_t> payload) {
  if (payload.size() != sizeof(std::uint64_t)) {
    raise(payload.size() < sizeof(std::uint64_t) ? ErrorCode::TruncatedPayload : ErrorCode::InvalidPayload,
          "heartbeat payload is " + std::to_string(payload.size()) + " bytes");
  }
  return Cursor(payload).take<std::uint64_t>();
}

std::uint64_t decode_heartbeat(std::span<const std::uint8_t> frame) {
  Frame f = decode_frame(frame);
  if (f.type != MessageType::Heartbeat) raise(ErrorCode::InvalidPayload, "expected a heartbeat frame");
  return decode_heartbeat_payload(f.payload);
}

void FrameReader::feed(std::span<const std::uint8_t> bytes) {
  if (offset_ > 0 && offset_ == buffer_.size()) {
    buffer_.clear();
    offset_ = 0;
  }
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<Frame> FrameReader::next() {
  const std::span<const std::uint8_t> pending(buffer_.data() + offset_, buffer_.size() - offset_);
  if (pending.size() < kFrameHeaderSize) return std::nullopt;
  const FrameHeader header = parse_header(pending);
  const std::size_t total = kFrameHeaderSize + header.payload_len;
  if (pending.size() < total) return std::nullopt;
  Frame frame{header.type, Bytes(pending.begin() + kFrameHeaderSize, pending.begin() + total)};
  offset_ += total;
  if (offset_ > (1u << 20) && offset_ * 2 > buffer_.size()) {
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(offset_));
    offset_ = 0;
  }
  return frame;
}

}  // namespace strataflow::transport
