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

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "strataflow/transport.hpp"

namespace strataflow::transport {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
};

/// "host:port"; InvalidConfig otherwise.
Endpoint parse_endpoint(const std::string& text);

/// Owning TCP socket.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept : fd_(other.release()) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket();

  bool valid() const noexcept { return fd_ >= 0; }
  int fd() const noexcept { return fd_; }
  int release() noexcept;
  void close() noexcept;

  void send_all(std::span<const std::uint8_t> bytes);
  /// 0 on orderly shutdown.
  std::size_t recv_some(std::span<std::uint8_t> buffer);

 private:
  int fd_ = -1;
};

class Listener {
 public:
  /// Port 0 binds an ephemeral port; see port().
  explicit Listener(const Endpoint& endpoint);

  std::uint16_t port() const noexcept { return port_; }
  Socket accept();

 private:
  Socket socket_;
  std::uint16_t port_ = 0;
};

/// Retries until `timeout` elapses; ConnectionFailed afterwards.
Socket connect_to(const Endpoint& endpoint, std::chrono::milliseconds timeout = std::chrono::seconds(10));

/// One ordered session carrying frames in one direction or both.
class FrameStream {
 public:
  explicit FrameStream(Socket socket) : socket_(std::move(socket)) {}

  void write(std::span<const std::uint8_t> frame) { socket_.send_all(frame); }
  /// Blocks for the next complete frame; nullopt once the peer closed cleanly.
  /// Protocol errors propagate as strataflow::Error.
  std::optional<Frame> read();

  Socket& socket() noexcept { return socket_; }

 private:
  Socket socket_;
  FrameReader reader_;
};

}  // namespace strataflow::transport
