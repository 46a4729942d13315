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

#include "strataflow/tcp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <thread>

#include "strataflow/error.hpp"

namespace strataflow::transport {

namespace {

sockaddr_in to_sockaddr(const Endpoint& endpoint) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(endpoint.port);
  const std::string host = endpoint.host == "localhost" ? "127.0.0.1" : endpoint.host;
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    raise(ErrorCode::InvalidConfig, "not an IPv4 address: " + endpoint.host);
  }
  return addr;
}

std::string errno_text() { return std::strerror(errno); }

}  // namespace

Endpoint parse_endpoint(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon + 1 == text.size()) {
    raise(ErrorCode::InvalidConfig, "endpoint must be host:port, got '" + text + "'");
  }
  Endpoint ep;
  ep.host = text.substr(0, colon);
  try {
    const unsigned long port = std::stoul(text.substr(colon + 1));
    if (port > 65535) throw std::out_of_range("port");
    ep.port = static_cast<std::uint16_t>(port);
  } catch (const std::exception&) {
    raise(ErrorCode::InvalidConfig, "bad port in '" + text + "'");
  }
  return ep;
}

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.release();
  }
  return *this;
}

Socket::~Socket() { close(); }

int Socket::release() noexcept {
  const int fd = fd_;
  fd_ = -1;
  return fd;
}

void Socket::close() noexcept {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void Socket::send_all(std::span<const std::uint8_t> bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      raise(ErrorCode::ConnectionFailed, "send: " + errno_text());
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::size_t Socket::recv_some(std::span<std::uint8_t> buffer) {
  for (;;) {
    const ssize_t n = ::recv(fd_, buffer.data(), buffer.size(), 0);
    if (n >= 0) return static_cast<std::size_t>(n);
    if (errno != EINTR) raise(ErrorCode::ConnectionFailed, "recv: " + errno_text());
  }
}

Listener::Listener(const Endpoint& endpoint) {
  socket_ = Socket(::socket(AF_INET, SOCK_STREAM, 0));
  if (!socket_.valid()) raise(ErrorCode::ConnectionFailed, "socket: " + errno_text());
  int yes = 1;
  ::setsockopt(socket_.fd(), SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  sockaddr_in addr = to_sockaddr(endpoint);
  if (::bind(socket_.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    raise(ErrorCode::ConnectionFailed, "bind " + endpoint.host + ":" + std::to_string(endpoint.port) + ": " +
                                           errno_text());
  }
  if (::listen(socket_.fd(), 16) != 0) raise(ErrorCode::ConnectionFailed, "listen: " + errno_text());
  socklen_t len = sizeof(addr);
  ::getsockname(socket_.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

Socket Listener::accept() {
  for (;;) {
    const int fd = ::accept(socket_.fd(), nullptr, nullptr);
    if (fd >= 0) {
      int yes = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &yes, sizeof(yes));
      return Socket(fd);
    }
    if (errno != EINTR) raise(ErrorCode::ConnectionFailed, "accept: " + errno_text());
  }
}

Socket connect_to(const Endpoint& endpoint, std::chrono::milliseconds timeout) {
  const sockaddr_in addr = to_sockaddr(endpoint);
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    Socket s(::socket(AF_INET, SOCK_STREAM, 0));
    if (!s.valid()) raise(ErrorCode::ConnectionFailed, "socket: " + errno_text());
    if (::connect(s.fd(), reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) == 0) {
      int yes = 1;
      ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &yes, sizeof(yes));
      return s;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      raise(ErrorCode::ConnectionFailed,
            "connect " + endpoint.host + ":" + std::to_string(endpoint.port) + ": " + errno_text());
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

std::optional<Frame> FrameStream::read() {
  std::array<std::uint8_t, 64 * 1024> chunk;
  for (;;) {
    if (auto frame = reader_.next()) return frame;
    const std::size_t n = socket_.recv_some(chunk);
    if (n == 0) {
      if (reader_.buffered() != 0) {
        raise(ErrorCode::TruncatedPayload, "peer closed mid-frame with " + std::to_string(reader_.buffered()) +
                                               " bytes pending");
      }
      return std::nullopt;
    }
    reader_.feed(std::span<const std::uint8_t>(chunk.data(), n));
  }
}

}  // namespace strataflow::transport
