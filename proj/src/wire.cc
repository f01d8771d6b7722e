// Copyright 2026 The ntcfrand Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ntcfrand/wire.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "ntcfrand/errors.h"

namespace ntcfrand {

LineChannel::LineChannel(int in_fd, int out_fd, bool owns)
    : in_fd_(in_fd), out_fd_(out_fd), owns_(owns) {}

LineChannel::~LineChannel() {
  if (!owns_) return;
  ::close(in_fd_);
  if (out_fd_ != in_fd_) ::close(out_fd_);
}

void LineChannel::send(const nlohmann::json& msg) {
  const std::string line = msg.dump() + "\n";
  size_t off = 0;
  while (off < line.size()) {
    const ssize_t n = ::write(out_fd_, line.data() + off, line.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw IoError(std::string("write: ") + std::strerror(errno));
    }
    off += static_cast<size_t>(n);
  }
}

nlohmann::json LineChannel::recv() {
  for (;;) {
    const size_t nl = buf_.find('\n');
    if (nl != std::string::npos) {
      const std::string line = buf_.substr(0, nl);
      buf_.erase(0, nl + 1);
      nlohmann::json msg = nlohmann::json::parse(line, nullptr, false);
      if (msg.is_discarded()) throw ProtocolViolation("unparsable message: " + line);
      if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string())
        throw ProtocolViolation("message without a type: " + line);
      return msg;
    }
    char chunk[4096];
    const ssize_t n = ::read(in_fd_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw IoError(std::string("read: ") + std::strerror(errno));
    }
    if (n == 0) throw IoError("peer closed the connection");
    buf_.append(chunk, static_cast<size_t>(n));
  }
}

nlohmann::json LineChannel::expect(const std::string& type) {
  nlohmann::json msg = recv();
  if (msg["type"] != type)
    throw ProtocolViolation("expected '" + type + "', got '" + msg["type"].get<std::string>() + "'");
  return msg;
}

int tcp_listen(uint16_t port, uint16_t* bound_port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw IoError(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0 || ::listen(fd, 1) < 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    throw IoError("bind/listen: " + err);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  if (bound_port) *bound_port = ntohs(addr.sin_port);
  return fd;
}

int tcp_accept(int listen_fd) {
  for (;;) {
    const int fd = ::accept(listen_fd, nullptr, nullptr);
    if (fd >= 0) return fd;
    if (errno != EINTR) throw IoError(std::string("accept: ") + std::strerror(errno));
  }
}

int tcp_connect(const std::string& host, uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0 || !res)
    throw IoError("cannot resolve " + host);
  const int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (fd < 0) {
    ::freeaddrinfo(res);
    throw IoError(std::string("socket: ") + std::strerror(errno));
  }
  const int rc = ::connect(fd, res->ai_addr, res->ai_addrlen);
  ::freeaddrinfo(res);
  if (rc < 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    throw IoError("connect: " + err);
  }
  return fd;
}

std::unique_ptr<LineChannel> socket_channel(int fd) {
  return std::make_unique<LineChannel>(fd, fd, true);
}

std::unique_ptr<LineChannel> stdio_channel() {
  return std::make_unique<LineChannel>(STDIN_FILENO, STDOUT_FILENO, false);
}

}  // namespace ntcfrand
