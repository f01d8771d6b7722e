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

#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "json.hpp"

namespace ntcfrand {

// Newline-delimited JSON over a pair of file descriptors.
class LineChannel {
 public:
  LineChannel(int in_fd, int out_fd, bool owns);
  ~LineChannel();
  LineChannel(const LineChannel&) = delete;
  LineChannel& operator=(const LineChannel&) = delete;

  void send(const nlohmann::json& msg);
  // Throws IoError on EOF and ProtocolViolation on unparsable lines or a
  // message without a string "type".
  nlohmann::json recv();
  // recv() that also checks the message type.
  nlohmann::json expect(const std::string& type);

 private:
  int in_fd_;
  int out_fd_;
  bool owns_;
  std::string buf_;
};

// Binds 127.0.0.1:port (0 picks a free port). Returns the listening fd and
// writes the bound port.
int tcp_listen(uint16_t port, uint16_t* bound_port);
int tcp_accept(int listen_fd);
int tcp_connect(const std::string& host, uint16_t port);

std::unique_ptr<LineChannel> socket_channel(int fd);
std::unique_ptr<LineChannel> stdio_channel();

}  // namespace ntcfrand
