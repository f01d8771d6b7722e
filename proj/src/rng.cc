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

#include "ntcfrand/rng.h"

#include <openssl/sha.h>

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace ntcfrand {

uint64_t Rng::uniform(uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform: empty range");
  if ((n & (n - 1)) == 0) return draw() & (n - 1);
  // Reject the top partial copy of [0, n).
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
  for (;;) {
    uint64_t x = draw();
    if (x <= limit) return x % n;
  }
}

namespace {

void put_u64(std::string& buf, uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::array<unsigned char, SHA256_DIGEST_LENGTH> digest(std::string_view data) {
  std::array<unsigned char, SHA256_DIGEST_LENGTH> out{};
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(),
         out.data());
  return out;
}

}  // namespace

uint64_t substream_seed(uint64_t master, std::string_view label,
                        uint64_t session, uint64_t round) {
  std::string buf;
  put_u64(buf, master);
  buf.append(label);
  put_u64(buf, session);
  put_u64(buf, round);
  auto d = digest(buf);
  uint64_t seed = 0;
  for (int i = 0; i < 8; ++i) seed = (seed << 8) | d[i];
  return seed;
}

std::string sha256_hex(std::string_view data) {
  auto d = digest(data);
  std::string out;
  char hex[3];
  for (unsigned char c : d) {
    std::snprintf(hex, sizeof(hex), "%02x", c);
    out += hex;
  }
  return out;
}

}  // namespace ntcfrand
