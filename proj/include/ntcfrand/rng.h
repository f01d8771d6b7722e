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
#include <random>
#include <string_view>

namespace ntcfrand {

// Deterministic generator. Bounded integers and doubles are derived from the
// raw 64-bit stream directly so sequences match across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next() { return draw(); }

  // Uniform on [0, n). n must be positive.
  uint64_t uniform(uint64_t n);

  // Uniform on [0, 1) with 53 bits.
  double uniform01() { return static_cast<double>(draw() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  int bit() { return static_cast<int>(draw() >> 63); }

  // Number of 64-bit words consumed so far.
  uint64_t draws() const { return draws_; }

 private:
  uint64_t draw() {
    ++draws_;
    return eng_();
  }

  std::mt19937_64 eng_;
  uint64_t draws_ = 0;
};

// First 8 bytes (big-endian) of SHA-256(master || label || session || round),
// integers encoded as 8 little-endian bytes.
uint64_t substream_seed(uint64_t master, std::string_view label,
                        uint64_t session, uint64_t round);

inline Rng substream(uint64_t master, std::string_view label,
                     uint64_t session, uint64_t round) {
  return Rng(substream_seed(master, label, session, round));
}

std::string sha256_hex(std::string_view data);

}  // namespace ntcfrand
