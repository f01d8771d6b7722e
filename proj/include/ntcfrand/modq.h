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
#include <optional>
#include <vector>

#include "json.hpp"
#include "ntcfrand/rng.h"

namespace ntcfrand {

using BitString = std::vector<uint8_t>;

class ModRing {
 public:
  explicit ModRing(uint64_t q);

  uint64_t q() const { return q_; }
  // k = ceil(log2 q), the block width of J and of the gadget vector.
  int bits() const { return bits_; }

  uint64_t reduce(int64_t x) const {
    int64_t r = x % static_cast<int64_t>(q_);
    return static_cast<uint64_t>(r < 0 ? r + static_cast<int64_t>(q_) : r);
  }
  uint64_t add(uint64_t a, uint64_t b) const { return (a + b) % q_; }
  uint64_t sub(uint64_t a, uint64_t b) const { return (a + q_ - b) % q_; }
  uint64_t mul(uint64_t a, uint64_t b) const { return (a * b) % q_; }
  uint64_t neg(uint64_t a) const { return a == 0 ? 0 : q_ - a; }

  // Representative in (-q/2, q/2].
  int64_t centered(uint64_t x) const {
    return 2 * x > q_ ? static_cast<int64_t>(x) - static_cast<int64_t>(q_)
                      : static_cast<int64_t>(x);
  }
  uint64_t abs(uint64_t x) const {
    int64_t c = centered(x);
    return static_cast<uint64_t>(c < 0 ? -c : c);
  }

  bool operator==(const ModRing& o) const { return q_ == o.q_; }

 private:
  uint64_t q_;
  int bits_;
};

int64_t centered_rep(uint64_t x, const ModRing& ring);

class ModVec {
 public:
  ModVec(const ModRing& ring, size_t len) : ring_(ring), v_(len, 0) {}
  ModVec(const ModRing& ring, std::vector<uint64_t> v);
  static ModVec from_signed(const ModRing& ring, const std::vector<int64_t>& v);
  static ModVec random(const ModRing& ring, size_t len, Rng& rng);

  const ModRing& ring() const { return ring_; }
  size_t size() const { return v_.size(); }
  uint64_t operator[](size_t i) const { return v_[i]; }
  void set(size_t i, uint64_t x) { v_[i] = x % ring_.q(); }
  const std::vector<uint64_t>& data() const { return v_; }
  std::vector<int64_t> centered() const;

  ModVec operator+(const ModVec& o) const;
  ModVec operator-(const ModVec& o) const;
  ModVec scaled(uint64_t c) const;
  bool operator==(const ModVec& o) const {
    return ring_ == o.ring_ && v_ == o.v_;
  }

 private:
  ModRing ring_;
  std::vector<uint64_t> v_;
};

class ModMat {
 public:
  ModMat(const ModRing& ring, size_t rows, size_t cols);
  ModMat(const ModRing& ring, size_t rows, size_t cols,
         std::vector<uint64_t> data);
  static ModMat random(const ModRing& ring, size_t rows, size_t cols, Rng& rng);

  const ModRing& ring() const { return ring_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  uint64_t at(size_t r, size_t c) const { return d_[r * cols_ + c]; }
  void set(size_t r, size_t c, uint64_t x) { d_[r * cols_ + c] = x % ring_.q(); }
  const std::vector<uint64_t>& data() const { return d_; }

  ModVec row(size_t r) const;
  ModVec operator*(const ModVec& v) const;
  ModMat operator*(const ModMat& o) const;
  ModMat operator+(const ModMat& o) const;
  ModMat operator-(const ModMat& o) const;
  bool operator==(const ModMat& o) const {
    return ring_ == o.ring_ && rows_ == o.rows_ && cols_ == o.cols_ &&
           d_ == o.d_;
  }

 private:
  ModRing ring_;
  size_t rows_, cols_;
  std::vector<uint64_t> d_;
};

double euclidean_norm(const ModVec& v);
uint64_t inf_norm(const ModVec& v);

// Little-endian k-bit blocks, one per coordinate.
BitString binary_map_J(const ModVec& x);
// Fails on any block encoding a value >= q.
std::optional<ModVec> binary_map_J_inverse(const ModRing& ring,
                                           const BitString& bits);

// I_n tensor (1, 2, ..., 2^{k-1})^T, shape (n*k, n).
ModMat gadget_matrix(const ModRing& ring, size_t n);

int dot_bits(const BitString& a, const BitString& b);
BitString xor_bits(const BitString& a, const BitString& b);

nlohmann::json to_json(const ModMat& m);
nlohmann::json to_json(const ModVec& v);
ModMat mat_from_json(const nlohmann::json& j);
ModVec vec_from_json(const nlohmann::json& j);

}  // namespace ntcfrand
