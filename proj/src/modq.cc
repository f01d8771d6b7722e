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

#include "ntcfrand/modq.h"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace ntcfrand {

namespace {

int ceil_log2(uint64_t q) {
  int k = 0;
  while ((uint64_t{1} << k) < q) ++k;
  return k == 0 ? 1 : k;
}

void check_same(const ModRing& a, const ModRing& b) {
  if (!(a == b)) throw std::invalid_argument("modulus mismatch");
}

}  // namespace

ModRing::ModRing(uint64_t q) : q_(q), bits_(0) {
  if (q < 2 || q > (uint64_t{1} << 31))
    throw std::invalid_argument("modulus must lie in [2, 2^31]");
  bits_ = ceil_log2(q);
}

int64_t centered_rep(uint64_t x, const ModRing& ring) {
  if (x >= ring.q()) throw std::invalid_argument("residue out of range");
  return ring.centered(x);
}

ModVec::ModVec(const ModRing& ring, std::vector<uint64_t> v)
    : ring_(ring), v_(std::move(v)) {
  for (auto& x : v_) x %= ring_.q();
}

ModVec ModVec::from_signed(const ModRing& ring, const std::vector<int64_t>& v) {
  ModVec out(ring, v.size());
  for (size_t i = 0; i < v.size(); ++i) out.v_[i] = ring.reduce(v[i]);
  return out;
}

ModVec ModVec::random(const ModRing& ring, size_t len, Rng& rng) {
  ModVec out(ring, len);
  for (auto& x : out.v_) x = rng.uniform(ring.q());
  return out;
}

std::vector<int64_t> ModVec::centered() const {
  std::vector<int64_t> out(v_.size());
  for (size_t i = 0; i < v_.size(); ++i) out[i] = ring_.centered(v_[i]);
  return out;
}

ModVec ModVec::operator+(const ModVec& o) const {
  check_same(ring_, o.ring_);
  if (size() != o.size()) throw std::invalid_argument("length mismatch");
  ModVec out(ring_, size());
  for (size_t i = 0; i < size(); ++i) out.v_[i] = ring_.add(v_[i], o.v_[i]);
  return out;
}

ModVec ModVec::operator-(const ModVec& o) const {
  check_same(ring_, o.ring_);
  if (size() != o.size()) throw std::invalid_argument("length mismatch");
  ModVec out(ring_, size());
  for (size_t i = 0; i < size(); ++i) out.v_[i] = ring_.sub(v_[i], o.v_[i]);
  return out;
}

ModVec ModVec::scaled(uint64_t c) const {
  ModVec out(ring_, size());
  c %= ring_.q();
  for (size_t i = 0; i < size(); ++i) out.v_[i] = ring_.mul(v_[i], c);
  return out;
}

ModMat::ModMat(const ModRing& ring, size_t rows, size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), d_(rows * cols, 0) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("empty matrix");
}

ModMat::ModMat(const ModRing& ring, size_t rows, size_t cols,
               std::vector<uint64_t> data)
    : ring_(ring), rows_(rows), cols_(cols), d_(std::move(data)) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("empty matrix");
  if (d_.size() != rows * cols) throw std::invalid_argument("data size mismatch");
  for (auto& x : d_) x %= ring_.q();
}

ModMat ModMat::random(const ModRing& ring, size_t rows, size_t cols, Rng& rng) {
  ModMat out(ring, rows, cols);
  for (auto& x : out.d_) x = rng.uniform(ring.q());
  return out;
}

ModVec ModMat::row(size_t r) const {
  return ModVec(ring_, std::vector<uint64_t>(d_.begin() + r * cols_,
                                             d_.begin() + (r + 1) * cols_));
}

ModVec ModMat::operator*(const ModVec& v) const {
  check_same(ring_, v.ring());
  if (v.size() != cols_) throw std::invalid_argument("shape mismatch");
  const uint64_t q = ring_.q();
  std::vector<uint64_t> out(rows_);
  for (size_t r = 0; r < rows_; ++r) {
    uint64_t acc = 0;
    for (size_t c = 0; c < cols_; ++c) acc = (acc + d_[r * cols_ + c] * v[c]) % q;
    out[r] = acc;
  }
  return ModVec(ring_, std::move(out));
}

ModMat ModMat::operator*(const ModMat& o) const {
  check_same(ring_, o.ring_);
  if (cols_ != o.rows_) throw std::invalid_argument("shape mismatch");
  const uint64_t q = ring_.q();
  ModMat out(ring_, rows_, o.cols_);
  for (size_t r = 0; r < rows_; ++r)
    for (size_t c = 0; c < o.cols_; ++c) {
      uint64_t acc = 0;
      for (size_t k = 0; k < cols_; ++k)
        acc = (acc + d_[r * cols_ + k] * o.d_[k * o.cols_ + c]) % q;
      out.d_[r * o.cols_ + c] = acc;
    }
  return out;
}

ModMat ModMat::operator+(const ModMat& o) const {
  check_same(ring_, o.ring_);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch");
  ModMat out(ring_, rows_, cols_);
  for (size_t i = 0; i < d_.size(); ++i) out.d_[i] = ring_.add(d_[i], o.d_[i]);
  return out;
}

ModMat ModMat::operator-(const ModMat& o) const {
  check_same(ring_, o.ring_);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch");
  ModMat out(ring_, rows_, cols_);
  for (size_t i = 0; i < d_.size(); ++i) out.d_[i] = ring_.sub(d_[i], o.d_[i]);
  return out;
}

double euclidean_norm(const ModVec& v) {
  double acc = 0;
  for (int64_t c : v.centered()) acc += static_cast<double>(c) * static_cast<double>(c);
  return std::sqrt(acc);
}

uint64_t inf_norm(const ModVec& v) {
  uint64_t m = 0;
  for (size_t i = 0; i < v.size(); ++i) m = std::max(m, v.ring().abs(v[i]));
  return m;
}

BitString binary_map_J(const ModVec& x) {
  const int k = x.ring().bits();
  BitString out;
  out.reserve(x.size() * k);
  for (size_t i = 0; i < x.size(); ++i)
    for (int j = 0; j < k; ++j) out.push_back(static_cast<uint8_t>((x[i] >> j) & 1));
  return out;
}

std::optional<ModVec> binary_map_J_inverse(const ModRing& ring,
                                           const BitString& bits) {
  const size_t k = static_cast<size_t>(ring.bits());
  if (bits.empty() || bits.size() % k != 0) return std::nullopt;
  ModVec out(ring, bits.size() / k);
  for (size_t i = 0; i < out.size(); ++i) {
    uint64_t v = 0;
    for (size_t j = 0; j < k; ++j) {
      if (bits[i * k + j] > 1) return std::nullopt;
      v |= static_cast<uint64_t>(bits[i * k + j]) << j;
    }
    if (v >= ring.q()) return std::nullopt;
    out.set(i, v);
  }
  return out;
}

ModMat gadget_matrix(const ModRing& ring, size_t n) {
  const size_t k = static_cast<size_t>(ring.bits());
  ModMat g(ring, n * k, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < k; ++j) g.set(i * k + j, i, (uint64_t{1} << j) % ring.q());
  return g;
}

int dot_bits(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) throw std::invalid_argument("bit length mismatch");
  int acc = 0;
  for (size_t i = 0; i < a.size(); ++i) acc ^= (a[i] & b[i]);
  return acc;
}

BitString xor_bits(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) throw std::invalid_argument("bit length mismatch");
  BitString out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

nlohmann::json to_json(const ModMat& m) {
  return {{"q", m.ring().q()}, {"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

nlohmann::json to_json(const ModVec& v) {
  return {{"q", v.ring().q()}, {"rows", v.size()}, {"cols", 1}, {"data", v.data()}};
}

ModMat mat_from_json(const nlohmann::json& j) {
  ModRing ring(j.at("q").get<uint64_t>());
  auto data = j.at("data").get<std::vector<uint64_t>>();
  for (uint64_t x : data)
    if (x >= ring.q()) throw std::invalid_argument("residue out of range");
  return ModMat(ring, j.at("rows").get<size_t>(), j.at("cols").get<size_t>(),
                std::move(data));
}

ModVec vec_from_json(const nlohmann::json& j) {
  if (j.at("cols").get<size_t>() != 1) throw std::invalid_argument("expected a column vector");
  ModMat m = mat_from_json(j);
  return ModVec(m.ring(), m.data());
}

}  // namespace ntcfrand
