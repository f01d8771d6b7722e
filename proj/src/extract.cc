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

#include "ntcfrand/extract.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ntcfrand {

ToeplitzSeed ToeplitzSeed::random(size_t n_in, size_t n_out, Rng& rng) {
  if (n_in == 0 || n_out == 0 || n_out > n_in)
    throw std::invalid_argument("toeplitz seed: need 0 < n_out <= n_in");
  ToeplitzSeed s;
  s.n_in = n_in;
  s.n_out = n_out;
  s.bits.resize(n_in + n_out - 1);
  for (auto& b : s.bits) b = static_cast<uint8_t>(rng.bit());
  return s;
}

BitString toeplitz_extract(const ToeplitzSeed& seed, const BitString& x) {
  if (seed.bits.size() != seed.n_in + seed.n_out - 1 || x.size() != seed.n_in)
    throw std::invalid_argument("toeplitz_extract: length mismatch");
  // Row i is the reversed seed read from offset n_out - 1 - i, so both
  // operands are packed into 64-bit words and each row is a masked parity.
  const size_t L = seed.bits.size();
  std::vector<uint64_t> rev((L + 63) / 64 + 1, 0), xw((seed.n_in + 63) / 64, 0);
  for (size_t k = 0; k < L; ++k)
    if (seed.bits[L - 1 - k]) rev[k / 64] |= uint64_t{1} << (k % 64);
  for (size_t j = 0; j < seed.n_in; ++j)
    if (x[j]) xw[j / 64] |= uint64_t{1} << (j % 64);
  BitString out(seed.n_out, 0);
  for (size_t i = 0; i < seed.n_out; ++i) {
    const size_t off = seed.n_out - 1 - i, w0 = off / 64, sh = off % 64;
    uint64_t acc = 0;
    for (size_t k = 0; k < xw.size(); ++k) {
      uint64_t word = rev[w0 + k] >> sh;
      if (sh && w0 + k + 1 < rev.size()) word |= rev[w0 + k + 1] << (64 - sh);
      acc ^= word & xw[k];
    }
    out[i] = static_cast<uint8_t>(std::popcount(acc) & 1);
  }
  return out;
}

double empirical_min_entropy(const std::vector<uint64_t>& symbols) {
  if (symbols.empty()) throw std::invalid_argument("empirical_min_entropy: no samples");
  std::map<uint64_t, size_t> counts;
  size_t best = 0;
  for (uint64_t s : symbols) best = std::max(best, ++counts[s]);
  return -std::log2(static_cast<double>(best) / static_cast<double>(symbols.size()));
}

size_t extractor_output_length(double rate, size_t n_gen, double delta) {
  const double len = std::floor(rate * static_cast<double>(n_gen)) - 2 * std::log2(1 / delta);
  return len > 0 ? static_cast<size_t>(len) : 0;
}

double monobit_p_value(const BitString& bits) {
  if (bits.empty()) throw std::invalid_argument("monobit: no bits");
  double s = 0;
  for (uint8_t b : bits) s += b ? 1 : -1;
  const double stat = std::fabs(s) / std::sqrt(static_cast<double>(bits.size()));
  return std::erfc(stat / std::sqrt(2.0));
}

double runs_p_value(const BitString& bits) {
  const double n = static_cast<double>(bits.size());
  if (bits.size() < 2) throw std::invalid_argument("runs: need at least two bits");
  double ones = 0;
  for (uint8_t b : bits) ones += b;
  const double pi = ones / n;
  // Prerequisite frequency test of the runs test.
  if (std::fabs(pi - 0.5) >= 2 / std::sqrt(n)) return 0.0;
  double runs = 1;
  for (size_t i = 1; i < bits.size(); ++i) runs += bits[i] != bits[i - 1];
  const double num = std::fabs(runs - 2 * n * pi * (1 - pi));
  const double den = 2 * std::sqrt(2 * n) * pi * (1 - pi);
  return std::erfc(num / den);
}

std::string bits_to_hex(const BitString& bits) {
  static const char* kDigits = "0123456789abcdef";
  std::ostringstream out;
  out << "#bits " << bits.size() << "\n";
  std::string line;
  for (size_t i = 0; i < bits.size(); i += 4) {
    int v = 0;
    for (size_t j = 0; j < 4; ++j) v = (v << 1) | (i + j < bits.size() ? bits[i + j] : 0);
    line.push_back(kDigits[v]);
    if (line.size() == 64) {
      out << line << "\n";
      line.clear();
    }
  }
  if (!line.empty()) out << line << "\n";
  return out.str();
}

BitString bits_from_hex(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  size_t count = 0;
  if (!(in >> header >> count) || header != "#bits")
    throw std::invalid_argument("bit file: missing '#bits <count>' header");
  BitString bits;
  std::string line;
  while (in >> line) {
    for (char ch : line) {
      int v;
      if (ch >= '0' && ch <= '9') v = ch - '0';
      else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
      else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
      else throw std::invalid_argument("bit file: invalid hex digit");
      for (int j = 3; j >= 0; --j) bits.push_back(static_cast<uint8_t>((v >> j) & 1));
    }
  }
  if (bits.size() < count || bits.size() >= count + 4)
    throw std::invalid_argument("bit file: length disagrees with header");
  bits.resize(count);
  return bits;
}

}  // namespace ntcfrand
