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
#include <string>
#include <vector>

#include "ntcfrand/modq.h"
#include "ntcfrand/rng.h"

namespace ntcfrand {

// T[i][j] = bits[i - j + n_in - 1], an n_out x n_in Toeplitz matrix.
struct ToeplitzSeed {
  BitString bits;
  size_t n_in = 0;
  size_t n_out = 0;

  static ToeplitzSeed random(size_t n_in, size_t n_out, Rng& rng);
};

// T x over GF(2). Throws std::invalid_argument on length mismatch.
BitString toeplitz_extract(const ToeplitzSeed& seed, const BitString& x);

// -log2 of the largest empirical symbol frequency.
double empirical_min_entropy(const std::vector<uint64_t>& symbols);

// floor(rate n_gen) - 2 log2(1/delta), clamped at 0.
size_t extractor_output_length(double rate, size_t n_gen, double delta = 0x1.0p-40);

// Frequency (monobit) and runs test p-values.
double monobit_p_value(const BitString& bits);
double runs_p_value(const BitString& bits);

// "#bits <count>" header, then hex lines of up to 64 digits, each digit
// holding four bits most significant first; the tail is zero-padded.
std::string bits_to_hex(const BitString& bits);
BitString bits_from_hex(const std::string& text);

}  // namespace ntcfrand
