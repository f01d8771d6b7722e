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

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "ntcfrand/modq.h"
#include "ntcfrand/ntcf.h"
#include "ntcfrand/profile.h"
#include "ntcfrand/rng.h"

namespace ntcfrand {

using Amplitude = std::complex<double>;

// Amplitudes over (b, x, y), index ((b q^n + x) q^m + y) with x and y read
// as little-endian base-q digits.
struct QState {
  ModRing ring;
  size_t n;
  size_t m;
  std::vector<Amplitude> amp;

  double norm() const;
  size_t x_count() const;
  size_t y_count() const;
};

constexpr size_t kStateGuard = 1'000'000;

size_t digits_index(const ModVec& v);
ModVec index_digits(const ModRing& ring, size_t len, size_t idx);

// sum_b sum_x sqrt(f'_{k,b}(x)(y) / (2 q^n)) |b, x, y>.
QState prepare_samp(const NtcfPublicKey& pk, const Profile& profile);

// State of the (b, x) registers after observing y.
struct Collapsed {
  ModVec y;
  ModRing ring;
  size_t n;
  std::vector<Amplitude> amp;  // index b q^n + x

  double norm() const;
};

double y_probability(const QState& st, const ModVec& y);
Collapsed collapse(const QState& st, const ModVec& y);
Collapsed measure_y(const QState& st, Rng& rng);

std::pair<int, ModVec> measure_preimage(const Collapsed& c, Rng& rng);

// Maps |b, x> to |b, J(x)> on w + 1 qubits and applies H on all of them.
// Index of the result: u + 2 * (d read little-endian).
std::vector<Amplitude> equation_amplitudes(const Collapsed& c);

// Returns (u, d).
std::pair<int, BitString> measure_equation(const Collapsed& c, Rng& rng);

}  // namespace ntcfrand
