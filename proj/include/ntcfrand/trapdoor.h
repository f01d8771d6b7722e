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
#include <utility>
#include <vector>

#include "json.hpp"
#include "ntcfrand/gauss.h"
#include "ntcfrand/modq.h"
#include "ntcfrand/rng.h"

namespace ntcfrand {

// A = [Abar ; G - R Abar] with Abar (mbar x n) uniform and R (w x mbar)
// ternary, so [R | I] A = G.
struct TrapdoorKey {
  ModMat A;
  std::vector<int64_t> R;  // row-major w x mbar
  size_t n = 0;
  size_t mbar = 0;

  size_t m() const { return A.rows(); }
  size_t w() const { return A.rows() - mbar; }
  int64_t r(size_t i, size_t j) const { return R[i * mbar + j]; }
};

TrapdoorKey gen_trap(const ModRing& ring, size_t n, size_t m, Rng& rng);

struct Inversion {
  ModVec s;
  ModVec e;
};

// Nearest-plane decoding for the lattice g Z_q + q Z^k, k = ceil(log2 q),
// with basis q S^{-T} where S is the bidiagonal gadget basis.
class GadgetDecoder {
 public:
  explicit GadgetDecoder(const ModRing& ring);

  // Writes z = g s + t with t in the nearest-plane cell; returns s.
  uint64_t decode(const uint64_t* z, int64_t* t) const;

  const std::vector<int64_t>& basis() const { return basis_; }  // column-major k x k
  int k() const { return k_; }

 private:
  ModRing ring_;
  int k_;
  std::vector<int64_t> basis_;
  std::vector<double> gs_;       // column-major Gram-Schmidt vectors
  std::vector<double> gs_norm2_;
};

// Minimizes |z - g s|_inf (then |.|_2) over s in Z_q by enumeration; writes
// the residual to t.
uint64_t decode_block_exact(const ModRing& ring, const uint64_t* z, int64_t* t);

constexpr uint64_t kExactDecodeMaxQ = 1 << 16;

// Returns (s, e) with y = A s + e, or nullopt when decoding fails the
// integer residual check [R | I] e == t. Candidates come from nearest plane
// and, for q <= kExactDecodeMaxQ, the exact per-block decoder; the one with
// the shorter e wins.
std::optional<Inversion> invert(const TrapdoorKey& key, const ModVec& y);

// Unique s in Z_q^n with |y - A s| <= max_norm. Guard q^n <= 1e7.
std::optional<Inversion> invert_exhaustive(const ModMat& A, const ModVec& y,
                                           double max_norm);

// Largest r such that every t in [-r, r]^k decodes correctly for every s.
// Returns -1 if even t = 0 fails.
int gadget_decode_radius(const ModRing& ring, int max_r = 8);

struct LossyMatrix {
  ModMat A_tilde;
  ModMat B;
  ModMat C;
  ModMat F;
};

LossyMatrix lossy_sample(const ModRing& ring, size_t n, size_t m, size_t l,
                         const TruncGaussian& chi, Rng& rng);

double lossy_shift_bound(size_t m, size_t n, double B_L, double B_V);

nlohmann::json to_json(const TrapdoorKey& key);
TrapdoorKey trapdoor_from_json(const nlohmann::json& j);

}  // namespace ntcfrand
