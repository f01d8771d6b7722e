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
#include <functional>
#include <optional>
#include <tuple>

#include "json.hpp"
#include "ntcfrand/gauss.h"
#include "ntcfrand/modq.h"
#include "ntcfrand/profile.h"
#include "ntcfrand/rng.h"
#include "ntcfrand/trapdoor.h"

namespace ntcfrand {

struct NtcfPublicKey {
  ModMat A;
  ModVec u;  // A s + e
};

// Verifier-side key. s and e are cached at generation so INV and the test
// oracles do not have to recover them.
struct NtcfKeyPair {
  Profile profile;
  NtcfPublicKey pub;
  std::optional<TrapdoorKey> trap;  // absent when m < w + n
  ModVec s;
  ModVec e;
};

// Regenerates on self-inversion failure, up to 32 attempts.
NtcfKeyPair ntcf_gen(const Profile& profile, Rng& rng);

// Assembles a key from explicit parts; used for small exhaustive checks.
NtcfKeyPair ntcf_from_parts(const Profile& profile, const ModMat& A,
                            const ModVec& s, const ModVec& e);

// Trapdoor inversion of y, or enumeration when the key has no gadget block.
// Fails when the recovered noise exceeds (floor B_P + floor B_V) sqrt(m).
std::optional<Inversion> ntcf_invert_raw(const NtcfKeyPair& key, const ModVec& y);

// f_{k,b}(x)(y) = D_{B_P}(y - A x - b A s). Uses the secret s.
double density_f(const NtcfKeyPair& key, int b, const ModVec& x, const ModVec& y);
// f'_{k,b}(x)(y) = D_{B_P}(y - A x - b u). Public.
double density_f_prime(const NtcfPublicKey& pk, const Profile& profile, int b,
                       const ModVec& x, const ModVec& y);

// INV: s0 - b s where y = A s0 + e0.
std::optional<ModVec> ntcf_inv(const NtcfKeyPair& key, int b, const ModVec& y);

// CHK: 1 iff y - A x - b u lies in the support of D_{B_P}: every centered
// coordinate at most B_P (hence norm at most B_P sqrt(m)).
int ntcf_chk(const NtcfPublicKey& pk, const Profile& profile, int b,
             const ModVec& x, const ModVec& y);

struct SampleDraw {
  int b;
  ModVec x;
  ModVec y;
};

// Classical draw from the SAMP output distribution.
SampleDraw ntcf_samp(const NtcfPublicKey& pk, const Profile& profile, Rng& rng);

// I_{b,x}(d): block i of d dotted with block i of J(x) xor J(x - (-1)^b 1).
BitString index_map_I(const ModRing& ring, int b, const ModVec& x, const BitString& d);

// I_{b,x}(d) has a nonzero coordinate among the first ceil(n/2) (b = 0) or
// the last floor(n/2) (b = 1) positions.
bool in_G(const ModRing& ring, int b, const ModVec& x, const BitString& d);
bool in_Ghat(const ModRing& ring, const ModVec& x0, const ModVec& x1, const BitString& d);

// Equation parity d . (J(x0) xor J(x1)).
int claw_parity(const ModVec& x0, const ModVec& x1, const BitString& d);

enum class HMembership { kH, kHbar, kNeither };

HMembership in_H(const NtcfKeyPair& key, int b, const ModVec& x, const BitString& d, int c);

struct HardcoreTuple {
  int b;
  ModVec x;
  BitString d;
  int c;
};

using HardcoreAdversary = std::function<HardcoreTuple(const NtcfPublicKey&, Rng&)>;

struct Proportion {
  double p;
  double lo;
  double hi;
};

// Wilson score interval at z standard deviations.
Proportion wilson(uint64_t successes, uint64_t trials, double z = 2.5758);

struct HardcoreReport {
  uint64_t trials;
  Proportion in_h;
  Proportion in_hbar;
  double advantage;  // |P[H] - P[Hbar]|
  double adv_lo;
  double adv_hi;
};

// Fresh key per trial, trial t drawing from substream (seed, t).
HardcoreReport hardcore_game(const Profile& profile, const HardcoreAdversary& adv,
                             uint64_t trials, uint64_t seed);

// Every nonzero vector of the row span of C has at least n/4 entries with
// centered magnitude in (q/8, 3q/8]. Guard q^l <= 1e6.
bool moderate_check(const ModMat& C);
bool moderate_vector(const ModVec& v);

// Distance of (C s, dhat . s mod 2) from uniform over Z_q^l x Z_2 for
// uniform binary s. With v0 given, returns instead the conditional bias
// 1/2 sum_b |Pr(dhat . s = b | C s = v0) - 1/2|. Computed by dynamic
// programming over the coordinates of s; guard q^l <= 1e6.
double parity_tv(const ModMat& C, const BitString& dhat,
                 const std::optional<ModVec>& v0 = std::nullopt);

nlohmann::json to_json(const NtcfPublicKey& pk, const Profile& profile);
NtcfPublicKey public_key_from_json(const nlohmann::json& j);

nlohmann::json secret_to_json(const NtcfKeyPair& key);
NtcfKeyPair keypair_from_json(const nlohmann::json& pub, const nlohmann::json& secret);

}  // namespace ntcfrand
