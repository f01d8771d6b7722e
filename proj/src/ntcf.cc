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

#include "ntcfrand/ntcf.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ntcfrand/errors.h"

namespace ntcfrand {

namespace {

constexpr int kGenAttempts = 32;
constexpr uint64_t kSpanGuard = 1'000'000;

// Enumeration radius for keys without a gadget block: the combined noise
// b e + e0 of an honest image.
double enumeration_bound(const Profile& p) {
  const double rp = std::floor(p.B_P), rv = std::floor(p.B_V);
  return (rp + rv) * std::sqrt(static_cast<double>(p.m));
}

ModVec binary_secret(const ModRing& ring, size_t n, Rng& rng) {
  ModVec s(ring, n);
  for (size_t i = 0; i < n; ++i) s.set(i, static_cast<uint64_t>(rng.bit()));
  return s;
}

uint64_t span_size(const ModRing& ring, size_t l) {
  uint64_t total = 1;
  for (size_t i = 0; i < l; ++i) {
    total *= ring.q();
    if (total > kSpanGuard) throw GuardExceeded("row span exceeds 1e6 vectors");
  }
  return total;
}

}  // namespace

NtcfKeyPair ntcf_gen(const Profile& profile, Rng& rng) {
  profile.validate();
  const ModRing ring(profile.q);
  const TruncGaussian dv(ring, profile.B_V);
  for (int attempt = 0; attempt < kGenAttempts; ++attempt) {
    std::optional<TrapdoorKey> trap;
    std::optional<ModMat> A;
    if (profile.has_gadget_trapdoor()) {
      trap = gen_trap(ring, profile.n, profile.m, rng);
      A = trap->A;
    } else {
      A = ModMat::random(ring, profile.m, profile.n, rng);
    }
    ModVec s = binary_secret(ring, profile.n, rng);
    ModVec e = dv.sample_vec(profile.m, rng);
    ModVec u = *A * s + e;
    NtcfKeyPair key{profile, NtcfPublicKey{*A, u}, trap, s, e};
    auto inv = ntcf_invert_raw(key, u);
    if (inv && inv->s == s && inv->e == e) return key;
  }
  throw std::runtime_error("ntcf_gen: key failed self-inversion " +
                           std::to_string(kGenAttempts) + " times");
}

NtcfKeyPair ntcf_from_parts(const Profile& profile, const ModMat& A,
                            const ModVec& s, const ModVec& e) {
  if (A.rows() != profile.m || A.cols() != profile.n || s.size() != profile.n ||
      e.size() != profile.m)
    throw std::invalid_argument("ntcf_from_parts: shape mismatch");
  return NtcfKeyPair{profile, NtcfPublicKey{A, A * s + e}, std::nullopt, s, e};
}

std::optional<Inversion> ntcf_invert_raw(const NtcfKeyPair& key, const ModVec& y) {
  const double bound = enumeration_bound(key.profile);
  if (!key.trap) return invert_exhaustive(key.pub.A, y, bound);
  auto inv = invert(*key.trap, y);
  // The trapdoor decodes far past the image supports; anything outside
  // them is a failure.
  if (inv && euclidean_norm(inv->e) > bound + 1e-9) return std::nullopt;
  return inv;
}

double density_f(const NtcfKeyPair& key, int b, const ModVec& x, const ModVec& y) {
  const TruncGaussian dp(key.pub.A.ring(), key.profile.B_P);
  ModVec shift = key.pub.A * x;
  if (b) shift = shift + key.pub.A * key.s;
  return dp.density_vec(y - shift);
}

double density_f_prime(const NtcfPublicKey& pk, const Profile& profile, int b,
                       const ModVec& x, const ModVec& y) {
  const TruncGaussian dp(pk.A.ring(), profile.B_P);
  ModVec shift = pk.A * x;
  if (b) shift = shift + pk.u;
  return dp.density_vec(y - shift);
}

std::optional<ModVec> ntcf_inv(const NtcfKeyPair& key, int b, const ModVec& y) {
  auto inv = ntcf_invert_raw(key, y);
  if (!inv) return std::nullopt;
  return b ? inv->s - key.s : inv->s;
}

int ntcf_chk(const NtcfPublicKey& pk, const Profile& profile, int b,
             const ModVec& x, const ModVec& y) {
  if (x.size() != pk.A.cols() || y.size() != pk.A.rows()) return 0;
  ModVec e = y - pk.A * x;
  if (b) e = e - pk.u;
  // Exact support of the product density: a coordinate box, inside the
  // ball of radius B_P sqrt(m).
  for (size_t i = 0; i < e.size(); ++i)
    if (static_cast<double>(e.ring().abs(e[i])) > profile.B_P) return 0;
  return euclidean_norm(e) <= profile.B_P * std::sqrt(static_cast<double>(profile.m)) + 1e-9;
}

SampleDraw ntcf_samp(const NtcfPublicKey& pk, const Profile& profile, Rng& rng) {
  const ModRing& ring = pk.A.ring();
  const TruncGaussian dp(ring, profile.B_P);
  const int b = rng.bit();
  ModVec x = ModVec::random(ring, pk.A.cols(), rng);
  ModVec y = pk.A * x + dp.sample_vec(pk.A.rows(), rng);
  if (b) y = y + pk.u;
  return SampleDraw{b, std::move(x), std::move(y)};
}

BitString index_map_I(const ModRing& ring, int b, const ModVec& x, const BitString& d) {
  const size_t k = static_cast<size_t>(ring.bits());
  if (d.size() != x.size() * k) throw std::invalid_argument("index_map_I: length mismatch");
  ModVec shifted(ring, x.size());
  for (size_t i = 0; i < x.size(); ++i)
    shifted.set(i, b == 0 ? ring.sub(x[i], 1) : ring.add(x[i], 1));
  const BitString diff = xor_bits(binary_map_J(x), binary_map_J(shifted));
  BitString out(x.size(), 0);
  for (size_t i = 0; i < x.size(); ++i) {
    uint8_t acc = 0;
    for (size_t j = 0; j < k; ++j) acc ^= d[i * k + j] & diff[i * k + j];
    out[i] = acc;
  }
  return out;
}

bool in_G(const ModRing& ring, int b, const ModVec& x, const BitString& d) {
  const BitString I = index_map_I(ring, b, x, d);
  const size_t n = I.size(), split = (n + 1) / 2;
  const size_t lo = b == 0 ? 0 : split, hi = b == 0 ? split : n;
  for (size_t i = lo; i < hi; ++i)
    if (I[i]) return true;
  return false;
}

bool in_Ghat(const ModRing& ring, const ModVec& x0, const ModVec& x1, const BitString& d) {
  return in_G(ring, 0, x0, d) && in_G(ring, 1, x1, d);
}

int claw_parity(const ModVec& x0, const ModVec& x1, const BitString& d) {
  return dot_bits(d, xor_bits(binary_map_J(x0), binary_map_J(x1)));
}

HMembership in_H(const NtcfKeyPair& key, int b, const ModVec& x, const BitString& d, int c) {
  const ModRing& ring = key.pub.A.ring();
  if ((b != 0 && b != 1) || (c != 0 && c != 1) || x.size() != key.s.size() ||
      d.size() != x.size() * static_cast<size_t>(ring.bits()))
    return HMembership::kNeither;
  // x - (-1)^b s
  const ModVec other = b == 0 ? x - key.s : x + key.s;
  const ModVec& x0 = b == 0 ? x : other;
  const ModVec& x1 = b == 0 ? other : x;
  if (!in_Ghat(ring, x0, x1, d)) return HMembership::kNeither;
  return claw_parity(x, other, d) == c ? HMembership::kH : HMembership::kHbar;
}

Proportion wilson(uint64_t successes, uint64_t trials, double z) {
  if (trials == 0) return {0, 0, 1};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double center = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

HardcoreReport hardcore_game(const Profile& profile, const HardcoreAdversary& adv,
                             uint64_t trials, uint64_t seed) {
  uint64_t h = 0, hbar = 0;
  for (uint64_t t = 0; t < trials; ++t) {
    Rng rng = substream(seed, "hardcore", 0, t);
    const NtcfKeyPair key = ntcf_gen(profile, rng);
    const HardcoreTuple tup = adv(key.pub, rng);
    switch (in_H(key, tup.b, tup.x, tup.d, tup.c)) {
      case HMembership::kH: ++h; break;
      case HMembership::kHbar: ++hbar; break;
      case HMembership::kNeither: break;
    }
  }
  HardcoreReport r{trials, wilson(h, trials), wilson(hbar, trials), 0, 0, 0};
  const double diff = r.in_h.p - r.in_hbar.p;
  const double lo = r.in_h.lo - r.in_hbar.hi, hi = r.in_h.hi - r.in_hbar.lo;
  r.advantage = std::fabs(diff);
  if (lo <= 0 && hi >= 0) {
    r.adv_lo = 0;
    r.adv_hi = std::max(-lo, hi);
  } else {
    r.adv_lo = std::min(std::fabs(lo), std::fabs(hi));
    r.adv_hi = std::max(std::fabs(lo), std::fabs(hi));
  }
  return r;
}

bool moderate_vector(const ModVec& v) {
  const uint64_t q = v.ring().q();
  size_t count = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    const uint64_t a = v.ring().abs(v[i]);
    if (8 * a > q && 8 * a <= 3 * q) ++count;
  }
  return 4 * count >= v.size();
}

bool moderate_check(const ModMat& C) {
  const ModRing& ring = C.ring();
  const size_t l = C.rows(), n = C.cols();
  const uint64_t total = span_size(ring, l);
  std::vector<uint64_t> a(l, 0);
  for (uint64_t idx = 1; idx < total; ++idx) {
    uint64_t r = idx;
    for (size_t i = 0; i < l; ++i) {
      a[i] = r % ring.q();
      r /= ring.q();
    }
    ModVec v(ring, n);
    for (size_t j = 0; j < n; ++j) {
      uint64_t acc = 0;
      for (size_t i = 0; i < l; ++i) acc = (acc + a[i] * C.at(i, j)) % ring.q();
      v.set(j, acc);
    }
    // A coefficient vector that maps to 0 leaves a Fourier coefficient of
    // modulus 1, so it disqualifies C.
    if (!moderate_vector(v)) return false;
  }
  return true;
}

double parity_tv(const ModMat& C, const BitString& dhat, const std::optional<ModVec>& v0) {
  const ModRing& ring = C.ring();
  const size_t l = C.rows(), n = C.cols();
  if (dhat.size() != n) throw std::invalid_argument("parity_tv: length mismatch");
  const uint64_t q = ring.q();
  const uint64_t span = span_size(ring, l);
  // State index: (v as base-q digits) * 2 + parity.
  std::vector<double> cur(2 * span, 0.0), next(2 * span);
  cur[0] = 1.0;
  std::vector<uint64_t> col(l);
  for (size_t j = 0; j < n; ++j) {
    for (size_t i = 0; i < l; ++i) col[i] = C.at(i, j);
    std::fill(next.begin(), next.end(), 0.0);
    for (uint64_t v = 0; v < span; ++v) {
      uint64_t moved = 0, r = v, place = 1;
      for (size_t i = 0; i < l; ++i) {
        moved += ((r % q + col[i]) % q) * place;
        r /= q;
        place *= q;
      }
      for (int p = 0; p < 2; ++p) {
        const double mass = cur[2 * v + p];
        if (mass == 0) continue;
        next[2 * v + p] += 0.5 * mass;
        next[2 * moved + (p ^ dhat[j])] += 0.5 * mass;
      }
    }
    cur.swap(next);
  }
  if (v0) {
    if (v0->size() != l) throw std::invalid_argument("parity_tv: v0 length mismatch");
    uint64_t idx = 0, place = 1;
    for (size_t i = 0; i < l; ++i) {
      idx += (*v0)[i] * place;
      place *= q;
    }
    const double p0 = cur[2 * idx], p1 = cur[2 * idx + 1];
    if (p0 + p1 == 0) throw std::domain_error("parity_tv: C s = v0 has probability 0");
    return 0.5 * (std::fabs(p0 / (p0 + p1) - 0.5) + std::fabs(p1 / (p0 + p1) - 0.5));
  }
  const double u = 1.0 / static_cast<double>(2 * span);
  double acc = 0;
  for (double x : cur) acc += std::fabs(x - u);
  return 0.5 * acc;
}

nlohmann::json to_json(const NtcfPublicKey& pk, const Profile& profile) {
  return {{"A", to_json(pk.A)}, {"u", to_json(pk.u)}, {"profile", to_json(profile)}};
}

NtcfPublicKey public_key_from_json(const nlohmann::json& j) {
  NtcfPublicKey pk{mat_from_json(j.at("A")), vec_from_json(j.at("u"))};
  if (pk.u.size() != pk.A.rows() || !(pk.u.ring() == pk.A.ring()))
    throw std::invalid_argument("public key: inconsistent shapes");
  return pk;
}

nlohmann::json secret_to_json(const NtcfKeyPair& key) {
  nlohmann::json j = {{"s", to_json(key.s)}, {"e", to_json(key.e)}};
  j["trapdoor"] = key.trap ? to_json(*key.trap) : nlohmann::json(nullptr);
  return j;
}

NtcfKeyPair keypair_from_json(const nlohmann::json& pub, const nlohmann::json& secret) {
  const Profile profile = profile_from_json(pub.at("profile"));
  NtcfKeyPair key = ntcf_from_parts(profile, mat_from_json(pub.at("A")),
                                    vec_from_json(secret.at("s")),
                                    vec_from_json(secret.at("e")));
  if (!(key.pub.u == vec_from_json(pub.at("u"))))
    throw std::invalid_argument("key files disagree: u != A s + e");
  if (!secret.at("trapdoor").is_null()) {
    key.trap = trapdoor_from_json(secret.at("trapdoor"));
    if (!(key.trap->A == key.pub.A))
      throw std::invalid_argument("key files disagree on A");
  }
  return key;
}

}  // namespace ntcfrand
