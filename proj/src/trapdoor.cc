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

#include "ntcfrand/trapdoor.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ntcfrand/errors.h"

namespace ntcfrand {

TrapdoorKey gen_trap(const ModRing& ring, size_t n, size_t m, Rng& rng) {
  const size_t w = n * static_cast<size_t>(ring.bits());
  if (n == 0 || m < w + n)
    throw std::invalid_argument("gen_trap: need m >= n*ceil(log2 q) + n");
  const size_t mbar = m - w;
  ModMat abar = ModMat::random(ring, mbar, n, rng);
  std::vector<int64_t> R(w * mbar);
  for (auto& x : R) x = static_cast<int64_t>(rng.uniform(3)) - 1;

  ModMat A(ring, m, n);
  for (size_t i = 0; i < mbar; ++i)
    for (size_t j = 0; j < n; ++j) A.set(i, j, abar.at(i, j));
  ModMat G = gadget_matrix(ring, n);
  for (size_t i = 0; i < w; ++i)
    for (size_t j = 0; j < n; ++j) {
      int64_t acc = static_cast<int64_t>(G.at(i, j));
      for (size_t l = 0; l < mbar; ++l)
        acc -= R[i * mbar + l] * static_cast<int64_t>(abar.at(l, j));
      A.set(mbar + i, j, ring.reduce(acc));
    }
  return TrapdoorKey{std::move(A), std::move(R), n, mbar};
}

GadgetDecoder::GadgetDecoder(const ModRing& ring) : ring_(ring), k_(ring.bits()) {
  const int k = k_;
  const uint64_t q = ring.q();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i + 1 < k; ++i) {
    S(i, i) = 2;
    S(i + 1, i) = -1;
  }
  for (int j = 0; j < k; ++j) S(j, k - 1) = static_cast<double>((q >> j) & 1);
  Eigen::MatrixXd B = static_cast<double>(q) * S.transpose().inverse();
  basis_.resize(static_cast<size_t>(k * k));
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < k; ++r) {
      const double v = std::round(B(r, c));
      if (std::fabs(v - B(r, c)) > 1e-6)
        throw std::runtime_error("gadget basis is not integral");
      basis_[c * k + r] = static_cast<int64_t>(v);
    }
  // Every basis column must be a lattice point: v_j = 2^j v_0 mod q.
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < k; ++r)
      if (ring.reduce(basis_[c * k + r]) !=
          ring.mul(ring.reduce(basis_[c * k]), (uint64_t{1} << r) % q))
        throw std::runtime_error("gadget basis column outside the lattice");

  gs_.assign(basis_.begin(), basis_.end());
  gs_norm2_.assign(k, 0);
  for (int i = 0; i < k; ++i) {
    double* v = &gs_[i * k];
    for (int j = 0; j < i; ++j) {
      const double* u = &gs_[j * k];
      double dot = 0;
      for (int r = 0; r < k; ++r) dot += v[r] * u[r];
      const double mu = dot / gs_norm2_[j];
      for (int r = 0; r < k; ++r) v[r] -= mu * u[r];
    }
    double n2 = 0;
    for (int r = 0; r < k; ++r) n2 += v[r] * v[r];
    gs_norm2_[i] = n2;
  }
}

uint64_t GadgetDecoder::decode(const uint64_t* z, int64_t* t) const {
  const int k = k_;
  for (int r = 0; r < k; ++r) t[r] = static_cast<int64_t>(z[r]);
  for (int i = k - 1; i >= 0; --i) {
    const double* u = &gs_[i * k];
    double dot = 0;
    for (int r = 0; r < k; ++r) dot += static_cast<double>(t[r]) * u[r];
    const int64_t c = static_cast<int64_t>(std::llround(dot / gs_norm2_[i]));
    if (c != 0)
      for (int r = 0; r < k; ++r) t[r] -= c * basis_[i * k + r];
  }
  // z - t is a lattice vector whose first coordinate is s.
  return ring_.reduce(static_cast<int64_t>(z[0]) - t[0]);
}

std::optional<Inversion> invert(const TrapdoorKey& key, const ModVec& y) {
  const ModRing& ring = key.A.ring();
  if (y.size() != key.m()) throw std::invalid_argument("invert: length mismatch");
  const size_t n = key.n, mbar = key.mbar, w = key.w();
  const size_t k = static_cast<size_t>(ring.bits());
  GadgetDecoder dec(ring);

  // z = [R | I] y = G s + [R | I] e.
  std::vector<uint64_t> z(w);
  for (size_t i = 0; i < w; ++i) {
    int64_t acc = static_cast<int64_t>(y[mbar + i]);
    for (size_t l = 0; l < mbar; ++l) acc += key.r(i, l) * static_cast<int64_t>(y[l]);
    z[i] = ring.reduce(acc);
  }
  std::vector<int64_t> t(w);
  ModVec s(ring, n);
  auto residual_ok = [&](ModVec& e) {
    e = y - key.A * s;
    const auto ec = e.centered();
    for (size_t i = 0; i < w; ++i) {
      int64_t acc = ec[mbar + i];
      for (size_t l = 0; l < mbar; ++l) acc += key.r(i, l) * ec[l];
      if (acc != t[i]) return false;
    }
    return true;
  };

  std::optional<Inversion> best;
  ModVec e(ring, key.m());
  for (size_t b = 0; b < n; ++b) s.set(b, dec.decode(&z[b * k], &t[b * k]));
  if (residual_ok(e)) best = Inversion{s, e};

  // Nearest plane only guarantees a small cube and can land on a wrong
  // coset that still passes the residual check. The exact l-inf decoder
  // per block reaches half the gadget's minimum distance; keep whichever
  // candidate leaves the shorter e.
  if (ring.q() <= kExactDecodeMaxQ) {
    for (size_t b = 0; b < n; ++b) s.set(b, decode_block_exact(ring, &z[b * k], &t[b * k]));
    if (residual_ok(e) && (!best || euclidean_norm(e) < euclidean_norm(best->e)))
      best = Inversion{s, e};
  }
  return best;
}

uint64_t decode_block_exact(const ModRing& ring, const uint64_t* z, int64_t* t) {
  const int k = ring.bits();
  uint64_t best = 0;
  int64_t best_inf = -1, best_l2 = 0;
  for (uint64_t s = 0; s < ring.q(); ++s) {
    int64_t inf = 0, l2 = 0;
    uint64_t g = s;
    for (int j = 0; j < k; ++j) {
      const int64_t c = ring.centered(ring.sub(z[j], g));
      inf = std::max(inf, c < 0 ? -c : c);
      l2 += c * c;
      g = ring.add(g, g);
    }
    if (best_inf < 0 || inf < best_inf || (inf == best_inf && l2 < best_l2)) {
      best = s;
      best_inf = inf;
      best_l2 = l2;
    }
  }
  uint64_t g = best;
  for (int j = 0; j < k; ++j) {
    t[j] = ring.centered(ring.sub(z[j], g));
    g = ring.add(g, g);
  }
  return best;
}

std::optional<Inversion> invert_exhaustive(const ModMat& A, const ModVec& y,
                                           double max_norm) {
  const ModRing& ring = A.ring();
  const size_t n = A.cols();
  double count = 1;
  for (size_t i = 0; i < n; ++i) {
    count *= static_cast<double>(ring.q());
    if (count > static_cast<double>(kEnumerationGuard))
      throw GuardExceeded("invert_exhaustive: q^n exceeds guard");
  }
  std::optional<Inversion> found;
  ModVec s(ring, n);
  for (;;) {
    ModVec e = y - A * s;
    if (euclidean_norm(e) <= max_norm + 1e-9) {
      if (found) return std::nullopt;
      found = Inversion{s, e};
    }
    size_t i = 0;
    while (i < n && s[i] == ring.q() - 1) s.set(i++, 0);
    if (i == n) break;
    s.set(i, s[i] + 1);
  }
  return found;
}

int gadget_decode_radius(const ModRing& ring, int max_r) {
  GadgetDecoder dec(ring);
  const int k = dec.k();
  std::vector<uint64_t> z(k);
  std::vector<int64_t> t(k), e(k);
  int best = -1;
  for (int r = 0; r <= max_r && 2 * r + 1 <= static_cast<int>(ring.q()); ++r) {
    double cells = static_cast<double>(ring.q());
    for (int i = 0; i < k; ++i) cells *= 2 * r + 1;
    if (cells > static_cast<double>(kEnumerationGuard)) break;
    std::fill(e.begin(), e.end(), -r);
    bool ok = true;
    for (bool more = true; more && ok;) {
      for (uint64_t s = 0; s < ring.q() && ok; ++s) {
        for (int j = 0; j < k; ++j)
          z[j] = ring.reduce(static_cast<int64_t>(ring.mul(s, (uint64_t{1} << j) % ring.q())) + e[j]);
        if (dec.decode(z.data(), t.data()) != s || t != e) ok = false;
      }
      int j = 0;
      while (j < k && e[j] == r) e[j++] = -r;
      if (j == k) more = false;
      else ++e[j];
    }
    if (!ok) break;
    best = r;
  }
  return best;
}

LossyMatrix lossy_sample(const ModRing& ring, size_t n, size_t m, size_t l,
                         const TruncGaussian& chi, Rng& rng) {
  if (l == 0) throw std::invalid_argument("lossy_sample: l must be positive");
  ModMat B = ModMat::random(ring, m, l, rng);
  ModMat C = ModMat::random(ring, l, n, rng);
  ModMat F(ring, m, n);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < n; ++j) F.set(i, j, chi.sample(rng));
  ModMat At = B * C + F;
  return LossyMatrix{std::move(At), std::move(B), std::move(C), std::move(F)};
}

double lossy_shift_bound(size_t m, size_t n, double B_L, double B_V) {
  if (!(B_V > 0)) throw std::invalid_argument("lossy_shift_bound: B_V must be positive");
  const double x = -2.0 * std::numbers::pi * static_cast<double>(m) *
                   static_cast<double>(n) * B_L / B_V;
  return std::sqrt(2.0) * std::sqrt(-std::expm1(x));
}

nlohmann::json to_json(const TrapdoorKey& key) {
  return {{"A", to_json(key.A)},
          {"R", {{"rows", key.w()}, {"cols", key.mbar}, {"data", key.R}}},
          {"layout", {{"mbar", key.mbar}}}};
}

TrapdoorKey trapdoor_from_json(const nlohmann::json& j) {
  ModMat A = mat_from_json(j.at("A"));
  const size_t mbar = j.at("layout").at("mbar").get<size_t>();
  auto R = j.at("R").at("data").get<std::vector<int64_t>>();
  const size_t w = A.rows() - mbar;
  if (mbar > A.rows() || R.size() != w * mbar ||
      w != A.cols() * static_cast<size_t>(A.ring().bits()))
    throw std::invalid_argument("trapdoor key: inconsistent shapes");
  for (int64_t x : R)
    if (x < -1 || x > 1) throw std::invalid_argument("trapdoor key: R not ternary");
  const size_t n = A.cols();
  TrapdoorKey key{std::move(A), std::move(R), n, mbar};
  const ModMat G = gadget_matrix(key.A.ring(), n);
  for (size_t i = 0; i < w; ++i)
    for (size_t c = 0; c < n; ++c) {
      int64_t acc = static_cast<int64_t>(key.A.at(mbar + i, c));
      for (size_t l = 0; l < mbar; ++l) acc += key.r(i, l) * static_cast<int64_t>(key.A.at(l, c));
      if (key.A.ring().reduce(acc) != G.at(i, c))
        throw std::invalid_argument("trapdoor key: [R | I] A != G");
    }
  return key;
}

}  // namespace ntcfrand
