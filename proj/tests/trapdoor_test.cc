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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "ntcfrand/errors.h"
#include "ntcfrand/profile.h"

namespace ntcfrand {
namespace {

ModMat bracket_R_I(const TrapdoorKey& key) {
  const ModRing& ring = key.A.ring();
  ModMat RI(ring, key.w(), key.m());
  for (size_t i = 0; i < key.w(); ++i) {
    for (size_t l = 0; l < key.mbar; ++l) RI.set(i, l, ring.reduce(key.r(i, l)));
    RI.set(i, key.mbar + i, 1);
  }
  return RI;
}

// Rank over Z_q, q prime, by elimination.
size_t rank_mod_q(const ModMat& M) {
  const ModRing& ring = M.ring();
  std::vector<std::vector<uint64_t>> a(M.rows(), std::vector<uint64_t>(M.cols()));
  for (size_t i = 0; i < M.rows(); ++i)
    for (size_t j = 0; j < M.cols(); ++j) a[i][j] = M.at(i, j);
  auto inv = [&](uint64_t x) {
    uint64_t r = 1, e = ring.q() - 2;
    while (e) {
      if (e & 1) r = ring.mul(r, x);
      x = ring.mul(x, x);
      e >>= 1;
    }
    return r;
  };
  size_t rank = 0;
  for (size_t c = 0; c < M.cols() && rank < M.rows(); ++c) {
    size_t p = rank;
    while (p < M.rows() && a[p][c] == 0) ++p;
    if (p == M.rows()) continue;
    std::swap(a[p], a[rank]);
    const uint64_t iv = inv(a[rank][c]);
    for (size_t i = 0; i < M.rows(); ++i) {
      if (i == rank || a[i][c] == 0) continue;
      const uint64_t f = ring.mul(a[i][c], iv);
      for (size_t j = 0; j < M.cols(); ++j) a[i][j] = ring.sub(a[i][j], ring.mul(f, a[rank][j]));
    }
    ++rank;
  }
  return rank;
}

TEST(GenTrap, ShapeAndGadgetIdentity) {
  const ModRing ring(13);
  Rng rng(1);
  const TrapdoorKey key = gen_trap(ring, 2, 12, rng);
  EXPECT_EQ(key.A.rows(), 12u);
  EXPECT_EQ(key.A.cols(), 2u);
  EXPECT_EQ(key.w(), 8u);
  EXPECT_EQ(key.mbar, 4u);
  for (int64_t r : key.R) EXPECT_TRUE(r >= -1 && r <= 1);
  EXPECT_EQ(bracket_R_I(key) * key.A, gadget_matrix(ring, 2));
  EXPECT_THROW(gen_trap(ring, 2, 9, rng), std::invalid_argument);
}

TEST(GenTrap, EntryHistogramUniform) {
  const ModRing ring(13);
  Rng rng(77);
  std::vector<double> counts(13, 0);
  size_t total = 0;
  while (total < 100000) {
    const TrapdoorKey key = gen_trap(ring, 2, 12, rng);
    for (uint64_t x : key.A.data()) counts[x] += 1;
    total += key.A.data().size();
  }
  double stat = 0;
  const double expect = static_cast<double>(total) / 13;
  for (double c : counts) stat += (c - expect) * (c - expect) / expect;
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(12), stat));
  EXPECT_GT(p, 0.001) << "chi-square " << stat;
}

TEST(Invert, ZeroNoiseExhaustive) {
  const ModRing ring(13);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const TrapdoorKey key = gen_trap(ring, 1, 5, rng);
    for (uint64_t s = 0; s < 13; ++s) {
      const ModVec sv(ring, std::vector<uint64_t>{s});
      const auto inv = invert(key, key.A * sv);
      ASSERT_TRUE(inv.has_value());
      EXPECT_EQ(inv->s, sv);
      EXPECT_EQ(inv->e, ModVec(ring, 5));
    }
  }
}

// Every s and every e in {-1, 0, 1}^m at the default m = w + n.
TEST(Invert, TernaryNoiseExhaustiveQ13) {
  const ModRing ring(13);
  const size_t m = 5;
  for (uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(1000 + seed);
    const TrapdoorKey key = gen_trap(ring, 1, m, rng);
    for (uint64_t s = 0; s < 13; ++s) {
      const ModVec sv(ring, std::vector<uint64_t>{s});
      for (int idx = 0; idx < 243; ++idx) {
        std::vector<int64_t> e(m);
        for (size_t i = 0, t = idx; i < m; ++i, t /= 3) e[i] = static_cast<int64_t>(t % 3) - 1;
        const ModVec ev = ModVec::from_signed(ring, e);
        const auto inv = invert(key, key.A * sv + ev);
        ASSERT_TRUE(inv.has_value()) << "seed " << seed << " s " << s << " idx " << idx;
        EXPECT_EQ(inv->s, sv);
        EXPECT_EQ(inv->e, ev);
      }
    }
  }
}

TEST(Invert, DeskProfileRoundTrip) {
  for (const char* name : {"desk-small", "desk-medium"}) {
    const Profile p = profile_by_name(name);
    const ModRing ring(p.q);
    const TruncGaussian dp(ring, p.B_P);
    Rng rng(5);
    const TrapdoorKey key = gen_trap(ring, p.n, p.m, rng);
    for (int t = 0; t < 1000; ++t) {
      const ModVec s = ModVec::random(ring, p.n, rng);
      const ModVec e = dp.sample_vec(p.m, rng);
      const auto inv = invert(key, key.A * s + e);
      ASSERT_TRUE(inv.has_value());
      EXPECT_EQ(inv->s, s);
      EXPECT_EQ(inv->e, e);
    }
  }
}

TEST(Invert, FuzzReconstructsExactly) {
  const ModRing ring(13);
  Rng rng(8);
  const TrapdoorKey key = gen_trap(ring, 2, 12, rng);
  int failures = 0;
  for (int t = 0; t < 2000; ++t) {
    const ModVec y = ModVec::random(ring, 12, rng);
    const auto inv = invert(key, y);
    if (!inv) {
      ++failures;
      continue;
    }
    EXPECT_EQ(key.A * inv->s + inv->e, y);
  }
  // Most uniform y are far from the image.
  EXPECT_GT(failures, 1000);
  EXPECT_THROW(invert(key, ModVec(ring, 3)), std::invalid_argument);
}

TEST(GadgetDecoder, BasisIsIntegralLatticeBasis) {
  for (uint64_t q : {3, 5, 7, 11, 13, 61, 97, 65521}) {
    const ModRing ring(q);
    const GadgetDecoder dec(ring);
    const int k = dec.k();
    // |det| of the basis equals q^(k-1), the index of the gadget lattice.
    Eigen::MatrixXd B(k, k);
    for (int c = 0; c < k; ++c)
      for (int r = 0; r < k; ++r) B(r, c) = static_cast<double>(dec.basis()[c * k + r]);
    EXPECT_NEAR(std::fabs(B.determinant()), std::pow(static_cast<double>(q), k - 1),
                1e-6 * std::pow(static_cast<double>(q), k - 1));
  }
}

// Half the minimum l-inf distance of the code {g s mod q}, by enumeration.
int exact_radius_oracle(uint64_t q) {
  const ModRing ring(q);
  int64_t dmin = static_cast<int64_t>(q);
  for (uint64_t s = 1; s < q; ++s) {
    int64_t inf = 0;
    uint64_t g = s;
    for (int j = 0; j < ring.bits(); ++j, g = ring.add(g, g)) inf = std::max<int64_t>(inf, ring.abs(g));
    dmin = std::min(dmin, inf);
  }
  return static_cast<int>((dmin - 1) / 2);
}

TEST(GadgetDecoder, NearestPlaneRadius) {
  EXPECT_EQ(gadget_decode_radius(ModRing(5)), 0);
  EXPECT_EQ(gadget_decode_radius(ModRing(13)), 1);
  EXPECT_EQ(gadget_decode_radius(ModRing(61), 3), 3);
}

TEST(GadgetDecoder, ExactBlockDecoderReachesHalfMinimumDistance) {
  for (uint64_t q : {5, 13}) {
    const ModRing ring(q);
    const int k = ring.bits();
    const int r = exact_radius_oracle(q);
    EXPECT_GE(r, gadget_decode_radius(ring, 3));
    std::vector<int64_t> e(k, -r), t(k);
    std::vector<uint64_t> z(k);
    for (bool more = true; more;) {
      for (uint64_t s = 0; s < q; ++s) {
        uint64_t g = s;
        for (int j = 0; j < k; ++j, g = ring.add(g, g)) z[j] = ring.reduce(static_cast<int64_t>(g) + e[j]);
        ASSERT_EQ(decode_block_exact(ring, z.data(), t.data()), s) << "q " << q;
        EXPECT_EQ(t, e);
      }
      int j = 0;
      while (j < k && e[j] == r) e[j++] = -r;
      if (j == k) more = false;
      else ++e[j];
    }
  }
  EXPECT_EQ(exact_radius_oracle(13), 2);

  // q = 61: random residuals inside the radius.
  const ModRing ring(61);
  const int k = ring.bits(), r = exact_radius_oracle(61);
  EXPECT_GT(r, 3);
  Rng rng(12);
  std::vector<int64_t> e(k), t(k);
  std::vector<uint64_t> z(k);
  for (int trial = 0; trial < 20000; ++trial) {
    const uint64_t s = rng.uniform(61);
    uint64_t g = s;
    for (int j = 0; j < k; ++j, g = ring.add(g, g)) {
      e[j] = static_cast<int64_t>(rng.uniform(2 * r + 1)) - r;
      z[j] = ring.reduce(static_cast<int64_t>(g) + e[j]);
    }
    ASSERT_EQ(decode_block_exact(ring, z.data(), t.data()), s);
    EXPECT_EQ(t, e);
  }
}

TEST(InvertExhaustive, UniqueAndGuarded) {
  const ModRing ring(5);
  const ModMat A(ring, 2, 1, {1, 2});
  const auto inv = invert_exhaustive(A, ModVec(ring, std::vector<uint64_t>{3, 1}), 0.5);
  ASSERT_TRUE(inv.has_value());
  EXPECT_EQ(inv->s, ModVec(ring, std::vector<uint64_t>{3}));
  EXPECT_FALSE(invert_exhaustive(A, ModVec(ring, std::vector<uint64_t>{3, 2}), 0.5).has_value());
  // Two candidates within the bound: ambiguous.
  EXPECT_FALSE(invert_exhaustive(A, ModVec(ring, std::vector<uint64_t>{0, 0}), 3).has_value());
  const ModRing big(65521);
  EXPECT_THROW(invert_exhaustive(ModMat(big, 2, 2), ModVec(big, 2), 1), GuardExceeded);
}

TEST(Lossy, NarrowNoiseGivesLowRank) {
  const ModRing ring(13);
  const TruncGaussian chi(ring, 0.5);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const LossyMatrix L = lossy_sample(ring, 6, 10, 2, chi, rng);
    EXPECT_EQ(L.F, ModMat(ring, 10, 6));
    EXPECT_EQ(L.A_tilde, L.B * L.C);
    EXPECT_LE(rank_mod_q(L.A_tilde), 2u);
  }
}

TEST(Lossy, ShapesAndNoiseBound) {
  const ModRing ring(61);
  const double B_L = 2.5;
  const TruncGaussian chi(ring, B_L);
  Rng rng(4);
  const size_t n = 5, m = 9;
  for (int t = 0; t < 50; ++t) {
    const LossyMatrix L = lossy_sample(ring, n, m, 3, chi, rng);
    EXPECT_EQ(L.B.rows(), m);
    EXPECT_EQ(L.B.cols(), 3u);
    EXPECT_EQ(L.C.rows(), 3u);
    EXPECT_EQ(L.C.cols(), n);
    EXPECT_EQ(L.A_tilde, L.B * L.C + L.F);
    ModVec s(ring, n);
    for (size_t i = 0; i < n; ++i) s.set(i, rng.bit());
    EXPECT_LE(euclidean_norm(L.F * s), static_cast<double>(n) * std::sqrt(m) * B_L);
  }
  EXPECT_THROW(lossy_sample(ring, 2, 2, 0, chi, rng), std::invalid_argument);
}

TEST(Lossy, ShiftBound) {
  EXPECT_NEAR(lossy_shift_bound(4, 4, 1, 1e6), 0.014179274441714372, 1e-13);
  EXPECT_LT(lossy_shift_bound(4, 4, 1e-20, 1), 1e-8);
  double prev = 0;
  for (double bl = 0.1; bl < 5; bl += 0.1) {
    const double v = lossy_shift_bound(8, 4, bl, 100);
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_THROW(lossy_shift_bound(1, 1, 1, 0), std::invalid_argument);
}

TEST(Lossy, Deterministic) {
  const ModRing ring(13);
  const TruncGaussian chi(ring, 1.5);
  Rng a(9), b(9);
  EXPECT_EQ(lossy_sample(ring, 4, 6, 1, chi, a).A_tilde, lossy_sample(ring, 4, 6, 1, chi, b).A_tilde);
}

TEST(Json, KeyRoundTripAndValidation) {
  const ModRing ring(13);
  Rng rng(6);
  const TrapdoorKey key = gen_trap(ring, 2, 12, rng);
  const auto j = to_json(key);
  const TrapdoorKey back = trapdoor_from_json(j);
  EXPECT_EQ(back.A, key.A);
  EXPECT_EQ(back.R, key.R);
  EXPECT_EQ(back.mbar, key.mbar);
  auto bad = j;
  bad["R"]["data"][0] = 2;
  EXPECT_THROW(trapdoor_from_json(bad), std::invalid_argument);
  bad = j;
  bad["A"]["data"][11] = (bad["A"]["data"][11].get<int>() + 1) % 13;
  EXPECT_THROW(trapdoor_from_json(bad), std::invalid_argument);
}

}  // namespace
}  // namespace ntcfrand
