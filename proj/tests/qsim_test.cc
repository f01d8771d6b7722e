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


#include "ntcfrand/qsim.h"

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>

#include "ntcfrand/errors.h"

namespace ntcfrand {
namespace {

double chi_square_p(const std::vector<double>& observed, const std::vector<double>& expected) {
  double stat = 0;
  int cells = 0;
  for (size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] == 0) continue;
    stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
    ++cells;
  }
  if (cells < 2) return 1.0;
  boost::math::chi_squared dist(cells - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

NtcfKeyPair key_for(const char* name, uint64_t seed) {
  Rng rng(seed);
  return ntcf_gen(profile_by_name(name), rng);
}

size_t pow_q(uint64_t q, size_t e) {
  size_t r = 1;
  for (size_t i = 0; i < e; ++i) r *= q;
  return r;
}

BitString claw_xor(const ModVec& x0, const ModVec& x1) {
  return xor_bits(binary_map_J(x0), binary_map_J(x1));
}

TEST(QsimDigits, RoundTrip) {
  const ModRing ring(5);
  for (size_t idx = 0; idx < 125; ++idx)
    EXPECT_EQ(digits_index(index_digits(ring, 3, idx)), idx);
  EXPECT_EQ(digits_index(ModVec(ring, std::vector<uint64_t>{2, 1})), 2u + 5u);
}

TEST(QsimPrepare, BornMatchesDensity) {
  for (const char* name : {"micro", "micro3"}) {
    const NtcfKeyPair key = key_for(name, 1);
    const Profile& p = key.profile;
    const QState st = prepare_samp(key.pub, p);
    const size_t nx = pow_q(p.q, p.n), ny = pow_q(p.q, p.m);
    ASSERT_EQ(st.amp.size(), 2 * nx * ny) << name;
    EXPECT_NEAR(st.norm(), 1.0, 1e-10);
    for (int b = 0; b < 2; ++b)
      for (size_t xi = 0; xi < nx; ++xi)
        for (size_t yi = 0; yi < ny; ++yi) {
          const ModVec x = index_digits(st.ring, p.n, xi), y = index_digits(st.ring, p.m, yi);
          const double want = density_f_prime(key.pub, p, b, x, y) / (2.0 * nx);
          EXPECT_NEAR(std::norm(st.amp[(b * nx + xi) * ny + yi]), want, 1e-12);
        }
  }
}

TEST(QsimPrepare, YMarginal) {
  const NtcfKeyPair key = key_for("micro", 2);
  const Profile& p = key.profile;
  const QState st = prepare_samp(key.pub, p);
  const size_t nx = st.x_count();
  double total = 0;
  for (size_t yi = 0; yi < st.y_count(); ++yi) {
    const ModVec y = index_digits(st.ring, p.m, yi);
    double want = 0;
    for (int b = 0; b < 2; ++b)
      for (size_t xi = 0; xi < nx; ++xi)
        want += density_f_prime(key.pub, p, b, index_digits(st.ring, p.n, xi), y) / (2.0 * nx);
    EXPECT_NEAR(y_probability(st, y), want, 1e-12);
    total += want;
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(QsimPrepare, DimensionGuard) {
  const NtcfKeyPair key = key_for("desk-small", 3);
  EXPECT_THROW(prepare_samp(key.pub, key.profile), GuardExceeded);
}

// Noise-free micro keys: every reachable y collapses onto exactly the claw
// (0, x0), (1, x0 - s) with equal weights.
TEST(QsimCollapse, ClawStructureExhaustive) {
  for (const char* name : {"micro", "micro3"}) {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
      const NtcfKeyPair key = key_for(name, seed);
      const Profile& p = key.profile;
      ASSERT_EQ(inf_norm(key.e), 0u);
      const QState st = prepare_samp(key.pub, p);
      const size_t nx = st.x_count();
      int reachable = 0;
      for (size_t yi = 0; yi < st.y_count(); ++yi) {
        const ModVec y = index_digits(st.ring, p.m, yi);
        if (y_probability(st, y) == 0) {
          EXPECT_THROW(collapse(st, y), std::invalid_argument);
          continue;
        }
        ++reachable;
        const Collapsed c = collapse(st, y);
        EXPECT_NEAR(c.norm(), 1.0, 1e-10);
        const auto x0 = ntcf_inv(key, 0, y);
        ASSERT_TRUE(x0.has_value());
        const ModVec x1 = *x0 - key.s;
        for (int b = 0; b < 2; ++b)
          for (size_t xi = 0; xi < nx; ++xi) {
            const bool on_claw = xi == digits_index(b == 0 ? *x0 : x1);
            const double w = std::norm(c.amp[b * nx + xi]);
            if (on_claw) EXPECT_NEAR(w, 0.5, 1e-10);
            else EXPECT_EQ(w, 0.0);
          }
      }
      EXPECT_EQ(reachable, static_cast<int>(nx)) << name;
    }
  }
}

TEST(QsimMeasureY, BornFrequencies) {
  const NtcfKeyPair key = key_for("micro", 4);
  const QState st = prepare_samp(key.pub, key.profile);
  Rng rng(40);
  const int shots = 10000;
  std::vector<double> observed(st.y_count(), 0), expected(st.y_count());
  for (int t = 0; t < shots; ++t) {
    const Collapsed c = measure_y(st, rng);
    ASSERT_GT(y_probability(st, c.y), 0.0);
    observed[digits_index(c.y)] += 1;
  }
  for (size_t yi = 0; yi < st.y_count(); ++yi)
    expected[yi] = shots * y_probability(st, index_digits(st.ring, key.profile.m, yi));
  EXPECT_GT(chi_square_p(observed, expected), 0.001);
}

TEST(QsimPreimage, UniformBAndConsistent) {
  for (const char* name : {"micro", "micro3"}) {
    const NtcfKeyPair key = key_for(name, 5);
    const QState st = prepare_samp(key.pub, key.profile);
    Rng rng(50);
    const int shots = 10000;
    std::vector<double> counts(2, 0);
    for (int t = 0; t < shots; ++t) {
      const Collapsed c = measure_y(st, rng);
      const auto [b, x] = measure_preimage(c, rng);
      counts[b] += 1;
      const auto inv = ntcf_inv(key, b, c.y);
      ASSERT_TRUE(inv.has_value());
      EXPECT_EQ(x, *inv);
      EXPECT_EQ(ntcf_chk(key.pub, key.profile, b, x, c.y), 1);
    }
    EXPECT_GT(chi_square_p(counts, {shots / 2.0, shots / 2.0}), 0.001) << name;
  }
}

TEST(QsimPreimage, SingleBranchDeterministic) {
  const ModRing ring(5);
  Collapsed c{ModVec(ring, 2), ring, 1, std::vector<Amplitude>(10, 0.0)};
  c.amp[5 + 3] = Amplitude(0, 1);
  Rng rng(51);
  for (int t = 0; t < 100; ++t) {
    const auto [b, x] = measure_preimage(c, rng);
    EXPECT_EQ(b, 1);
    EXPECT_EQ(x[0], 3u);
  }
}

TEST(QsimEquation, ExactCorrelationAndUniformD) {
  for (const char* name : {"micro", "micro3"}) {
    const NtcfKeyPair key = key_for(name, 6);
    const QState st = prepare_samp(key.pub, key.profile);
    const size_t w = key.profile.n * st.ring.bits();
    Rng rng(60);
    const int shots = 10000;
    int agree = 0;
    std::vector<double> counts(size_t{1} << w, 0);
    for (int t = 0; t < shots; ++t) {
      const Collapsed c = measure_y(st, rng);
      const auto [u, d] = measure_equation(c, rng);
      ASSERT_EQ(d.size(), w);
      const ModVec x0 = *ntcf_inv(key, 0, c.y);
      if (u == dot_bits(d, claw_xor(x0, x0 - key.s))) ++agree;
      size_t di = 0;
      for (size_t i = 0; i < w; ++i) di |= static_cast<size_t>(d[i]) << i;
      counts[di] += 1;
    }
    EXPECT_EQ(agree, shots) << name;
    EXPECT_GT(chi_square_p(counts, std::vector<double>(counts.size(), shots / double(counts.size()))),
              0.001)
        << name;
  }
}

TEST(QsimEquation, Unitary) {
  const NtcfKeyPair key = key_for("micro3", 7);
  const QState st = prepare_samp(key.pub, key.profile);
  Rng rng(70);
  for (int t = 0; t < 50; ++t) {
    const Collapsed c = measure_y(st, rng);
    double total = 0;
    for (const Amplitude& a : equation_amplitudes(c)) total += std::norm(a);
    EXPECT_NEAR(total, c.norm(), 1e-10);
  }
}

// One branch |b, J(x)>: H^{w+1} gives amplitude (-1)^{u b + d . J(x)} / sqrt(2^{w+1}).
TEST(QsimEquation, SingleBranchHadamardAlgebra) {
  const ModRing ring(5);
  for (int b = 0; b < 2; ++b)
    for (uint64_t xv = 0; xv < 5; ++xv) {
      Collapsed c{ModVec(ring, 2), ring, 1, std::vector<Amplitude>(10, 0.0)};
      c.amp[b * 5 + xv] = 1.0;
      const BitString jx = binary_map_J(ModVec(ring, std::vector<uint64_t>{xv}));
      const auto amps = equation_amplitudes(c);
      ASSERT_EQ(amps.size(), 16u);
      const double mag = 1 / std::sqrt(16.0);
      for (size_t idx = 0; idx < 16; ++idx) {
        const int u = idx & 1;
        BitString d(3);
        for (int i = 0; i < 3; ++i) d[i] = (idx >> (1 + i)) & 1;
        const int sign = (u * b + dot_bits(d, jx)) & 1;
        EXPECT_NEAR(amps[idx].real(), sign ? -mag : mag, 1e-12);
        EXPECT_NEAR(amps[idx].imag(), 0.0, 1e-12);
      }
    }
}

// The classical SAMP draw used by the ideal prover matches the simulated
// (y, b) statistics.
TEST(QsimCrossCheck, ClassicalSamplerMatches) {
  const NtcfKeyPair key = key_for("micro", 8);
  const Profile& p = key.profile;
  const QState st = prepare_samp(key.pub, p);
  const size_t nx = st.x_count(), ny = st.y_count();
  std::vector<double> exact(2 * ny, 0);
  for (int b = 0; b < 2; ++b)
    for (size_t xi = 0; xi < nx; ++xi)
      for (size_t yi = 0; yi < ny; ++yi) exact[b * ny + yi] += std::norm(st.amp[(b * nx + xi) * ny + yi]);
  Rng rng(80);
  const int samples = 10000;
  std::vector<double> empirical(2 * ny, 0);
  for (int t = 0; t < samples; ++t) {
    const SampleDraw d = ntcf_samp(key.pub, p, rng);
    empirical[d.b * ny + digits_index(d.y)] += 1.0 / samples;
  }
  double tv = 0;
  for (size_t i = 0; i < exact.size(); ++i) tv += std::fabs(exact[i] - empirical[i]);
  EXPECT_LT(0.5 * tv, 0.02);
}

// Shifted claw (e != 0) at q=13: the equation relation is no longer exact.
// The violation probability is computed exactly and logged; only the
// Hellinger-derived bound is asserted.
TEST(QsimEquation, ShiftedClawViolationBounded) {
  Profile p = profile_by_name("micro");
  p.q = 13;
  p.B_P = 2.0;
  p.B_V = 1.0;
  p.w = 4;
  const ModRing ring(13);
  const ModMat A(ring, 2, 1, {1, 5});
  const ModVec s(ring, std::vector<uint64_t>{1});
  const ModVec e(ring, std::vector<uint64_t>{1, 0});
  const NtcfKeyPair key = ntcf_from_parts(p, A, s, e);
  const QState st = prepare_samp(key.pub, p);
  const size_t nx = st.x_count();
  double violation = 0;
  for (size_t yi = 0; yi < st.y_count(); ++yi) {
    const ModVec y = index_digits(ring, 2, yi);
    const double py = y_probability(st, y);
    if (py == 0) continue;
    const Collapsed c = collapse(st, y);
    // Heaviest x on the b = 0 branch anchors the claw.
    size_t best = 0;
    for (size_t xi = 1; xi < nx; ++xi)
      if (std::norm(c.amp[xi]) > std::norm(c.amp[best])) best = xi;
    const ModVec x0 = index_digits(ring, 1, best);
    const BitString diff = claw_xor(x0, x0 - s);
    const auto amps = equation_amplitudes(c);
    for (size_t idx = 0; idx < amps.size(); ++idx) {
      BitString d(diff.size());
      for (size_t i = 0; i < d.size(); ++i) d[i] = (idx >> (1 + i)) & 1;
      if (static_cast<int>(idx & 1) != dot_bits(d, diff)) violation += py * std::norm(amps[idx]);
    }
  }
  RecordProperty("violation", std::to_string(violation));
  EXPECT_GT(violation, 0.0);
  EXPECT_LE(violation, 1 - std::exp(-2 * M_PI * p.m * p.B_V / p.B_P));
}

}  // namespace
}  // namespace ntcfrand
