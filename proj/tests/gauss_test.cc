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

#include "ntcfrand/gauss.h"

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>

#include "ntcfrand/errors.h"

namespace ntcfrand {
namespace {

constexpr double kPi = std::numbers::pi;

// Independent evaluation of the truncated density over centered values.
double oracle_density(uint64_t q, double B, int64_t c) {
  double tau = 0;
  for (int64_t x = -static_cast<int64_t>(q); x <= static_cast<int64_t>(q); ++x) {
    if (2 * x <= -static_cast<int64_t>(q) || 2 * x > static_cast<int64_t>(q)) continue;
    if (std::abs(static_cast<double>(x)) <= B) tau += std::exp(-kPi * x * x / (B * B));
  }
  return std::abs(static_cast<double>(c)) <= B ? std::exp(-kPi * c * c / (B * B)) / tau : 0;
}

double chi_square_p(const std::vector<double>& observed, const std::vector<double>& expected) {
  double stat = 0;
  int cells = 0;
  for (size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0) continue;
    stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
    ++cells;
  }
  if (cells < 2) return 1;
  boost::math::chi_squared dist(cells - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

TEST(Density, Examples) {
  const TruncGaussian d(ModRing(7), 2);
  const double tau = 1 + 2 * std::exp(-kPi / 4) + 2 * std::exp(-kPi);
  EXPECT_NEAR(d.density(0), 1 / tau, 1e-15);
  EXPECT_NEAR(d.density(0), 0.5004243368031928, 1e-15);
  EXPECT_EQ(d.density(3), 0.0);
  EXPECT_EQ(d.density(4), 0.0);
  EXPECT_NEAR(d.density(6), d.density(1), 1e-15);
}

TEST(Density, MatchesOracle) {
  for (uint64_t q : {5, 7, 13, 61}) {
    for (double B : {0.5, 1.0, 2.0, 3.7, static_cast<double>(q) / 3}) {
      const TruncGaussian d(ModRing(q), B);
      for (uint64_t x = 0; x < q; ++x)
        EXPECT_NEAR(d.density(x), oracle_density(q, B, ModRing(q).centered(x)), 1e-14);
    }
  }
}

TEST(Density, NormalizationSymmetryMonotone) {
  for (uint64_t q = 2; q <= 61; ++q) {
    const ModRing ring(q);
    for (double B = 0.5; B <= static_cast<double>(q); B += 0.75) {
      const TruncGaussian d(ring, B);
      double sum = 0;
      for (uint64_t x = 0; x < q; ++x) sum += d.density(x);
      EXPECT_NEAR(sum, 1.0, 1e-12) << "q=" << q << " B=" << B;
      for (uint64_t x = 1; x < q; ++x) {
        if (2 * x == q) continue;
        EXPECT_NEAR(d.density(x), d.density(q - x), 1e-15);
      }
      for (uint64_t x = 1; 2 * x < q && static_cast<double>(x) <= B; ++x)
        EXPECT_LT(d.density(x), d.density(x - 1));
    }
  }
}

TEST(Density, VectorIsProduct) {
  const ModRing ring(13);
  const TruncGaussian d(ring, 2.5);
  EXPECT_NEAR(d.density_vec(ModVec(ring, 2)), d.density(0) * d.density(0), 1e-15);
  EXPECT_EQ(d.density_vec(ModVec(ring, std::vector<uint64_t>{0, 3})), 0.0);
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const ModVec v = ModVec::random(ring, 3, rng);
    EXPECT_NEAR(d.density_vec(v), d.density(v[0]) * d.density(v[1]) * d.density(v[2]), 1e-15);
  }
}

TEST(Sampler, NarrowIsPointMass) {
  const TruncGaussian d(ModRing(61), 0.9);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(d.sample(rng), 0u);
}

TEST(Sampler, Deterministic) {
  const TruncGaussian d(ModRing(7), 2);
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(d.sample(a), d.sample(b));
}

TEST(Sampler, ChiSquareAndMean) {
  for (auto [q, B] : std::vector<std::pair<uint64_t, double>>{{7, 2}, {13, 3.6}, {61, 20}, {4, 2}}) {
    const ModRing ring(q);
    const TruncGaussian d(ring, B);
    Rng rng(q * 1000 + 7);
    const int draws = 1'000'000;
    std::vector<double> obs(q, 0), exp(q, 0);
    double mean = 0;
    for (int i = 0; i < draws; ++i) {
      const uint64_t x = d.sample(rng);
      obs[x] += 1;
      mean += static_cast<double>(ring.centered(x));
    }
    mean /= draws;
    double var = 0;
    for (uint64_t x = 0; x < q; ++x) {
      exp[x] = d.density(x) * draws;
      var += d.density(x) * std::pow(static_cast<double>(ring.centered(x)), 2);
    }
    EXPECT_GT(chi_square_p(obs, exp), 0.001) << "q=" << q;
    // Even q puts q/2 on the positive side only, shifting the mean slightly.
    double true_mean = 0;
    for (uint64_t x = 0; x < q; ++x) true_mean += d.density(x) * static_cast<double>(ring.centered(x));
    EXPECT_NEAR(mean, true_mean, 3 * std::sqrt(var / draws) + 1e-12) << "q=" << q;
  }
}

TEST(Sampler, RejectionPathForWideDistributions) {
  const ModRing ring(1'000'003);
  const TruncGaussian d(ring, 300'000);
  EXPECT_GT(d.radius(), 65536);
  Rng rng(9);
  double mean = 0, sq = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    const double c = static_cast<double>(ring.centered(d.sample(rng)));
    EXPECT_LE(std::abs(c), 300'000);
    mean += c;
    sq += c * c;
  }
  mean /= draws;
  // Variance of the continuous Gaussian with parameter B is B^2 / (2 pi).
  const double sd = 300'000 / std::sqrt(2 * kPi);
  EXPECT_NEAR(mean, 0, 4 * sd / std::sqrt(draws));
  EXPECT_NEAR(std::sqrt(sq / draws), sd, 0.05 * sd);
}

TEST(Hellinger, Examples) {
  const ModRing ring(7);
  const TruncGaussian d(ring, 2);
  EXPECT_NEAR(hellinger_sq(d, ModVec(ring, 1)), 0.0, 1e-15);
  const double h = hellinger_sq(d, ModVec(ring, std::vector<uint64_t>{1}));
  EXPECT_NEAR(h, 0.1837089934502345, 1e-13);
  EXPECT_GT(h, 0);
  EXPECT_LT(h, 1);
  EXPECT_LE(h, hellinger_shift_bound(1, 1, 2));
  EXPECT_NEAR(hellinger_shift_bound(1, 1, 2), 1 - std::exp(-kPi), 1e-15);
}

TEST(Hellinger, GuardAtEnumerationLimit) {
  const ModRing ring(61);
  const TruncGaussian d(ring, 3);
  EXPECT_THROW(hellinger_sq(d, ModVec(ring, 4)), GuardExceeded);
  EXPECT_NO_THROW(hellinger_sq(d, ModVec(ring, 3)));
}

// Within the lemma's regime: B >= 1 and every shift coordinate inside the
// support, so the shifted supports overlap.
TEST(Hellinger, LemmaBoundAndTvRelation) {
  Rng rng(2024);
  int checked = 0;
  while (checked < 200) {
    const uint64_t q = std::vector<uint64_t>{5, 7, 11, 13}[rng.uniform(4)];
    const size_t m = 1 + rng.uniform(3);
    const double B = 1 + rng.uniform01() * (static_cast<double>(q) / 2 - 1);
    const ModRing ring(q);
    const TruncGaussian d(ring, B);
    const int64_t r = static_cast<int64_t>(std::floor(B));
    std::vector<int64_t> e(m);
    for (auto& c : e) c = static_cast<int64_t>(rng.uniform(2 * r + 1)) - r;
    const ModVec ev = ModVec::from_signed(ring, e);
    const double h = hellinger_sq(d, ev);
    EXPECT_LE(h, hellinger_shift_bound(m, euclidean_norm(ev), B) + 1e-12)
        << "q=" << q << " m=" << m << " B=" << B;

    // TV by direct enumeration over Z_q^m.
    size_t total = 1;
    for (size_t i = 0; i < m; ++i) total *= q;
    std::vector<double> f1(total), f2(total);
    for (size_t idx = 0; idx < total; ++idx) {
      ModVec x(ring, m);
      size_t t = idx;
      for (size_t i = 0; i < m; ++i, t /= q) x.set(i, t % q);
      f1[idx] = d.density_vec(x);
      f2[idx] = d.density_vec(x - ev);
    }
    EXPECT_LE(tv_distance(f1, f2), std::sqrt(2 * h) + 1e-12);
    ++checked;
  }
}

// Outside the regime the truncation makes supports disjoint and H^2 = 1,
// which exceeds the stated bound.
TEST(Hellinger, DisjointSupportsExceedBound) {
  const ModRing ring(13);
  const TruncGaussian d(ring, 0.9);
  const ModVec e(ring, std::vector<uint64_t>{1});
  EXPECT_NEAR(hellinger_sq(d, e), 1.0, 1e-15);
  EXPECT_GT(hellinger_sq(d, e), hellinger_shift_bound(1, 1, 0.9));
}

TEST(TvDistance, Basics) {
  EXPECT_EQ(tv_distance({0.5, 0.5}, {0.5, 0.5}), 0.0);
  EXPECT_EQ(tv_distance({1, 0}, {0, 1}), 1.0);
  EXPECT_THROW(tv_distance({1}, {0.5, 0.5}), std::invalid_argument);
}

}  // namespace
}  // namespace ntcfrand
