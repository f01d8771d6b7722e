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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ntcfrand/errors.h"

namespace ntcfrand {

namespace {

double weight(int64_t x, double B) {
  const double d = static_cast<double>(x);
  return std::exp(-std::numbers::pi * d * d / (B * B));
}

constexpr int64_t kTableRadius = 1 << 16;

}  // namespace

TruncGaussian::TruncGaussian(const ModRing& ring, double B)
    : ring_(ring), B_(B), tau_(0), radius_(0), lo_(0) {
  if (!(B > 0)) throw std::invalid_argument("width must be positive");
  const int64_t half = static_cast<int64_t>(ring.q() / 2);
  radius_ = std::min<int64_t>(static_cast<int64_t>(std::floor(B)), half);
  // For even q the value q/2 has one representative; count it once.
  lo_ = (ring.q() % 2 == 0 && radius_ == half) ? -half + 1 : -radius_;
  const bool table = radius_ <= kTableRadius;
  double acc = 0;
  for (int64_t x = -radius_; x <= radius_; ++x) {
    if (x >= lo_) acc += weight(x, B);
    if (table) cdf_.push_back(acc);
  }
  tau_ = acc;
}

double TruncGaussian::density(uint64_t x) const {
  const int64_t c = ring_.centered(x % ring_.q());
  if (std::llabs(c) > radius_) return 0.0;
  return weight(c, B_) / tau_;
}

double TruncGaussian::density_vec(const ModVec& v) const {
  double p = 1.0;
  for (size_t i = 0; i < v.size() && p > 0; ++i) p *= density(v[i]);
  return p;
}

uint64_t TruncGaussian::sample(Rng& rng) const {
  if (cdf_.empty()) {
    // Wide support: rejection from the uniform proposal on the support.
    const uint64_t span = static_cast<uint64_t>(radius_ - lo_ + 1);
    for (;;) {
      const int64_t x = static_cast<int64_t>(rng.uniform(span)) + lo_;
      if (rng.uniform01() < weight(x, B_)) return ring_.reduce(x);
    }
  }
  const double u = rng.uniform01() * tau_;
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  const int64_t x = -radius_ + static_cast<int64_t>(it - cdf_.begin());
  return ring_.reduce(x);
}

ModVec TruncGaussian::sample_vec(size_t m, Rng& rng) const {
  ModVec out(ring_, m);
  for (size_t i = 0; i < m; ++i) out.set(i, sample(rng));
  return out;
}

double hellinger_sq(const TruncGaussian& dist, const ModVec& e) {
  const ModRing& ring = dist.ring();
  const uint64_t q = ring.q();
  const size_t m = e.size();
  double total = 1;
  for (size_t i = 0; i < m; ++i) {
    total *= static_cast<double>(q);
    if (total > static_cast<double>(kEnumerationGuard))
      throw GuardExceeded("hellinger_sq: q^m exceeds " +
                          std::to_string(kEnumerationGuard));
  }
  ModVec x(ring, m);
  double bc = 0;
  for (;;) {
    const double p = dist.density_vec(x);
    if (p > 0) bc += std::sqrt(p * dist.density_vec(x - e));
    size_t i = 0;
    while (i < m && x[i] == q - 1) x.set(i++, 0);
    if (i == m) break;
    x.set(i, x[i] + 1);
  }
  return std::clamp(1.0 - bc, 0.0, 1.0);
}

double hellinger_shift_bound(size_t m, double e_norm, double B) {
  return 1.0 - std::exp(-2.0 * std::numbers::pi * std::sqrt(static_cast<double>(m)) *
                        e_norm / B);
}

double tv_distance(const std::vector<double>& f1, const std::vector<double>& f2) {
  if (f1.size() != f2.size()) throw std::invalid_argument("tv_distance: domain mismatch");
  double acc = 0;
  for (size_t i = 0; i < f1.size(); ++i) acc += std::fabs(f1[i] - f2[i]);
  return 0.5 * acc;
}

}  // namespace ntcfrand
