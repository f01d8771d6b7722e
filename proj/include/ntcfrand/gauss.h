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
#include <vector>

#include "ntcfrand/modq.h"
#include "ntcfrand/rng.h"

namespace ntcfrand {

// Discrete Gaussian over Z_q truncated to centered magnitude <= B:
// D(x) = exp(-pi |x|^2 / B^2) / tau on the support, 0 elsewhere.
class TruncGaussian {
 public:
  TruncGaussian(const ModRing& ring, double B);

  const ModRing& ring() const { return ring_; }
  double B() const { return B_; }
  double tau() const { return tau_; }
  // Largest centered magnitude in the support.
  int64_t radius() const { return radius_; }

  double density(uint64_t x) const;
  double density_vec(const ModVec& v) const;

  uint64_t sample(Rng& rng) const;
  ModVec sample_vec(size_t m, Rng& rng) const;

 private:
  ModRing ring_;
  double B_;
  double tau_;
  int64_t radius_;
  int64_t lo_;
  // Cumulative weights over centered values -radius..radius.
  std::vector<double> cdf_;
};

// 1 - sum_x sqrt(D(x) D(x - e)) over Z_q^m by explicit enumeration.
// Throws GuardExceeded when q^m > 1e7.
double hellinger_sq(const TruncGaussian& dist, const ModVec& e);

// 1 - exp(-2 pi sqrt(m) |e| / B).
double hellinger_shift_bound(size_t m, double e_norm, double B);

// Throws std::invalid_argument when the domains differ in size.
double tv_distance(const std::vector<double>& f1, const std::vector<double>& f2);

constexpr uint64_t kEnumerationGuard = 10'000'000;

}  // namespace ntcfrand
