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

#include <cmath>
#include <stdexcept>

#include "ntcfrand/errors.h"

namespace ntcfrand {

namespace {

size_t power(uint64_t q, size_t e) {
  double guard = 1;
  size_t out = 1;
  for (size_t i = 0; i < e; ++i) {
    guard *= static_cast<double>(q);
    if (guard > static_cast<double>(kStateGuard)) throw GuardExceeded("state dimension exceeds 1e6");
    out *= q;
  }
  return out;
}

size_t sample_weights(const std::vector<double>& w, Rng& rng) {
  double total = 0;
  for (double p : w) total += p;
  const double u = rng.uniform01() * total;
  double acc = 0;
  size_t last = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0) continue;
    acc += w[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

size_t born_sample(const std::vector<Amplitude>& amp, Rng& rng) {
  std::vector<double> w(amp.size());
  for (size_t i = 0; i < amp.size(); ++i) w[i] = std::norm(amp[i]);
  return sample_weights(w, rng);
}

double l2(const std::vector<Amplitude>& amp) {
  double acc = 0;
  for (const auto& a : amp) acc += std::norm(a);
  return std::sqrt(acc);
}

}  // namespace

double QState::norm() const { return l2(amp); }
size_t QState::x_count() const { return power(ring.q(), n); }
size_t QState::y_count() const { return power(ring.q(), m); }
double Collapsed::norm() const { return l2(amp); }

size_t digits_index(const ModVec& v) {
  size_t idx = 0, place = 1;
  for (size_t i = 0; i < v.size(); ++i) {
    idx += v[i] * place;
    place *= v.ring().q();
  }
  return idx;
}

ModVec index_digits(const ModRing& ring, size_t len, size_t idx) {
  ModVec v(ring, len);
  for (size_t i = 0; i < len; ++i) {
    v.set(i, idx % ring.q());
    idx /= ring.q();
  }
  return v;
}

QState prepare_samp(const NtcfPublicKey& pk, const Profile& profile) {
  const ModRing& ring = pk.A.ring();
  const size_t n = pk.A.cols(), m = pk.A.rows();
  const size_t nx = power(ring.q(), n), ny = power(ring.q(), m);
  if (2 * nx * ny > kStateGuard) throw GuardExceeded("state dimension exceeds 1e6");
  QState st{ring, n, m, std::vector<Amplitude>(2 * nx * ny)};
  const TruncGaussian dp(ring, profile.B_P);
  const double scale = 1.0 / (2.0 * static_cast<double>(nx));
  for (int b = 0; b < 2; ++b)
    for (size_t xi = 0; xi < nx; ++xi) {
      const ModVec x = index_digits(ring, n, xi);
      ModVec center = pk.A * x;
      if (b) center = center + pk.u;
      for (size_t yi = 0; yi < ny; ++yi) {
        const ModVec y = index_digits(ring, m, yi);
        const double p = dp.density_vec(y - center);
        if (p > 0) st.amp[(b * nx + xi) * ny + yi] = std::sqrt(p * scale);
      }
    }
  return st;
}

double y_probability(const QState& st, const ModVec& y) {
  const size_t nx = st.x_count(), ny = st.y_count(), yi = digits_index(y);
  double p = 0;
  for (size_t bx = 0; bx < 2 * nx; ++bx) p += std::norm(st.amp[bx * ny + yi]);
  return p;
}

Collapsed collapse(const QState& st, const ModVec& y) {
  const size_t nx = st.x_count(), ny = st.y_count(), yi = digits_index(y);
  Collapsed c{y, st.ring, st.n, std::vector<Amplitude>(2 * nx)};
  for (size_t bx = 0; bx < 2 * nx; ++bx) c.amp[bx] = st.amp[bx * ny + yi];
  const double nrm = c.norm();
  if (nrm == 0) throw std::invalid_argument("collapse: y has probability 0");
  for (auto& a : c.amp) a /= nrm;
  return c;
}

Collapsed measure_y(const QState& st, Rng& rng) {
  const size_t nx = st.x_count(), ny = st.y_count();
  std::vector<double> marginal(ny, 0.0);
  for (size_t bx = 0; bx < 2 * nx; ++bx)
    for (size_t yi = 0; yi < ny; ++yi) marginal[yi] += std::norm(st.amp[bx * ny + yi]);
  const size_t yi = sample_weights(marginal, rng);
  return collapse(st, index_digits(st.ring, st.m, yi));
}

std::pair<int, ModVec> measure_preimage(const Collapsed& c, Rng& rng) {
  const size_t nx = c.amp.size() / 2;
  const size_t idx = born_sample(c.amp, rng);
  return {static_cast<int>(idx / nx), index_digits(c.ring, c.n, idx % nx)};
}

std::vector<Amplitude> equation_amplitudes(const Collapsed& c) {
  const size_t k = static_cast<size_t>(c.ring.bits());
  const size_t qubits = c.n * k + 1;
  if (qubits > 20) throw GuardExceeded("equation register exceeds 20 qubits");
  const size_t dim = size_t{1} << qubits, nx = c.amp.size() / 2;
  std::vector<Amplitude> v(dim);
  for (size_t b = 0; b < 2; ++b)
    for (size_t xi = 0; xi < nx; ++xi) {
      const Amplitude a = c.amp[b * nx + xi];
      if (a == Amplitude(0)) continue;
      const BitString bits = binary_map_J(index_digits(c.ring, c.n, xi));
      size_t idx = b;
      for (size_t j = 0; j < bits.size(); ++j) idx |= static_cast<size_t>(bits[j]) << (j + 1);
      v[idx] += a;
    }
  // Walsh-Hadamard transform, normalized per qubit.
  const double r = 1.0 / std::sqrt(2.0);
  for (size_t h = 1; h < dim; h <<= 1)
    for (size_t i = 0; i < dim; i += 2 * h)
      for (size_t j = i; j < i + h; ++j) {
        const Amplitude a = v[j], b = v[j + h];
        v[j] = (a + b) * r;
        v[j + h] = (a - b) * r;
      }
  return v;
}

std::pair<int, BitString> measure_equation(const Collapsed& c, Rng& rng) {
  const auto v = equation_amplitudes(c);
  const size_t idx = born_sample(v, rng);
  const size_t w = c.n * static_cast<size_t>(c.ring.bits());
  BitString d(w);
  for (size_t j = 0; j < w; ++j) d[j] = static_cast<uint8_t>((idx >> (j + 1)) & 1);
  return {static_cast<int>(idx & 1), d};
}

}  // namespace ntcfrand
