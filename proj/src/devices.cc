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

#include "ntcfrand/devices.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ntcfrand {

namespace {

using Eigen::SelfAdjointEigenSolver;

CMat identity(int d) { return CMat::Identity(d, d); }

double op_norm(const CMat& A) {
  Eigen::JacobiSVD<CMat> svd(A);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double gaussian(Rng& rng) {
  // Box-Muller on the deterministic stream.
  double u1 = rng.uniform01();
  while (u1 <= 0) u1 = rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
}

CMat gaussian_matrix(int rows, int cols, Rng& rng) {
  CMat G(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) G(i, j) = {gaussian(rng), gaussian(rng)};
  return G;
}

// Orthonormal basis of the eigenvalue-1 space of a projector.
CMat range_basis(const CMat& Q) {
  SelfAdjointEigenSolver<CMat> es(Q);
  std::vector<int> cols;
  for (int i = 0; i < Q.rows(); ++i)
    if (es.eigenvalues()(i) > 0.5) cols.push_back(i);
  CMat B(Q.rows(), static_cast<int>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) B.col(static_cast<int>(j)) = es.eigenvectors().col(cols[j]);
  return B;
}

nlohmann::json mat_json(const CMat& A) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < A.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < A.cols(); ++j) row.push_back({A(i, j).real(), A(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

CMat mat_from(const nlohmann::json& j, int dim) {
  CMat A(dim, dim);
  if (static_cast<int>(j.size()) != dim) throw std::invalid_argument("device: bad matrix shape");
  for (int i = 0; i < dim; ++i) {
    if (static_cast<int>(j[i].size()) != dim) throw std::invalid_argument("device: bad matrix shape");
    for (int k = 0; k < dim; ++k) A(i, k) = {j[i][k][0].get<double>(), j[i][k][1].get<double>()};
  }
  return A;
}

}  // namespace

CMat SimplifiedDevice::Pi2(size_t y) const { return identity(dim) - Pi0[y] - Pi1[y]; }
CMat SimplifiedDevice::M1(size_t y) const { return identity(dim) - M0[y]; }
CMat SimplifiedDevice::K1(size_t y) const { return identity(dim) - K0[y]; }

bool is_projector(const CMat& P, double tol) {
  return P.rows() == P.cols() && (P * P - P).norm() <= tol && (P - P.adjoint()).norm() <= tol;
}

void SimplifiedDevice::validate(double tol) const {
  if (dim <= 0 || dim > kMaxDeviceDim) throw std::invalid_argument("device: dimension out of range");
  if (phi.empty() || Pi0.size() != phi.size() || Pi1.size() != phi.size() ||
      M0.size() != phi.size() || K0.size() != phi.size())
    throw std::invalid_argument("device: per-y operator lists differ in length");
  double trace = 0;
  for (size_t y = 0; y < ys(); ++y) {
    for (const CMat* P : {&Pi0[y], &Pi1[y], &M0[y], &K0[y]})
      if (P->rows() != dim || !is_projector(*P, tol))
        throw std::invalid_argument("device: operator is not a projector");
    if (!is_projector(Pi2(y), tol)) throw std::invalid_argument("device: Pi0 + Pi1 is not a projector");
    if ((K0[y] * M0[y] - M0[y] * K0[y]).norm() > tol ||
        (K0[y] * Pi0[y] - Pi0[y] * K0[y]).norm() > tol ||
        (K0[y] * Pi1[y] - Pi1[y] * K0[y]).norm() > tol)
      throw std::invalid_argument("device: K does not commute with M and Pi");
    if ((phi[y] - phi[y].adjoint()).norm() > tol) throw std::invalid_argument("device: phi not Hermitian");
    SelfAdjointEigenSolver<CMat> es(phi[y]);
    if (es.eigenvalues().minCoeff() < -tol) throw std::invalid_argument("device: phi not PSD");
    trace += phi[y].trace().real();
  }
  if (trace > 1 + tol) throw std::invalid_argument("device: total trace exceeds 1");
}

SimplifiedDevice qubit_honest_device() {
  SimplifiedDevice d;
  d.dim = 2;
  CMat P0 = CMat::Zero(2, 2), P1 = CMat::Zero(2, 2);
  P0(0, 0) = 1;
  P1(1, 1) = 1;
  CMat plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  d.phi = {plus};
  d.Pi0 = {P0};
  d.Pi1 = {P1};
  d.M0 = {identity(2) - plus};
  d.K0 = {identity(2)};
  return d;
}

double overlap(const SimplifiedDevice& dev) {
  double best = 0;
  for (size_t y = 0; y < dev.ys(); ++y) {
    const CMat M1 = dev.M1(y);
    const CMat X = dev.K0[y] * (dev.Pi0[y] * M1 * dev.Pi0[y] + dev.Pi1[y] * M1 * dev.Pi1[y]);
    best = std::max(best, op_norm(X));
  }
  return best;
}

CMat JordanDecomposition::reconstruct_P() const {
  const int d = blocks.empty() ? 0 : static_cast<int>(blocks[0].V.rows());
  CMat P = CMat::Zero(d, d);
  for (const auto& b : blocks) P += b.p * b.V.col(0) * b.V.col(0).adjoint();
  return P;
}

CMat JordanDecomposition::reconstruct_M() const {
  const int d = blocks.empty() ? 0 : static_cast<int>(blocks[0].V.rows());
  CMat M = CMat::Zero(d, d);
  for (const auto& b : blocks) {
    if (b.V.cols() == 1) {
      M += b.m * b.V.col(0) * b.V.col(0).adjoint();
      continue;
    }
    const double c = std::sqrt(b.c2), s = std::sqrt(1 - b.c2);
    Eigen::Matrix2cd blk;
    blk << b.c2, c * s, c * s, 1 - b.c2;
    M += b.V * blk * b.V.adjoint();
  }
  return M;
}

std::vector<double> JordanDecomposition::cosines() const {
  std::vector<double> out;
  for (const auto& b : blocks) out.push_back(std::sqrt(b.c2));
  return out;
}

JordanDecomposition jordan_angles(const CMat& P, const CMat& M, double tol) {
  const int d = static_cast<int>(P.rows());
  if (d > kMaxDeviceDim || M.rows() != d) throw std::invalid_argument("jordan_angles: bad dimension");
  if (!is_projector(P, 1e-8) || !is_projector(M, 1e-8))
    throw std::invalid_argument("jordan_angles: input is not a projector");
  JordanDecomposition out;
  const CMat I = identity(d);
  const CMat RP = range_basis(P);
  // Inside range(P): eigenvectors of P M P with eigenvalue c^2.
  CMat covered = CMat::Zero(d, d);
  if (RP.cols() > 0) {
    const CMat R = RP.adjoint() * M * RP;
    SelfAdjointEigenSolver<CMat> es(R);
    for (int i = 0; i < R.rows(); ++i) {
      const double c2 = std::clamp(es.eigenvalues()(i), 0.0, 1.0);
      const Eigen::VectorXcd v = RP * es.eigenvectors().col(i);
      JordanBlock blk;
      blk.p = 1;
      if (c2 > tol && c2 < 1 - tol) {
        Eigen::VectorXcd w = (I - P) * M * v;
        w /= w.norm();
        blk.V.resize(d, 2);
        blk.V.col(0) = v;
        blk.V.col(1) = w;
        blk.c2 = c2;
        blk.m = c2;
        covered += w * w.adjoint();
      } else {
        blk.V = v;
        blk.m = c2 > 0.5 ? 1 : 0;
        blk.c2 = blk.m;
      }
      out.blocks.push_back(std::move(blk));
    }
  }
  // The rest of range(I - P) is invariant under M; split it by M.
  const CMat Q = I - P - covered;
  const CMat RQ = range_basis(Q);
  if (RQ.cols() > 0) {
    SelfAdjointEigenSolver<CMat> es(RQ.adjoint() * M * RQ);
    for (int i = 0; i < RQ.cols(); ++i) {
      JordanBlock blk;
      blk.V = RQ * es.eigenvectors().col(i);
      blk.p = 0;
      blk.m = es.eigenvalues()(i) > 0.5 ? 1 : 0;
      blk.c2 = 1 - blk.m;
      out.blocks.push_back(std::move(blk));
    }
  }
  return out;
}

CMat bad_subspace_K(const CMat& P, const CMat& M, double omega) {
  if (!(omega > 0.5 && omega <= 1)) throw std::invalid_argument("omega must lie in (1/2, 1]");
  const int d = static_cast<int>(P.rows());
  const CMat I = identity(d);
  const CMat X = P * M * P + (I - P) * M * (I - P);
  SelfAdjointEigenSolver<CMat> es(X);
  CMat K = CMat::Zero(d, d);
  constexpr double kEdge = 1e-10;
  for (int i = 0; i < d; ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev >= 1 - omega - kEdge && ev <= omega + kEdge)
      K += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }
  return K;
}

AnglesCheck angles_lemma_check(const CMat& P, const CMat& M, const CMat& phi, double omega) {
  const int d = static_cast<int>(P.rows());
  const CMat I = identity(d);
  const CMat K = bad_subspace_K(P, M, omega);
  AnglesCheck r{};
  r.gamma = std::max(0.0, 1 - (M * phi).trace().real());
  r.mu = std::fabs(0.5 - (M * P * phi * P).trace().real() -
                   (M * (I - P) * phi * (I - P)).trace().real());
  r.lhs = ((I - K) * phi).trace().real();
  const double denom = 1 - 4 * omega * (1 - omega);
  r.rhs = denom > 0 ? (2 * r.mu + 10 * std::sqrt(r.gamma)) / denom
                    : std::numeric_limits<double>::infinity();
  r.holds = r.lhs <= r.rhs + 1e-12;
  return r;
}

std::vector<CMat> post_measurement(const SimplifiedDevice& dev, int c, int t, int outcome, int k) {
  std::vector<CMat> out;
  for (size_t y = 0; y < dev.ys(); ++y) {
    CMat E;
    if (c == 0) {
      if (outcome != 0 && outcome != 1) throw std::invalid_argument("post_measurement: e must be 0 or 1");
      E = outcome == 0 ? dev.M0[y] : dev.M1(y);
      if (t == 1) {
        if (k != 0 && k != 1) throw std::invalid_argument("post_measurement: k must be 0 or 1");
        E = (k == 0 ? dev.K0[y] : dev.K1(y)) * E;
      }
    } else {
      if (outcome < 0 || outcome > 2) throw std::invalid_argument("post_measurement: v must be 0, 1 or 2");
      E = outcome == 0 ? dev.Pi0[y] : outcome == 1 ? dev.Pi1[y] : dev.Pi2(y);
    }
    out.push_back(E * dev.phi[y] * E.adjoint());
  }
  return out;
}

double lambda_curve(double omega, double t) {
  if (!(omega > 0.5 && omega <= 1)) throw std::invalid_argument("omega must lie in (1/2, 1]");
  const double kink = 0.5 + omega / 2;
  if (t < kink) return 0.0;
  const double x = t - kink;
  return 2 * std::numbers::log2e * x * x;
}

double rate_bound(double omega, double gamma, double kappa, double eta, double p_test,
                  double eps, double c) {
  return lambda_curve(omega, 1 - gamma / kappa - eta) - c * (p_test + eps / (kappa * p_test));
}

double azuma_bound(double t, double n) { return 2 * std::exp(-t * t * n / 2); }

double fan_bound(double t, double v, double n) {
  return std::exp(-(t / 2) * std::asinh(t / (2 * v * v)) * n);
}

CMat random_projector(int dim, int rank, Rng& rng) {
  const CMat G = gaussian_matrix(dim, rank, rng);
  Eigen::HouseholderQR<CMat> qr(G);
  const CMat Q = qr.householderQ() * CMat::Identity(dim, rank);
  return Q * Q.adjoint();
}

CMat random_density(int dim, Rng& rng) {
  const CMat G = gaussian_matrix(dim, dim, rng);
  CMat rho = G * G.adjoint();
  return rho / rho.trace().real();
}

nlohmann::json to_json(const SimplifiedDevice& dev) {
  nlohmann::json j = {{"dim", dev.dim}};
  for (const char* key : {"phi", "Pi0", "Pi1", "M0", "K0"}) j[key] = nlohmann::json::array();
  for (size_t y = 0; y < dev.ys(); ++y) {
    j["phi"].push_back(mat_json(dev.phi[y]));
    j["Pi0"].push_back(mat_json(dev.Pi0[y]));
    j["Pi1"].push_back(mat_json(dev.Pi1[y]));
    j["M0"].push_back(mat_json(dev.M0[y]));
    j["K0"].push_back(mat_json(dev.K0[y]));
  }
  return j;
}

SimplifiedDevice device_from_json(const nlohmann::json& j) {
  SimplifiedDevice dev;
  dev.dim = j.at("dim").get<int>();
  if (dev.dim <= 0 || dev.dim > kMaxDeviceDim) throw std::invalid_argument("device: dimension out of range");
  for (const auto& m : j.at("phi")) dev.phi.push_back(mat_from(m, dev.dim));
  for (const auto& m : j.at("Pi0")) dev.Pi0.push_back(mat_from(m, dev.dim));
  for (const auto& m : j.at("Pi1")) dev.Pi1.push_back(mat_from(m, dev.dim));
  for (const auto& m : j.at("M0")) dev.M0.push_back(mat_from(m, dev.dim));
  for (const auto& m : j.at("K0")) dev.K0.push_back(mat_from(m, dev.dim));
  dev.validate();
  return dev;
}

}  // namespace ntcfrand
