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

#include <Eigen/Dense>

#include <vector>

#include "json.hpp"
#include "ntcfrand/rng.h"

namespace ntcfrand {

using CMat = Eigen::MatrixXcd;

constexpr int kMaxDeviceDim = 64;

// One entry per y. Pi2 = I - Pi0 - Pi1, M1 = I - M0, K1 = I - K0.
struct SimplifiedDevice {
  int dim = 0;
  std::vector<CMat> phi;
  std::vector<CMat> Pi0, Pi1, M0, K0;

  size_t ys() const { return phi.size(); }
  CMat Pi2(size_t y) const;
  CMat M1(size_t y) const;
  CMat K1(size_t y) const;

  // Throws std::invalid_argument if any projector, commutation or
  // positivity condition fails at tolerance tol.
  void validate(double tol = 1e-9) const;
};

// Computational-basis Pi, Hadamard-basis M with M1 = |+><+|, K0 = I, phi = |+><+|.
SimplifiedDevice qubit_honest_device();

bool is_projector(const CMat& P, double tol = 1e-9);

// max_y || K0 (Pi0 M1 Pi0 + Pi1 M1 Pi1) ||.
double overlap(const SimplifiedDevice& dev);

// A two-dimensional block spanned by (v, w) with v in range(P):
// P = diag(1, 0), M = [[c^2, cs], [cs, s^2]]. One-dimensional blocks carry
// the scalar values of P and M; their padded cos^2 is m when p = 1 and
// 1 - m when p = 0.
struct JordanBlock {
  CMat V;  // dim x 1 or dim x 2, orthonormal columns
  double p = 0;
  double m = 0;
  double c2 = 0;
};

struct JordanDecomposition {
  std::vector<JordanBlock> blocks;

  CMat reconstruct_P() const;
  CMat reconstruct_M() const;
  std::vector<double> cosines() const;
};

// Throws std::invalid_argument on non-projector input or dim > 64.
JordanDecomposition jordan_angles(const CMat& P, const CMat& M, double tol = 1e-9);

// Projector onto the eigenspaces of P M P + (I - P) M (I - P) with
// eigenvalue in [1 - omega, omega].
CMat bad_subspace_K(const CMat& P, const CMat& M, double omega);

struct AnglesCheck {
  double lhs;  // Tr((I - K) phi)
  double rhs;  // (2 mu + 10 sqrt(gamma)) / (1 - 4 omega (1 - omega))
  double mu;
  double gamma;
  bool holds;
};

AnglesCheck angles_lemma_check(const CMat& P, const CMat& M, const CMat& phi, double omega);

// Post-measurement operators per y. c = 0 with t = 0 selects M^e; c = 0 with
// t = 1 selects K^k M^e; c = 1 selects Pi^v.
std::vector<CMat> post_measurement(const SimplifiedDevice& dev, int c, int t, int outcome,
                                   int k = 0);

double lambda_curve(double omega, double t);

// lambda_omega(1 - gamma/kappa - eta) - c (p_test + eps / (kappa p_test)).
// c stands in for the unstated O(.) constant.
double rate_bound(double omega, double gamma, double kappa, double eta, double p_test,
                  double eps, double c = 1.0);

double azuma_bound(double t, double n);
double fan_bound(double t, double v, double n);

CMat random_projector(int dim, int rank, Rng& rng);
CMat random_density(int dim, Rng& rng);

nlohmann::json to_json(const SimplifiedDevice& dev);
SimplifiedDevice device_from_json(const nlohmann::json& j);

}  // namespace ntcfrand
