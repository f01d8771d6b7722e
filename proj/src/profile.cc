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

#include "ntcfrand/profile.h"

#include <cmath>

#include "ntcfrand/errors.h"

namespace ntcfrand {

namespace {

int ceil_log2(uint64_t q) {
  int k = 0;
  while ((uint64_t{1} << k) < q) ++k;
  return k == 0 ? 1 : k;
}

bool is_prime(uint64_t q) {
  if (q < 2) return false;
  for (uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

// A concrete stand-in for "super-polynomial in lambda": the ratio must
// exceed lambda^{log2 lambda}.
bool superpoly(double ratio, double lambda) {
  if (lambda <= 1) return false;
  return std::log2(ratio) > std::log2(lambda) * std::log2(lambda);
}

Profile desk(const std::string& name, uint64_t q, size_t n, size_t m) {
  Profile p;
  p.name = name;
  p.lambda = 8;
  p.l = 1;
  p.q = q;
  p.n = n;
  p.m = m;
  p.w = n * static_cast<size_t>(ceil_log2(q));
  p.C_T = 1.0;
  p.B_P = p.b_p_formula();
  p.B_V = p.B_P / 2;
  p.B_L = p.B_V / 2;
  return p;
}

Profile micro(const std::string& name, uint64_t q, size_t m) {
  Profile p;
  p.name = name;
  p.lambda = 1;
  p.q = q;
  p.n = 1;
  p.m = m;
  p.w = static_cast<size_t>(ceil_log2(q));
  p.B_P = 0.9;
  p.B_V = 0.5;
  p.B_L = 0.25;
  return p;
}

// Sizes that satisfy every condition at lambda = 128, found by iterating
// q to a fixed point. Arithmetic is in doubles; q is never materialized.
Profile paper_shape() {
  Profile p;
  p.name = "paper-shape";
  p.lambda = 128;
  p.runnable = false;
  p.l = 128;
  const double ratio = std::exp2(std::log2(p.lambda) * std::log2(p.lambda) + 1);
  double logq = 64;
  for (int it = 0; it < 64; ++it) {
    const double k = std::ceil(logq);
    p.n = static_cast<size_t>(p.l * k);
    p.w = static_cast<size_t>(p.n * k);
    p.m = p.w + p.n;
    p.B_L = 2 * std::sqrt(static_cast<double>(p.n));
    p.B_V = p.B_L * ratio;
    p.B_P = p.B_V * ratio;
    const double next = std::log2(2 * p.C_T * p.B_P *
                                  std::sqrt(static_cast<double>(p.m * p.n) * logq));
    logq = next;
    p.q_log2 = logq;
    if (std::fabs(p.B_P - p.b_p_formula()) <= 1e-12 * p.B_P) break;
  }
  p.q = 0;
  return p;
}

}  // namespace

double Profile::log2_q() const {
  return q ? std::log2(static_cast<double>(q)) : q_log2;
}

double Profile::b_p_formula() const {
  return std::exp2(log2_q()) /
         (2 * C_T * std::sqrt(static_cast<double>(m) * static_cast<double>(n) * log2_q()));
}

std::vector<std::pair<std::string, bool>> Profile::conditions() const {
  const double logq = log2_q();
  const size_t k = q ? static_cast<size_t>(ceil_log2(q)) : static_cast<size_t>(std::ceil(logq));
  std::vector<std::pair<std::string, bool>> out;
  out.emplace_back("n >= l log q and m >= n log q",
                   n >= l * logq && m >= n * logq);
  out.emplace_back("w = n ceil(log q)", w == n * k);
  out.emplace_back("B_P = q / (2 C_T sqrt(m n log q))",
                   std::fabs(B_P - b_p_formula()) <= 1e-9 * b_p_formula());
  out.emplace_back("2 sqrt(n) <= B_L < B_V < B_P",
                   2 * std::sqrt(static_cast<double>(n)) <= B_L && B_L < B_V && B_V < B_P);
  out.emplace_back("B_P/B_V and B_V/B_L super-polynomial",
                   superpoly(B_P / B_V, lambda) && superpoly(B_V / B_L, lambda));
  return out;
}

void Profile::validate() const {
  if (!runnable) throw ConfigError("profile '" + name + "' is print-only");
  if (q < 2 || q > (uint64_t{1} << 31)) throw ConfigError("q out of range");
  if (!is_prime(q)) throw ConfigError("q must be prime");
  if (n == 0 || m == 0 || l == 0) throw ConfigError("dimensions must be positive");
  if (w != n * static_cast<size_t>(ceil_log2(q))) throw ConfigError("w must equal n ceil(log2 q)");
  if (!(B_L > 0 && B_V > 0 && B_P > 0)) throw ConfigError("noise widths must be positive");
  if (N == 0) throw ConfigError("N must be positive");
  if (!(p_test > 0 && p_test <= 1)) throw ConfigError("p_test must lie in (0, 1]");
  if (!(gamma >= 0 && gamma < 1)) throw ConfigError("gamma must lie in [0, 1)");
  if (!(kappa > 0 && kappa <= 1)) throw ConfigError("kappa must lie in (0, 1]");
  if (!(eta >= 0 && eta < 1)) throw ConfigError("eta must lie in [0, 1)");
  if (!(omega > 0.5 && omega <= 1)) throw ConfigError("omega must lie in (1/2, 1]");
}

Profile profile_by_name(const std::string& name) {
  if (name == "micro") return micro("micro", 5, 2);
  if (name == "micro3") return micro("micro3", 3, 3);
  if (name == "desk-small") return desk("desk-small", 13, 4, 20);
  if (name == "desk-medium") return desk("desk-medium", 61, 8, 56);
  if (name == "paper-shape") return paper_shape();
  throw ConfigError("unknown profile '" + name + "'");
}

std::vector<std::string> profile_names() {
  return {"micro", "micro3", "desk-small", "desk-medium", "paper-shape"};
}

nlohmann::json to_json(const Profile& p) {
  return {{"name", p.name},     {"lambda", p.lambda}, {"l", p.l},
          {"n", p.n},           {"m", p.m},           {"w", p.w},
          {"q", p.q},           {"B_L", p.B_L},       {"B_V", p.B_V},
          {"B_P", p.B_P},       {"C_T", p.C_T},       {"N", p.N},
          {"p_test", p.p_test}, {"gamma", p.gamma},   {"kappa", p.kappa},
          {"eta", p.eta},       {"omega", p.omega}};
}

Profile profile_from_json(const nlohmann::json& j) {
  Profile p;
  if (j.contains("name") && j.size() == 1)
    return profile_by_name(j.at("name").get<std::string>());
  try {
    p.name = j.value("name", std::string("inline"));
    p.lambda = j.value("lambda", p.lambda);
    p.l = j.value("l", p.l);
    p.n = j.at("n").get<size_t>();
    p.m = j.at("m").get<size_t>();
    p.q = j.at("q").get<uint64_t>();
    p.w = j.value("w", p.n * static_cast<size_t>(ceil_log2(p.q)));
    p.B_L = j.at("B_L").get<double>();
    p.B_V = j.at("B_V").get<double>();
    p.B_P = j.at("B_P").get<double>();
    p.C_T = j.value("C_T", p.C_T);
    p.N = j.value("N", p.N);
    p.p_test = j.value("p_test", p.p_test);
    p.gamma = j.value("gamma", p.gamma);
    p.kappa = j.value("kappa", p.kappa);
    p.eta = j.value("eta", p.eta);
    p.omega = j.value("omega", p.omega);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("profile: ") + e.what());
  }
  p.validate();
  return p;
}

}  // namespace ntcfrand
