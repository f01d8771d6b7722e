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
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace ntcfrand {

struct Profile {
  std::string name;
  double lambda = 0;
  size_t l = 1;
  size_t n = 1;
  size_t m = 2;
  size_t w = 3;
  uint64_t q = 5;
  double B_L = 0.25;
  double B_V = 0.5;
  double B_P = 0.9;
  double C_T = 1.0;

  size_t N = 1000;
  double p_test = 0.05;
  double gamma = 0.05;
  double kappa = 0.5;
  double eta = 0.05;
  double omega = 0.75;

  // log2 q for the print-only profile, whose q does not fit in 64 bits.
  double q_log2 = 0;

  // False only for the print-only paper-shape profile.
  bool runnable = true;

  // Whether the key carries a gadget trapdoor (m >= w + n); smaller keys
  // are inverted by enumeration.
  bool has_gadget_trapdoor() const { return m >= w + n; }

  double log2_q() const;

  // q / (2 C_T sqrt(m n log2 q)).
  double b_p_formula() const;

  // The five parameter conditions, in order, each with its truth value.
  std::vector<std::pair<std::string, bool>> conditions() const;

  // Throws ConfigError on inconsistent shapes or parameter ranges.
  void validate() const;
};

Profile profile_by_name(const std::string& name);
std::vector<std::string> profile_names();

nlohmann::json to_json(const Profile& p);
Profile profile_from_json(const nlohmann::json& j);

}  // namespace ntcfrand
