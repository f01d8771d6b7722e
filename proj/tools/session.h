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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ntcfrand/devices.h"
#include "ntcfrand/profile.h"
#include "ntcfrand/protocol.h"

namespace ntcfrand::cli {

struct RunConfig {
  Profile profile;
  std::string mode = "protocol1";  // protocol1, protocol2, single-round
  std::string prover = "ideal";
  uint64_t seed = 1;
  uint64_t prover_seed = 1;
  uint64_t session = 0;
  uint64_t sessions = 1;
  uint64_t trials = 10000;
  bool condition_d = true;
  int rerequest_cap = 16;
  std::optional<SimplifiedDevice> device;
};

// Protocol 1 and single-round: ideal, qsim-micro, classical-committed,
// classical-random, classical-replay. Protocol 2: device, always-accept.
// Throws ConfigError on an unknown kind or one the mode cannot drive.
std::unique_ptr<Prover> make_local_prover(const RunConfig& cfg, uint64_t session);

// Acceptance, per-challenge pass rates, randomness budget and the
// empirical min-entropy of the output symbols.
nlohmann::json summarize(const Transcript& t);
nlohmann::json summarize(const SingleRoundReport& r);

// Output bits O in {0, 1}; invalid rounds (O = 2) are dropped.
BitString output_bits(const Transcript& t);

struct SessionResult {
  std::optional<Transcript> transcript;
  std::optional<SingleRoundReport> single_round;
};

SessionResult run_local(const RunConfig& cfg, uint64_t session);

// Runs cfg.sessions independent sessions, session ids cfg.session, ... on
// up to `threads` workers. Results are in session order.
std::vector<SessionResult> run_sessions(const RunConfig& cfg, unsigned threads);

// Verifier side against a remote prover.
Transcript run_remote(const RunConfig& cfg, LineChannel& channel);

// Builds a prover from the verifier's hello. Ideal provers rebuild the
// verifier's key schedule from `seed`.
std::unique_ptr<Prover> make_prover_for_hello(const nlohmann::json& hello, const std::string& kind,
                                              uint64_t seed, uint64_t prover_seed,
                                              bool condition_d,
                                              const std::optional<SimplifiedDevice>& device);

}  // namespace ntcfrand::cli
