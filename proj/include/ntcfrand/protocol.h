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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ntcfrand/devices.h"
#include "ntcfrand/ntcf.h"
#include "ntcfrand/profile.h"
#include "ntcfrand/qsim.h"
#include "ntcfrand/rng.h"
#include "ntcfrand/wire.h"

namespace ntcfrand {

// Deterministic key sequence: epoch e is generated from substream
// (seed, label, session, e). Lets a simulation-privileged prover rebuild
// the verifier's keys from the same seed.
class KeySchedule {
 public:
  KeySchedule(Profile profile, uint64_t seed, uint64_t session, std::string label = "key");

  // Second value: 64-bit words drawn.
  std::pair<NtcfKeyPair, uint64_t> key(uint64_t epoch) const;
  const Profile& profile() const { return profile_; }

 private:
  Profile profile_;
  uint64_t seed_;
  uint64_t session_;
  std::string label_;
};

// Messages follow the wire format: sample() returns {"type":"sample","y":vec};
// answer() returns {"type":"answer_eq","u":0|1,"d":"0101..."} or
// {"type":"answer_pre","b":0|1,"x":vec} for Protocol 1, and
// {"type":"answer_eq","e":..,"k":..} or {"type":"answer_pre","v":..} for
// Protocol 2. Bit strings travel as '0'/'1' characters.
class Prover {
 public:
  virtual ~Prover() = default;
  virtual std::string name() const = 0;
  virtual void on_hello(const nlohmann::json& hello) { (void)hello; }
  virtual void on_key(uint64_t epoch, const NtcfPublicKey& pk) { (void)epoch, (void)pk; }
  virtual nlohmann::json sample(uint64_t round, int attempt) {
    (void)round, (void)attempt;
    return {{"type", "sample"}, {"y", nullptr}};
  }
  virtual nlohmann::json answer(uint64_t round, int c, std::optional<int> t) = 0;
  virtual void on_decision(const nlohmann::json& decision) { (void)decision; }
};

std::string bits_to_string(const BitString& bits);
std::optional<BitString> bits_from_string(const nlohmann::json& j, size_t len);

// Uses the key schedule as a stand-in for quantum power: samples the SAMP
// marginal classically and answers equations through the trapdoor. With
// condition_d, d is drawn uniformly from G^_y when that set is nonempty.
std::unique_ptr<Prover> make_ideal_prover(const KeySchedule& keys, uint64_t seed,
                                          uint64_t session, bool condition_d = true);
// Exact state-vector prover; micro profiles only.
std::unique_ptr<Prover> make_qsim_prover(const Profile& profile, uint64_t seed, uint64_t session);
// Honest preimage for a committed x, coin-flip equations.
std::unique_ptr<Prover> make_committed_prover(const Profile& profile, uint64_t seed, uint64_t session);
// Uniform y and uniform answers.
std::unique_ptr<Prover> make_random_prover(const Profile& profile, uint64_t seed, uint64_t session);
// Replays its first-round y and answers forever, across key refreshes.
std::unique_ptr<Prover> make_replay_prover(const Profile& profile, uint64_t seed, uint64_t session);
// Protocol 2: Born-rule sampling of a simplified device, fresh state per round.
std::unique_ptr<Prover> make_device_prover(SimplifiedDevice dev, uint64_t seed, uint64_t session);
// Protocol 2: always e = 1, k = 0, v = 0.
std::unique_ptr<Prover> make_always_accept_prover();
// Forwards every call over a channel to a remote prover.
std::unique_ptr<Prover> make_remote_prover(LineChannel& channel);

struct Budget {
  uint64_t key_words = 0;
  uint64_t challenge_words = 0;
  uint64_t coin_words = 0;
  uint64_t bits() const { return 64 * (key_words + challenge_words + coin_words); }
};

struct RoundRecord {
  uint64_t index = 0;
  int G = 1;  // 0 test, 1 generation
  int C = 1;
  std::optional<int> T;
  nlohmann::json y;       // null when inversion never succeeded
  nlohmann::json answer;  // as received
  int W = 0;
  int O = -1;  // generation rounds only; -1 elsewhere
  std::optional<int> K;
  uint64_t key_epoch = 0;
  int attempts = 1;
  std::string note;
};

struct Transcript {
  std::string protocol;
  Profile profile;
  uint64_t seed = 0;
  uint64_t session = 0;
  std::vector<nlohmann::json> keys;  // public keys by epoch
  std::vector<RoundRecord> rounds;
  double threshold = 0;
  uint64_t test_sum = 0;
  bool accept = false;
  Budget budget;

  std::vector<int> output() const;  // O over generation rounds
};

struct ProtocolOptions {
  int rerequest_cap = 16;
};

Transcript run_protocol1(const Profile& profile, Prover& prover, uint64_t seed, uint64_t session,
                         const ProtocolOptions& opts = {});
Transcript run_protocol2(const Profile& profile, Prover& prover, uint64_t seed, uint64_t session);

double protocol1_threshold(const Profile& p);
double protocol2_threshold(const Profile& p);

// Recomputes the verdict from the recorded rounds alone.
bool transcript_accepts(const Transcript& t);

// JSON lines: header {"fmt":1,...}, then key and round records in order,
// then the final verdict.
std::string transcript_jsonl(const Transcript& t);
Transcript transcript_from_jsonl(const std::string& text);

struct SingleRoundReport {
  uint64_t trials = 0;
  uint64_t successes = 0;
  Proportion rate;
  uint64_t equation_trials = 0;
  uint64_t equation_successes = 0;
  uint64_t preimage_trials = 0;
  uint64_t preimage_successes = 0;
  uint64_t d_outside_ghat = 0;
};

KeySchedule single_round_keys(const Profile& profile, uint64_t seed);

// Fresh key per trial from single_round_keys; image, then a uniform challenge.
SingleRoundReport single_round_test(const Profile& profile, Prover& prover, uint64_t trials,
                                    uint64_t seed);

// Prover side of the wire protocol. The prover is built from the verifier's
// hello; answers until "decision".
using ProverFactory = std::function<std::unique_ptr<Prover>(const nlohmann::json& hello)>;
void serve_prover(LineChannel& channel, const ProverFactory& make);

}  // namespace ntcfrand
