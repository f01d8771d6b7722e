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

#include "session.h"

#include <algorithm>
#include <future>
#include <map>

#include "ntcfrand/errors.h"
#include "ntcfrand/extract.h"

namespace ntcfrand::cli {

using nlohmann::json;

namespace {

bool protocol2_kind(const std::string& kind) { return kind == "device" || kind == "always-accept"; }

std::unique_ptr<Prover> build(const std::string& mode, const std::string& kind, const Profile& p,
                              uint64_t seed, uint64_t prover_seed, uint64_t session,
                              bool condition_d, const std::optional<SimplifiedDevice>& device) {
  if (mode == "protocol2") {
    if (kind == "device")
      return make_device_prover(device ? *device : qubit_honest_device(), prover_seed, session);
    if (kind == "always-accept") return make_always_accept_prover();
    throw ConfigError("prover '" + kind + "' cannot run protocol2 (use device or always-accept)");
  }
  if (protocol2_kind(kind)) throw ConfigError("prover '" + kind + "' only runs protocol2");
  if (kind == "ideal") {
    const KeySchedule keys = mode == "single-round" ? single_round_keys(p, seed)
                                                    : KeySchedule(p, seed, session);
    return make_ideal_prover(keys, prover_seed, session, condition_d);
  }
  if (kind == "qsim-micro") {
    if (p.has_gadget_trapdoor())
      throw ConfigError("qsim-micro needs a micro profile, got '" + p.name + "'");
    return make_qsim_prover(p, prover_seed, session);
  }
  if (kind == "classical-committed") return make_committed_prover(p, prover_seed, session);
  if (kind == "classical-random") return make_random_prover(p, prover_seed, session);
  if (kind == "classical-replay") return make_replay_prover(p, prover_seed, session);
  if (kind == "remote") throw ConfigError("the remote prover is reached through 'serve'");
  throw ConfigError("unknown prover '" + kind + "'");
}

json rate(uint64_t s, uint64_t n) {
  const Proportion pr = wilson(s, n);
  return {{"successes", s}, {"trials", n}, {"rate", pr.p}, {"ci", {pr.lo, pr.hi}}};
}

}  // namespace

std::unique_ptr<Prover> make_local_prover(const RunConfig& cfg, uint64_t session) {
  return build(cfg.mode, cfg.prover, cfg.profile, cfg.seed, cfg.prover_seed, session,
               cfg.condition_d, cfg.device);
}

BitString output_bits(const Transcript& t) {
  BitString out;
  for (int o : t.output())
    if (o == 0 || o == 1) out.push_back(static_cast<uint8_t>(o));
  return out;
}

json summarize(const Transcript& t) {
  uint64_t eq_n = 0, eq_s = 0, pre_n = 0, pre_s = 0, gen_n = 0, gen_valid = 0, test_n = 0;
  uint64_t outside = 0, failed = 0, t1 = 0;
  std::map<std::string, uint64_t> notes;
  for (const auto& r : t.rounds) {
    if (!r.note.empty()) ++notes[r.note];
    if (r.G == 1) {
      ++gen_n;
      gen_valid += r.W;
      continue;
    }
    ++test_n;
    if (r.T == 1) ++t1;
    if (r.C == 0) {
      ++eq_n;
      eq_s += r.W;
    } else {
      ++pre_n;
      pre_s += r.W;
    }
  }
  outside = notes.count("d-outside-ghat") ? notes["d-outside-ghat"] : 0;
  failed = notes.count("inversion-failed") ? notes["inversion-failed"] : 0;

  std::vector<uint64_t> symbols;
  for (int o : t.output()) symbols.push_back(static_cast<uint64_t>(o));
  json j = {{"protocol", t.protocol},
            {"profile", t.profile.name},
            {"seed", t.seed},
            {"session", t.session},
            {"rounds", t.rounds.size()},
            {"test_rounds", test_n},
            {"generation_rounds", gen_n},
            {"accept", t.accept},
            {"test_sum", t.test_sum},
            {"threshold", t.threshold},
            {"test_pass_rate", test_n ? static_cast<double>(t.test_sum) /
                                            static_cast<double>(t.protocol == "protocol2" ? std::max<uint64_t>(t1, 1) : test_n)
                                      : 0.0},
            {"equation", rate(eq_s, eq_n)},
            {"preimage", rate(pre_s, pre_n)},
            {"generation_valid", rate(gen_valid, gen_n)},
            {"output_length", output_bits(t).size()},
            {"min_entropy_per_round", symbols.empty() ? 0.0 : empirical_min_entropy(symbols)},
            {"budget",
             {{"key_words", t.budget.key_words},
              {"challenge_words", t.budget.challenge_words},
              {"coin_words", t.budget.coin_words},
              {"bits", t.budget.bits()}}},
            {"notes", notes}};
  if (t.protocol == "protocol1") {
    j["d_outside_ghat"] = outside;
    j["inversion_failed"] = failed;
    j["key_epochs"] = t.keys.size();
  } else {
    j["t1_rounds"] = t1;
  }
  return j;
}

json summarize(const SingleRoundReport& r) {
  return {{"mode", "single-round"},
          {"trials", r.trials},
          {"successes", r.successes},
          {"rate", r.rate.p},
          {"ci", {r.rate.lo, r.rate.hi}},
          {"equation", rate(r.equation_successes, r.equation_trials)},
          {"preimage", rate(r.preimage_successes, r.preimage_trials)},
          {"d_outside_ghat", r.d_outside_ghat}};
}

SessionResult run_local(const RunConfig& cfg, uint64_t session) {
  auto prover = make_local_prover(cfg, session);
  SessionResult res;
  if (cfg.mode == "protocol1") {
    ProtocolOptions opts;
    opts.rerequest_cap = cfg.rerequest_cap;
    res.transcript = run_protocol1(cfg.profile, *prover, cfg.seed, session, opts);
  } else if (cfg.mode == "protocol2") {
    res.transcript = run_protocol2(cfg.profile, *prover, cfg.seed, session);
  } else if (cfg.mode == "single-round") {
    res.single_round = single_round_test(cfg.profile, *prover, cfg.trials, cfg.seed);
  } else {
    throw ConfigError("unknown mode '" + cfg.mode + "'");
  }
  return res;
}

std::vector<SessionResult> run_sessions(const RunConfig& cfg, unsigned threads) {
  if (cfg.sessions == 0) throw ConfigError("sessions must be positive");
  // Building every prover up front surfaces configuration errors before any work.
  for (uint64_t i = 0; i < cfg.sessions; ++i) make_local_prover(cfg, cfg.session + i);
  std::vector<SessionResult> out(cfg.sessions);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cfg.sessions)));
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (uint64_t i = w; i < cfg.sessions; i += workers) out[i] = run_local(cfg, cfg.session + i);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

Transcript run_remote(const RunConfig& cfg, LineChannel& channel) {
  auto prover = make_remote_prover(channel);
  if (cfg.mode == "protocol1") {
    ProtocolOptions opts;
    opts.rerequest_cap = cfg.rerequest_cap;
    return run_protocol1(cfg.profile, *prover, cfg.seed, cfg.session, opts);
  }
  if (cfg.mode == "protocol2") return run_protocol2(cfg.profile, *prover, cfg.seed, cfg.session);
  throw ConfigError("serve supports protocol1 and protocol2 only");
}

std::unique_ptr<Prover> make_prover_for_hello(const json& hello, const std::string& kind,
                                              uint64_t seed, uint64_t prover_seed,
                                              bool condition_d,
                                              const std::optional<SimplifiedDevice>& device) {
  try {
    const Profile p = profile_from_json(hello.at("profile"));
    const std::string protocol = hello.at("protocol").get<std::string>();
    const uint64_t session = hello.at("session").get<uint64_t>();
    return build(protocol, kind, p, seed, prover_seed, session, condition_d, device);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolViolation(std::string("malformed hello: ") + e.what());
  }
}

}  // namespace ntcfrand::cli
