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

#include "commands.h"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "ntcfrand/devices.h"
#include "ntcfrand/errors.h"
#include "ntcfrand/extract.h"
#include "ntcfrand/ntcf.h"
#include "ntcfrand/profile.h"
#include "ntcfrand/protocol.h"
#include "ntcfrand/wire.h"
#include "session.h"

namespace ntcfrand::cli {

using nlohmann::json;

namespace {

enum class LogLevel { kError, kWarn, kInfo };

LogLevel log_level() {
  const char* env = std::getenv("NTCFRAND_LOG");
  if (!env) return LogLevel::kWarn;
  const std::string v = env;
  if (v == "error") return LogLevel::kError;
  if (v == "info") return LogLevel::kInfo;
  return LogLevel::kWarn;
}

void log(LogLevel level, const std::string& msg) {
  if (level > log_level()) return;
  std::cerr << (level == LogLevel::kInfo ? "info: " : level == LogLevel::kWarn ? "warning: " : "error: ")
            << msg << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

struct ProfileOpts {
  std::string name = "desk-small";
  std::string file;
  size_t rounds = 0;

  void add(CLI::App* app) {
    app->add_option("--profile", name, "Profile name (" + names() + ")");
    app->add_option("--profile-file", file, "JSON file with an inline profile");
    app->add_option("-N,--rounds", rounds, "Override the number of rounds N");
  }

  static std::string names() {
    std::string s;
    for (const auto& n : profile_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }

  Profile load() const {
    Profile p;
    try {
      p = file.empty() ? profile_by_name(name) : profile_from_json(read_json(file));
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad profile: ") + e.what());
    }
    if (rounds) p.N = rounds;
    return p;
  }
};

void warn_conditions(const Profile& p) {
  std::string bad;
  for (const auto& [name, ok] : p.conditions())
    if (!ok) bad += (bad.empty() ? "" : "; ") + name;
  if (!bad.empty()) log(LogLevel::kWarn, "profile '" + p.name + "' violates: " + bad);
  if (p.runnable) log(LogLevel::kInfo, "profile '" + p.name + "' is cryptographically insecure");
}

json profile_report(const Profile& p) {
  json conds = json::array();
  for (const auto& [name, ok] : p.conditions()) conds.push_back({{"condition", name}, {"holds", ok}});
  return {{"profile", to_json(p)},
          {"runnable", p.runnable},
          {"insecure", p.runnable},
          {"log2_q", p.log2_q()},
          {"B_P_formula", p.b_p_formula()},
          {"gadget_trapdoor", p.has_gadget_trapdoor()},
          {"conditions", conds}};
}

void emit(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

// Session outputs get a ".<session>" suffix when more than one session runs.
std::string session_path(const std::string& path, uint64_t session, bool many) {
  return many ? path + "." + std::to_string(session) : path;
}

void write_outputs(const Transcript& t, const std::string& transcript_path,
                   const std::string& bits_path, bool many) {
  if (!transcript_path.empty())
    write_file(session_path(transcript_path, t.session, many), transcript_jsonl(t));
  if (!bits_path.empty())
    write_file(session_path(bits_path, t.session, many), bits_to_hex(output_bits(t)));
}

std::optional<SimplifiedDevice> load_device(const std::string& path) {
  if (path.empty()) return std::nullopt;
  try {
    SimplifiedDevice dev = device_from_json(read_json(path));
    dev.validate();
    return dev;
  } catch (const json::exception& e) {
    throw ConfigError("bad device file: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("bad device file: " + std::string(e.what()));
  }
}

struct RunOpts {
  ProfileOpts profile;
  std::string mode = "protocol1";
  std::string prover = "ideal";
  uint64_t seed = 1;
  std::optional<uint64_t> prover_seed;
  uint64_t session = 0;
  uint64_t sessions = 1;
  unsigned threads = 1;
  uint64_t trials = 10000;
  bool no_condition_d = false;
  int rerequest_cap = 16;
  std::string device;
  std::string transcript;
  std::string summary;
  std::string bits;

  RunConfig config() const {
    RunConfig cfg;
    cfg.profile = profile.load();
    cfg.mode = mode;
    cfg.prover = prover;
    cfg.seed = seed;
    cfg.prover_seed = prover_seed.value_or(seed);
    cfg.session = session;
    cfg.sessions = sessions;
    cfg.trials = trials;
    cfg.condition_d = !no_condition_d;
    cfg.rerequest_cap = rerequest_cap;
    cfg.device = load_device(device);
    return cfg;
  }
};

int cmd_profile(const ProfileOpts& o, bool all) {
  if (all) {
    json arr = json::array();
    for (const auto& n : profile_names()) arr.push_back(profile_report(profile_by_name(n)));
    emit(arr, "");
  } else {
    emit(profile_report(o.load()), "");
  }
  return kExitOk;
}

int cmd_keygen(const ProfileOpts& po, uint64_t seed, uint64_t session, uint64_t epoch,
               const std::string& pub_path, const std::string& sec_path) {
  const Profile p = po.load();
  if (!p.runnable) throw ConfigError("profile '" + p.name + "' is print-only");
  p.validate();
  warn_conditions(p);
  const NtcfKeyPair kp = KeySchedule(p, seed, session).key(epoch).first;
  const json pub = to_json(kp.pub, p);
  if (!pub_path.empty()) write_file(pub_path, pub.dump() + "\n");
  if (!sec_path.empty()) write_file(sec_path, secret_to_json(kp).dump() + "\n");
  emit({{"profile", p.name},
        {"epoch", epoch},
        {"trapdoor", kp.trap.has_value()},
        {"public", pub_path.empty() ? json(nullptr) : json(pub_path)},
        {"secret", sec_path.empty() ? json(nullptr) : json(sec_path)},
        {"public_sha256", sha256_hex(pub.dump())}},
       "");
  return kExitOk;
}

int cmd_run(const RunOpts& o) {
  const RunConfig cfg = o.config();
  warn_conditions(cfg.profile);
  const auto results = run_sessions(cfg, o.threads);
  const bool many = results.size() > 1;
  json summaries = json::array();
  for (const auto& r : results) {
    if (r.transcript) {
      write_outputs(*r.transcript, o.transcript, o.bits, many);
      json s = summarize(*r.transcript);
      s["prover"] = cfg.prover;
      summaries.push_back(std::move(s));
    } else {
      json s = summarize(*r.single_round);
      s["prover"] = cfg.prover;
      s["profile"] = cfg.profile.name;
      summaries.push_back(std::move(s));
    }
  }
  emit(many ? summaries : summaries[0], o.summary);
  return kExitOk;
}

struct NetOpts {
  std::string host = "127.0.0.1";
  uint16_t port = 0;
  std::string port_file;
  bool stdio = false;
  double timeout = 10;
};

int cmd_serve(const RunOpts& o, const NetOpts& net) {
  RunConfig cfg = o.config();
  cfg.prover = "remote";
  warn_conditions(cfg.profile);
  if (!cfg.profile.runnable) throw ConfigError("profile '" + cfg.profile.name + "' is print-only");
  cfg.profile.validate();
  std::unique_ptr<LineChannel> ch;
  if (net.stdio) {
    ch = stdio_channel();
  } else {
    uint16_t bound = 0;
    const int lfd = tcp_listen(net.port, &bound);
    log(LogLevel::kInfo, "listening on 127.0.0.1:" + std::to_string(bound));
    if (!net.port_file.empty()) {
      const std::string tmp = net.port_file + ".tmp";
      write_file(tmp, std::to_string(bound) + "\n");
      std::filesystem::rename(tmp, net.port_file);
    }
    const int fd = tcp_accept(lfd);
    ::close(lfd);
    ch = socket_channel(fd);
  }
  const Transcript t = run_remote(cfg, *ch);
  write_outputs(t, o.transcript, o.bits, false);
  json s = summarize(t);
  s["prover"] = "remote";
  if (net.stdio && (o.summary.empty() || o.summary == "-")) {
    std::cerr << s.dump(2) << '\n';
  } else {
    emit(s, o.summary);
  }
  return kExitOk;
}

int cmd_connect(const RunOpts& o, const NetOpts& net) {
  const auto device = load_device(o.device);
  const uint64_t prover_seed = o.prover_seed.value_or(o.seed);
  std::unique_ptr<LineChannel> ch;
  if (net.stdio) {
    ch = stdio_channel();
  } else {
    uint16_t port = net.port;
    if (!net.port_file.empty()) {
      const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(net.timeout);
      while (!std::filesystem::exists(net.port_file)) {
        if (std::chrono::steady_clock::now() > deadline)
          throw IoError("timed out waiting for '" + net.port_file + "'");
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
      }
      port = static_cast<uint16_t>(std::stoul(read_file(net.port_file)));
    }
    if (port == 0) throw ConfigError("connect needs --port or --port-file");
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(net.timeout);
    int fd = -1;
    for (;;) {
      try {
        fd = tcp_connect(net.host, port);
        break;
      } catch (const IoError&) {
        if (std::chrono::steady_clock::now() > deadline) throw;
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
      }
    }
    ch = socket_channel(fd);
  }
  std::string name;
  serve_prover(*ch, [&](const json& hello) {
    auto p = make_prover_for_hello(hello, o.prover, o.seed, prover_seed, !o.no_condition_d, device);
    name = p->name();
    return p;
  });
  if (!net.stdio) emit({{"prover", name}, {"status", "done"}}, "");
  return kExitOk;
}

// analyze

HardcoreAdversary adversary(const std::string& kind, const Profile& p) {
  const size_t w = p.n * static_cast<size_t>(ModRing(p.q).bits());
  if (kind == "random") {
    return [p, w](const NtcfPublicKey& pk, Rng& rng) {
      SampleDraw s = ntcf_samp(pk, p, rng);
      BitString d(w);
      for (auto& b : d) b = static_cast<uint8_t>(rng.bit());
      return HardcoreTuple{s.b, s.x, d, rng.bit()};
    };
  }
  if (kind == "zero") {
    return [p, w](const NtcfPublicKey& pk, Rng& rng) {
      SampleDraw s = ntcf_samp(pk, p, rng);
      BitString d(w);
      for (auto& b : d) b = static_cast<uint8_t>(rng.bit());
      return HardcoreTuple{s.b, s.x, d, 0};
    };
  }
  throw ConfigError("unknown adversary '" + kind + "' (random, zero)");
}

int cmd_analyze_moderate(uint64_t q, size_t l, size_t n, uint64_t samples, uint64_t dhats,
                         uint64_t seed) {
  const ModRing ring(q);
  Rng rng = substream(seed, "analyze-moderate", 0, 0);
  uint64_t moderate = 0;
  double max_tv = 0;
  const double tv_bound = std::pow(static_cast<double>(q), static_cast<double>(l) / 2) *
                          std::exp2(-static_cast<double>(n) / 40);
  uint64_t tv_violations = 0;
  for (uint64_t i = 0; i < samples; ++i) {
    const ModMat C = ModMat::random(ring, l, n, rng);
    if (!moderate_check(C)) continue;
    ++moderate;
    for (uint64_t k = 0; k < dhats; ++k) {
      BitString d(n);
      for (auto& b : d) b = static_cast<uint8_t>(rng.bit());
      const double tv = parity_tv(C, d);
      max_tv = std::max(max_tv, tv);
      if (tv > tv_bound) ++tv_violations;
    }
  }
  const double frac_bound = 1 - std::pow(static_cast<double>(q), static_cast<double>(l)) *
                                    std::exp2(-static_cast<double>(n) / 8);
  emit({{"q", q},
        {"l", l},
        {"n", n},
        {"samples", samples},
        {"moderate_fraction", samples ? static_cast<double>(moderate) / static_cast<double>(samples) : 0.0},
        {"fraction_bound", frac_bound},
        {"max_tv", max_tv},
        {"tv_bound", tv_bound},
        {"tv_violations", tv_violations}},
       "");
  return kExitOk;
}

int cmd_analyze_hardcore(const ProfileOpts& po, const std::string& kind, uint64_t trials,
                         uint64_t seed) {
  const Profile p = po.load();
  p.validate();
  const HardcoreReport r = hardcore_game(p, adversary(kind, p), trials, seed);
  emit({{"profile", p.name},
        {"adversary", kind},
        {"trials", r.trials},
        {"in_H", {{"rate", r.in_h.p}, {"ci", {r.in_h.lo, r.in_h.hi}}}},
        {"in_Hbar", {{"rate", r.in_hbar.p}, {"ci", {r.in_hbar.lo, r.in_hbar.hi}}}},
        {"advantage", r.advantage},
        {"advantage_ci", {r.adv_lo, r.adv_hi}}},
       "");
  return kExitOk;
}

int cmd_analyze_device(const std::string& path, double omega) {
  const SimplifiedDevice dev = path.empty() ? qubit_honest_device() : *load_device(path);
  json per_y = json::array();
  for (size_t y = 0; y < dev.ys(); ++y) {
    const JordanDecomposition jd = jordan_angles(dev.Pi0[y], dev.M0[y]);
    const AnglesCheck ac = angles_lemma_check(dev.Pi0[y] + dev.Pi1[y], dev.M1(y), dev.phi[y], omega);
    per_y.push_back({{"y", y},
                     {"cosines", jd.cosines()},
                     {"angles_lhs", ac.lhs},
                     {"angles_rhs", ac.rhs},
                     {"angles_holds", ac.holds}});
  }
  emit({{"dim", dev.dim}, {"overlap", overlap(dev)}, {"omega", omega}, {"per_y", per_y}}, "");
  return kExitOk;
}

int cmd_analyze_jordan(int dim, uint64_t instances, double omega, uint64_t seed) {
  if (dim < 2 || dim > kMaxDeviceDim) throw ConfigError("dimension out of range");
  double max_err = 0;
  uint64_t holds = 0;
  for (uint64_t i = 0; i < instances; ++i) {
    Rng rng = substream(seed, "analyze-jordan", 0, i);
    const int rp = 1 + static_cast<int>(rng.uniform(static_cast<uint64_t>(dim - 1)));
    const int rm = 1 + static_cast<int>(rng.uniform(static_cast<uint64_t>(dim - 1)));
    const CMat P = random_projector(dim, rp, rng);
    const CMat M = random_projector(dim, rm, rng);
    const JordanDecomposition jd = jordan_angles(P, M);
    max_err = std::max({max_err, (jd.reconstruct_P() - P).norm(), (jd.reconstruct_M() - M).norm()});
    if (angles_lemma_check(P, M, random_density(dim, rng), omega).holds) ++holds;
  }
  emit({{"dim", dim}, {"instances", instances}, {"max_reconstruction_error", max_err},
        {"angles_lemma_holds", holds}},
       "");
  return kExitOk;
}

int cmd_analyze_lambda(const ProfileOpts& po, double omega, int steps, double eps) {
  const Profile p = po.load();
  json table = json::array();
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    table.push_back({{"t", t}, {"lambda", lambda_curve(omega, t)}});
  }
  emit({{"omega", omega},
        {"table", table},
        {"rate_bound",
         {{"profile", p.name},
          {"gamma", p.gamma},
          {"kappa", p.kappa},
          {"eta", p.eta},
          {"p_test", p.p_test},
          {"eps", eps},
          {"value", rate_bound(omega, p.gamma, p.kappa, p.eta, p.p_test, eps)}}}},
       "");
  return kExitOk;
}

int cmd_extract(const std::string& in, const std::string& transcript, uint64_t seed,
                size_t out_len, double rate, const std::string& out) {
  BitString bits;
  if (!transcript.empty() == !in.empty()) throw ConfigError("extract needs exactly one of --in or --transcript");
  if (!transcript.empty()) {
    try {
      bits = output_bits(transcript_from_jsonl(read_file(transcript)));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else {
    try {
      bits = bits_from_hex(read_file(in));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (bits.empty()) throw ConfigError("no input bits");
  const size_t n_out = out_len ? out_len : extractor_output_length(rate, bits.size());
  if (n_out == 0 || n_out > bits.size())
    throw ConfigError("output length " + std::to_string(n_out) + " does not fit " +
                      std::to_string(bits.size()) + " input bits");
  Rng rng = substream(seed, "extractor", 0, 0);
  const ToeplitzSeed ts = ToeplitzSeed::random(bits.size(), n_out, rng);
  const BitString y = toeplitz_extract(ts, bits);
  if (!out.empty()) write_file(out, bits_to_hex(y));
  std::vector<uint64_t> sym(bits.begin(), bits.end());
  emit({{"n_in", bits.size()},
        {"n_out", n_out},
        {"input_min_entropy_per_bit", empirical_min_entropy(sym)},
        {"monobit_p", monobit_p_value(y)},
        {"runs_p", runs_p_value(y)},
        {"seed_sha256", sha256_hex(bits_to_hex(ts.bits))}},
       "");
  return kExitOk;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"LWE-based NTCF toolkit: keys, protocol runs, analysis and extraction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ntcfrand 0.1.0");

  ProfileOpts prof;
  bool all = false;
  auto* profile_cmd = app.add_subcommand("profile", "Print a profile and its parameter conditions");
  prof.add(profile_cmd);
  profile_cmd->add_flag("--all", all, "Print every shipped profile");

  uint64_t kg_seed = 1, kg_session = 0, kg_epoch = 0;
  std::string kg_pub, kg_sec;
  auto* keygen = app.add_subcommand("keygen", "Generate a key pair");
  prof.add(keygen);
  keygen->add_option("--seed", kg_seed);
  keygen->add_option("--session", kg_session);
  keygen->add_option("--epoch", kg_epoch);
  keygen->add_option("--public", kg_pub, "Output path for the public key");
  keygen->add_option("--secret", kg_sec, "Output path for the secret key and trapdoor");

  RunOpts ro;
  auto add_run = [&](CLI::App* c, bool verifier) {
    ro.profile.add(c);
    c->add_option("--seed", ro.seed, "Master seed");
    c->add_option("--session", ro.session);
    if (verifier) {
      c->add_option("--mode", ro.mode)->check(CLI::IsMember({"protocol1", "protocol2", "single-round"}));
      c->add_option("--rerequest-cap", ro.rerequest_cap);
      c->add_option("--transcript", ro.transcript, "Transcript JSONL output path");
      c->add_option("--summary", ro.summary, "Summary JSON path (default stdout)");
      c->add_option("--output-bits", ro.bits, "Output bits as hex lines");
    }
  };
  auto add_prover = [&](CLI::App* c) {
    c->add_option("--prover", ro.prover,
                  "ideal, qsim-micro, classical-committed, classical-random, classical-replay, "
                  "device, always-accept");
    c->add_option("--prover-seed", ro.prover_seed, "Prover randomness seed (default --seed)");
    c->add_flag("--no-condition-d", ro.no_condition_d, "Ideal prover: draw d without conditioning");
    c->add_option("--device", ro.device, "Simplified device JSON for the device prover");
  };

  auto* run = app.add_subcommand("run", "Run a protocol locally");
  add_run(run, true);
  add_prover(run);
  run->add_option("--trials", ro.trials, "Single-round trials");
  run->add_option("--sessions", ro.sessions, "Independent sessions");
  run->add_option("--threads", ro.threads, "Worker threads for sessions");

  NetOpts net;
  auto add_net = [&](CLI::App* c) {
    c->add_option("--port", net.port);
    c->add_option("--port-file", net.port_file);
    c->add_flag("--stdio", net.stdio, "Use stdin/stdout instead of TCP");
  };
  auto* serve = app.add_subcommand("serve", "Run the verifier against a remote prover");
  add_run(serve, true);
  add_net(serve);
  auto* connect = app.add_subcommand("connect", "Run a prover against a remote verifier");
  connect->add_option("--seed", ro.seed, "Key-schedule seed (ideal prover)");
  add_prover(connect);
  add_net(connect);
  connect->add_option("--host", net.host);
  connect->add_option("--timeout", net.timeout, "Seconds to wait for the verifier");

  auto* analyze = app.add_subcommand("analyze", "Analysis reports");
  analyze->require_subcommand(1);
  uint64_t a_q = 5, a_samples = 1000, a_dhat = 10, a_seed = 1, a_trials = 1000, a_inst = 100;
  size_t a_l = 1, a_n = 16;
  int a_dim = 16, a_steps = 16;
  double a_omega = 0.75, a_eps = 0.01;
  std::string a_adv = "random", a_dev;
  ProfileOpts a_prof;
  auto* moderate = analyze->add_subcommand("moderate", "Moderate-matrix scan");
  moderate->add_option("--q", a_q);
  moderate->add_option("--l", a_l);
  moderate->add_option("--n", a_n);
  moderate->add_option("--samples", a_samples);
  moderate->add_option("--dhat", a_dhat, "Random parity vectors per moderate matrix");
  moderate->add_option("--seed", a_seed);
  auto* hardcore = analyze->add_subcommand("hardcore", "Adaptive hardcore-bit game");
  a_prof.add(hardcore);
  hardcore->add_option("--adversary", a_adv, "random or zero");
  hardcore->add_option("--trials", a_trials);
  hardcore->add_option("--seed", a_seed);
  auto* device = analyze->add_subcommand("device", "Overlap and Jordan angles of a device");
  device->add_option("--device", a_dev);
  device->add_option("--omega", a_omega);
  auto* jordan = analyze->add_subcommand("jordan", "Jordan decomposition on random projectors");
  jordan->add_option("--dim", a_dim);
  jordan->add_option("--instances", a_inst);
  jordan->add_option("--omega", a_omega);
  jordan->add_option("--seed", a_seed);
  auto* lambda = analyze->add_subcommand("lambda", "Entropy-rate curve and rate bound");
  a_prof.add(lambda);
  lambda->add_option("--omega", a_omega);
  lambda->add_option("--steps", a_steps);
  lambda->add_option("--eps", a_eps);

  std::string x_in, x_transcript, x_out;
  uint64_t x_seed = 1;
  size_t x_len = 0;
  double x_rate = 1.0;
  auto* extract = app.add_subcommand("extract", "Toeplitz extraction of output bits");
  extract->add_option("--in", x_in, "Hex bit file");
  extract->add_option("--transcript", x_transcript, "Take the output bits of a transcript");
  extract->add_option("--seed", x_seed, "Extractor seed");
  extract->add_option("--out-len", x_len, "Output length (default from --rate)");
  extract->add_option("--rate", x_rate, "Min-entropy rate per input bit");
  extract->add_option("--out", x_out, "Hex output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (*profile_cmd) return cmd_profile(prof, all);
  if (*keygen) return cmd_keygen(prof, kg_seed, kg_session, kg_epoch, kg_pub, kg_sec);
  if (*run) return cmd_run(ro);
  if (*serve) return cmd_serve(ro, net);
  if (*connect) return cmd_connect(ro, net);
  if (*moderate) return cmd_analyze_moderate(a_q, a_l, a_n, a_samples, a_dhat, a_seed);
  if (*hardcore) return cmd_analyze_hardcore(a_prof, a_adv, a_trials, a_seed);
  if (*device) return cmd_analyze_device(a_dev, a_omega);
  if (*jordan) return cmd_analyze_jordan(a_dim, a_inst, a_omega, a_seed);
  if (*lambda) return cmd_analyze_lambda(a_prof, a_omega, a_steps, a_eps);
  if (*extract) return cmd_extract(x_in, x_transcript, x_seed, x_len, x_rate, x_out);
  return kExitUsage;
}

}  // namespace

int run_cli(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const ConfigError& e) {
    log(LogLevel::kError, std::string("config: ") + e.what());
    return kExitConfig;
  } catch (const IoError& e) {
    log(LogLevel::kError, std::string("io: ") + e.what());
    return kExitIo;
  } catch (const ProtocolViolation& e) {
    log(LogLevel::kError, std::string("protocol violation: ") + e.what());
    return kExitProtocol;
  } catch (const GuardExceeded& e) {
    log(LogLevel::kError, std::string("guard exceeded: ") + e.what());
    return kExitGuard;
  } catch (const std::filesystem::filesystem_error& e) {
    log(LogLevel::kError, std::string("io: ") + e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    log(LogLevel::kError, std::string("config: ") + e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    log(LogLevel::kError, e.what());
    return kExitFailure;
  }
}

}  // namespace ntcfrand::cli
