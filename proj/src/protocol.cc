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

#include "ntcfrand/protocol.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ntcfrand/errors.h"
#include "ntcfrand/gauss.h"

namespace ntcfrand {

using nlohmann::json;

namespace {

constexpr double kThresholdTol = 1e-9;
constexpr int kConditionTries = 4096;

std::optional<ModVec> parse_vec(const json& j, const ModRing& ring, size_t len) {
  try {
    ModVec v = vec_from_json(j);
    if (!(v.ring() == ring) || v.size() != len) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<int> field_int(const json& msg, const char* key, int max) {
  if (!msg.is_object()) return std::nullopt;
  auto it = msg.find(key);
  if (it == msg.end() || !it->is_number_integer()) return std::nullopt;
  const int64_t v = it->get<int64_t>();
  if (v < 0 || v > max) return std::nullopt;
  return static_cast<int>(v);
}

bool has_type(const json& msg, const char* type) {
  return msg.is_object() && msg.contains("type") && msg["type"] == type;
}

const json& field(const json& msg, const char* key) {
  static const json kNull;
  if (!msg.is_object()) return kNull;
  auto it = msg.find(key);
  return it == msg.end() ? kNull : *it;
}

BitString random_bits(size_t len, Rng& rng) {
  BitString d(len);
  for (auto& b : d) b = static_cast<uint8_t>(rng.bit());
  return d;
}

size_t equation_width(const Profile& p) {
  return p.n * static_cast<size_t>(ModRing(p.q).bits());
}

json preimage_answer(int b, const ModVec& x) {
  return {{"type", "answer_pre"}, {"b", b}, {"x", to_json(x)}};
}

json equation_answer(int u, const BitString& d) {
  return {{"type", "answer_eq"}, {"u", u}, {"d", bits_to_string(d)}};
}

json sample_message(const ModVec& y) { return {{"type", "sample"}, {"y", to_json(y)}}; }

bool same_key(const NtcfPublicKey& a, const NtcfPublicKey& b) {
  return a.A == b.A && a.u == b.u;
}

class IdealProver : public Prover {
 public:
  IdealProver(const KeySchedule& keys, uint64_t seed, uint64_t session, bool condition_d)
      : keys_(keys), rng_(substream(seed, "prover", session, 0)), condition_d_(condition_d) {}

  std::string name() const override { return "ideal"; }

  void on_key(uint64_t epoch, const NtcfPublicKey& pk) override {
    auto kp = keys_.key(epoch).first;
    if (!same_key(kp.pub, pk))
      throw ProtocolViolation("ideal prover: received key does not match the key schedule");
    key_ = std::move(kp);
  }

  json sample(uint64_t, int) override {
    if (!key_) throw ProtocolViolation("ideal prover: sample requested before any key");
    draw_ = ntcf_samp(key_->pub, key_->profile, rng_);
    return sample_message(draw_->y);
  }

  json answer(uint64_t, int c, std::optional<int>) override {
    if (!draw_) throw ProtocolViolation("ideal prover: challenge before sample");
    if (c == 1) return preimage_answer(draw_->b, draw_->x);
    const ModRing& ring = key_->pub.A.ring();
    const size_t w = equation_width(key_->profile);
    const auto x0 = ntcf_inv(*key_, 0, draw_->y);
    const auto x1 = ntcf_inv(*key_, 1, draw_->y);
    BitString d = random_bits(w, rng_);
    if (!x0 || !x1) return equation_answer(rng_.bit(), d);
    // G^ is empty for n = 1.
    if (condition_d_ && key_->profile.n >= 2) {
      for (int i = 1; i < kConditionTries && !in_Ghat(ring, *x0, *x1, d); ++i)
        d = random_bits(w, rng_);
    }
    return equation_answer(claw_parity(*x0, *x1, d), d);
  }

 private:
  KeySchedule keys_;
  Rng rng_;
  bool condition_d_;
  std::optional<NtcfKeyPair> key_;
  std::optional<SampleDraw> draw_;
};

class QsimProver : public Prover {
 public:
  QsimProver(const Profile& profile, uint64_t seed, uint64_t session)
      : profile_(profile), rng_(substream(seed, "prover", session, 0)) {
    double dim = 2;
    for (size_t i = 0; i < profile.n + profile.m; ++i) dim *= static_cast<double>(profile.q);
    if (dim > static_cast<double>(kStateGuard))
      throw GuardExceeded("qsim prover: state dimension exceeds 1e6");
  }

  std::string name() const override { return "qsim-micro"; }

  void on_key(uint64_t, const NtcfPublicKey& pk) override {
    state_ = prepare_samp(pk, profile_);
    collapsed_.reset();
  }

  json sample(uint64_t, int) override {
    if (!state_) throw ProtocolViolation("qsim prover: sample requested before any key");
    collapsed_ = measure_y(*state_, rng_);
    return sample_message(collapsed_->y);
  }

  json answer(uint64_t, int c, std::optional<int>) override {
    if (!collapsed_) throw ProtocolViolation("qsim prover: challenge before sample");
    if (c == 1) {
      auto [b, x] = measure_preimage(*collapsed_, rng_);
      return preimage_answer(b, x);
    }
    auto [u, d] = measure_equation(*collapsed_, rng_);
    return equation_answer(u, d);
  }

 private:
  Profile profile_;
  Rng rng_;
  std::optional<QState> state_;
  std::optional<Collapsed> collapsed_;
};

// Shared by the committed, random and replay baselines.
class ClassicalProver : public Prover {
 public:
  enum class Kind { kCommitted, kRandom, kReplay };

  ClassicalProver(Kind kind, const Profile& profile, uint64_t seed, uint64_t session)
      : kind_(kind), profile_(profile), rng_(substream(seed, "prover", session, 0)) {}

  std::string name() const override {
    switch (kind_) {
      case Kind::kCommitted: return "classical-committed";
      case Kind::kRandom: return "classical-random";
      case Kind::kReplay: return "classical-replay";
    }
    return "";
  }

  void on_key(uint64_t, const NtcfPublicKey& pk) override { pk_ = pk; }

  json sample(uint64_t, int) override {
    if (!pk_) throw ProtocolViolation("classical prover: sample requested before any key");
    if (kind_ == Kind::kReplay && y_) return sample_message(*y_);
    const ModRing& ring = pk_->A.ring();
    if (kind_ == Kind::kRandom) {
      y_ = ModVec::random(ring, profile_.m, rng_);
    } else {
      x_ = ModVec::random(ring, profile_.n, rng_);
      y_ = pk_->A * *x_ + TruncGaussian(ring, profile_.B_P).sample_vec(profile_.m, rng_);
    }
    return sample_message(*y_);
  }

  json answer(uint64_t, int c, std::optional<int>) override {
    if (kind_ == Kind::kReplay) {
      auto& slot = c == 1 ? replay_pre_ : replay_eq_;
      if (!slot) slot = fresh_answer(c);
      return *slot;
    }
    return fresh_answer(c);
  }

 private:
  json fresh_answer(int c) {
    const ModRing ring(profile_.q);
    if (c == 1) {
      if (kind_ == Kind::kRandom || !x_) {
        const int b = rng_.bit();
        return preimage_answer(b, ModVec::random(ring, profile_.n, rng_));
      }
      return preimage_answer(0, *x_);
    }
    const int u = rng_.bit();
    return equation_answer(u, random_bits(equation_width(profile_), rng_));
  }

  Kind kind_;
  Profile profile_;
  Rng rng_;
  std::optional<NtcfPublicKey> pk_;
  std::optional<ModVec> x_, y_;
  std::optional<json> replay_pre_, replay_eq_;
};

int born_outcome(const std::vector<CMat>& projectors, const CMat& rho, Rng& rng) {
  const double r = rng.uniform01();
  double acc = 0;
  for (size_t i = 0; i + 1 < projectors.size(); ++i) {
    acc += (projectors[i] * rho).trace().real();
    if (r < acc) return static_cast<int>(i);
  }
  return static_cast<int>(projectors.size()) - 1;
}

CMat project(const CMat& P, const CMat& rho) {
  CMat out = P * rho * P;
  const double tr = out.trace().real();
  return tr > 0 ? CMat(out / tr) : out;
}

class DeviceProver : public Prover {
 public:
  DeviceProver(SimplifiedDevice dev, uint64_t seed, uint64_t session)
      : dev_(std::move(dev)), rng_(substream(seed, "prover", session, 0)) {
    dev_.validate();
    for (const auto& phi : dev_.phi) weights_.push_back(phi.trace().real());
  }

  std::string name() const override { return "device"; }

  json answer(uint64_t, int c, std::optional<int> t) override {
    double total = 0;
    for (double w : weights_) total += w;
    double r = rng_.uniform01() * total;
    size_t y = 0;
    while (y + 1 < weights_.size() && r >= weights_[y]) r -= weights_[y++];
    CMat rho = dev_.phi[y] / weights_[y];
    if (c == 1) {
      const int v = born_outcome({dev_.Pi0[y], dev_.Pi1[y], dev_.Pi2(y)}, rho, rng_);
      return {{"type", "answer_pre"}, {"v", v}};
    }
    const std::vector<CMat> M = {dev_.M0[y], dev_.M1(y)};
    const int me = born_outcome(M, rho, rng_);
    // Outcome M^1 is the valid-equation report e = 1.
    json out = {{"type", "answer_eq"}, {"e", me}};
    if (t && *t == 1) {
      rho = project(M[me], rho);
      out["k"] = born_outcome({dev_.K0[y], dev_.K1(y)}, rho, rng_);
    }
    return out;
  }

 private:
  SimplifiedDevice dev_;
  Rng rng_;
  std::vector<double> weights_;
};

class AlwaysAcceptProver : public Prover {
 public:
  std::string name() const override { return "always-accept"; }
  json answer(uint64_t, int c, std::optional<int> t) override {
    if (c == 1) return {{"type", "answer_pre"}, {"v", 0}};
    json out = {{"type", "answer_eq"}, {"e", 1}};
    if (t && *t == 1) out["k"] = 0;
    return out;
  }
};

class RemoteProver : public Prover {
 public:
  explicit RemoteProver(LineChannel& ch) : ch_(ch) {}

  std::string name() const override { return remote_name_.empty() ? "remote" : remote_name_; }

  void on_hello(const json& hello) override {
    ch_.send(hello);
    const json reply = ch_.expect("hello");
    if (reply.contains("prover") && reply["prover"].is_string())
      remote_name_ = reply["prover"].get<std::string>();
  }

  void on_key(uint64_t epoch, const NtcfPublicKey& pk) override {
    ch_.send({{"type", "key"}, {"epoch", epoch}, {"pk", to_json(pk, profile_)}});
  }

  json sample(uint64_t round, int attempt) override {
    ch_.send({{"type", "sample"}, {"round", round}, {"attempt", attempt}});
    json reply = ch_.expect("sample");
    reply.erase("round");
    return reply;
  }

  json answer(uint64_t round, int c, std::optional<int> t) override {
    json msg = {{"type", "challenge"}, {"round", round}, {"c", c}, {"t", nullptr}};
    if (t) msg["t"] = *t;
    ch_.send(msg);
    json reply = ch_.recv();
    reply.erase("round");
    return reply;
  }

  void on_decision(const json& decision) override {
    ch_.send(decision);
    ch_.expect("final");
  }

  void set_profile(const Profile& p) { profile_ = p; }

 private:
  LineChannel& ch_;
  Profile profile_;
  std::string remote_name_;
};

struct Image {
  std::optional<ModVec> y;
  std::optional<ModVec> x0, x1;
  int attempts = 0;
  std::string failure;
};

Image obtain_image(Prover& prover, const NtcfKeyPair& key, uint64_t round, int cap) {
  Image img;
  const ModRing& ring = key.pub.A.ring();
  for (int attempt = 0; attempt < cap; ++attempt) {
    img.attempts = attempt + 1;
    const json msg = prover.sample(round, attempt);
    auto y = has_type(msg, "sample") ? parse_vec(field(msg, "y"), ring, key.profile.m)
                                     : std::nullopt;
    if (!y) {
      img.failure = "invalid-sample";
      continue;
    }
    auto x0 = ntcf_inv(key, 0, *y);
    if (!x0) {
      img.failure = "inversion-failed";
      continue;
    }
    img.x1 = ntcf_inv(key, 1, *y);
    img.x0 = std::move(x0);
    img.y = std::move(y);
    img.failure.clear();
    return img;
  }
  return img;
}

struct Score {
  int W = 0;
  std::optional<int> b;
  bool outside_ghat = false;
  std::string note;
};

Score score_protocol1(const NtcfKeyPair& key, const Image& img, int c, const json& ans,
                      Rng& coin) {
  Score s;
  if (!img.y) {
    s.note = img.failure;
    return s;
  }
  const ModRing& ring = key.pub.A.ring();
  if (c == 1) {
    const auto b = field_int(ans, "b", 1);
    const auto x = parse_vec(field(ans, "x"), ring, key.profile.n);
    if (!has_type(ans, "answer_pre") || !b || !x) {
      s.note = "malformed-answer";
      return s;
    }
    s.b = *b;
    s.W = ntcf_chk(key.pub, key.profile, *b, *x, *img.y);
    return s;
  }
  const auto u = field_int(ans, "u", 1);
  const auto d = bits_from_string(field(ans, "d"), equation_width(key.profile));
  if (!has_type(ans, "answer_eq") || !u || !d) {
    s.note = "malformed-answer";
    return s;
  }
  if (!in_Ghat(ring, *img.x0, *img.x1, *d)) {
    s.outside_ghat = true;
    s.W = coin.bit();
    return s;
  }
  s.W = claw_parity(*img.x0, *img.x1, *d) == *u ? 1 : 0;
  return s;
}

json hello_message(const std::string& protocol, const Profile& profile, uint64_t session) {
  return {{"type", "hello"}, {"fmt", 1}, {"protocol", protocol}, {"N", profile.N},
          {"profile", to_json(profile)}, {"session", session}};
}

json decision_message(const Transcript& t) {
  return {{"type", "decision"}, {"accept", t.accept}, {"threshold", t.threshold},
          {"test_sum", t.test_sum}};
}

void require_runnable(const Profile& p) {
  if (!p.runnable) throw ConfigError("profile '" + p.name + "' is print-only");
  p.validate();
}

}  // namespace

std::string bits_to_string(const BitString& bits) {
  std::string s(bits.size(), '0');
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) s[i] = '1';
  return s;
}

std::optional<BitString> bits_from_string(const json& j, size_t len) {
  if (!j.is_string()) return std::nullopt;
  const auto& s = j.get_ref<const std::string&>();
  if (s.size() != len) return std::nullopt;
  BitString out(len);
  for (size_t i = 0; i < len; ++i) {
    if (s[i] != '0' && s[i] != '1') return std::nullopt;
    out[i] = s[i] == '1';
  }
  return out;
}

KeySchedule::KeySchedule(Profile profile, uint64_t seed, uint64_t session, std::string label)
    : profile_(std::move(profile)), seed_(seed), session_(session), label_(std::move(label)) {}

std::pair<NtcfKeyPair, uint64_t> KeySchedule::key(uint64_t epoch) const {
  Rng rng = substream(seed_, label_, session_, epoch);
  NtcfKeyPair kp = ntcf_gen(profile_, rng);
  return {std::move(kp), rng.draws()};
}

std::unique_ptr<Prover> make_ideal_prover(const KeySchedule& keys, uint64_t seed,
                                          uint64_t session, bool condition_d) {
  return std::make_unique<IdealProver>(keys, seed, session, condition_d);
}

std::unique_ptr<Prover> make_qsim_prover(const Profile& profile, uint64_t seed, uint64_t session) {
  return std::make_unique<QsimProver>(profile, seed, session);
}

std::unique_ptr<Prover> make_committed_prover(const Profile& profile, uint64_t seed,
                                              uint64_t session) {
  return std::make_unique<ClassicalProver>(ClassicalProver::Kind::kCommitted, profile, seed,
                                           session);
}

std::unique_ptr<Prover> make_random_prover(const Profile& profile, uint64_t seed, uint64_t session) {
  return std::make_unique<ClassicalProver>(ClassicalProver::Kind::kRandom, profile, seed, session);
}

std::unique_ptr<Prover> make_replay_prover(const Profile& profile, uint64_t seed, uint64_t session) {
  return std::make_unique<ClassicalProver>(ClassicalProver::Kind::kReplay, profile, seed, session);
}

std::unique_ptr<Prover> make_device_prover(SimplifiedDevice dev, uint64_t seed, uint64_t session) {
  return std::make_unique<DeviceProver>(std::move(dev), seed, session);
}

std::unique_ptr<Prover> make_always_accept_prover() {
  return std::make_unique<AlwaysAcceptProver>();
}

std::unique_ptr<Prover> make_remote_prover(LineChannel& channel) {
  return std::make_unique<RemoteProver>(channel);
}

std::vector<int> Transcript::output() const {
  std::vector<int> out;
  for (const auto& r : rounds)
    if (r.G == 1) out.push_back(r.O);
  return out;
}

double protocol1_threshold(const Profile& p) {
  return (1 - p.gamma) * p.p_test * static_cast<double>(p.N);
}

double protocol2_threshold(const Profile& p) {
  return (1 - p.gamma / p.kappa - p.eta) * p.kappa * p.p_test * static_cast<double>(p.N);
}

Transcript run_protocol1(const Profile& profile, Prover& prover, uint64_t seed, uint64_t session,
                         const ProtocolOptions& opts) {
  require_runnable(profile);
  if (opts.rerequest_cap < 1) throw ConfigError("re-request cap must be positive");
  if (auto* remote = dynamic_cast<RemoteProver*>(&prover)) remote->set_profile(profile);

  Transcript t;
  t.protocol = "protocol1";
  t.profile = profile;
  t.seed = seed;
  t.session = session;
  t.threshold = protocol1_threshold(profile);

  const KeySchedule keys(profile, seed, session);
  uint64_t epoch = 0;
  auto install_key = [&]() {
    auto [kp, words] = keys.key(epoch);
    t.budget.key_words += words;
    t.keys.push_back(to_json(kp.pub, profile));
    prover.on_key(epoch, kp.pub);
    return std::move(kp);
  };

  prover.on_hello(hello_message(t.protocol, profile, session));
  NtcfKeyPair key = install_key();

  for (uint64_t i = 0; i < profile.N; ++i) {
    RoundRecord r;
    r.index = i;
    r.key_epoch = epoch;
    const Image img = obtain_image(prover, key, i, opts.rerequest_cap);
    r.attempts = img.attempts;
    r.y = img.y ? to_json(*img.y) : json(nullptr);

    Rng vr = substream(seed, "verifier", session, i);
    r.G = vr.bernoulli(profile.p_test) ? 0 : 1;
    r.C = r.G == 0 ? vr.bit() : 1;
    const uint64_t challenge_words = vr.draws();
    t.budget.challenge_words += challenge_words;

    r.answer = prover.answer(i, r.C, std::nullopt);
    const Score s = score_protocol1(key, img, r.C, r.answer, vr);
    t.budget.coin_words += vr.draws() - challenge_words;
    r.W = s.W;
    r.note = s.outside_ghat ? "d-outside-ghat" : s.note;

    if (r.G == 1) {
      r.O = r.W == 1 ? *s.b : 2;
    } else {
      t.test_sum += static_cast<uint64_t>(r.W);
    }
    t.rounds.push_back(std::move(r));
    if (t.rounds.back().G == 0) {
      ++epoch;
      key = install_key();
    }
  }
  t.accept = transcript_accepts(t);
  prover.on_decision(decision_message(t));
  return t;
}

Transcript run_protocol2(const Profile& profile, Prover& prover, uint64_t seed, uint64_t session) {
  require_runnable(profile);
  Transcript t;
  t.protocol = "protocol2";
  t.profile = profile;
  t.seed = seed;
  t.session = session;
  t.threshold = protocol2_threshold(profile);
  prover.on_hello(hello_message(t.protocol, profile, session));

  for (uint64_t i = 0; i < profile.N; ++i) {
    RoundRecord r;
    r.index = i;
    r.y = nullptr;
    Rng vr = substream(seed, "verifier", session, i);
    r.G = vr.bernoulli(profile.p_test) ? 0 : 1;
    int sent_t = 0;
    if (r.G == 0) {
      r.C = vr.bit();
      r.T = vr.bernoulli(profile.kappa) ? 1 : 0;
      sent_t = *r.T;
    } else {
      r.C = 1;
    }
    t.budget.challenge_words += vr.draws();

    r.answer = prover.answer(i, r.C, sent_t);
    if (r.C == 1) {
      const auto v = field_int(r.answer, "v", 2);
      if (has_type(r.answer, "answer_pre") && v) {
        r.W = *v <= 1 ? 1 : 0;
        if (r.G == 1) r.O = *v;
      } else {
        r.note = "malformed-answer";
        if (r.G == 1) r.O = 2;
      }
    } else {
      const auto e = field_int(r.answer, "e", 1);
      const auto k = sent_t == 1 ? field_int(r.answer, "k", 1) : std::optional<int>(0);
      if (has_type(r.answer, "answer_eq") && e && k) {
        if (sent_t == 1) {
          r.K = *k;
          r.W = *e * (1 - *k);
        } else {
          r.W = *e;
        }
      } else {
        r.note = "malformed-answer";
      }
    }
    if (r.G == 0 && r.T == 1) t.test_sum += static_cast<uint64_t>(r.W);
    t.rounds.push_back(std::move(r));
  }
  t.accept = transcript_accepts(t);
  prover.on_decision(decision_message(t));
  return t;
}

bool transcript_accepts(const Transcript& t) {
  uint64_t sum = 0, counted = 0;
  if (t.protocol == "protocol1") {
    for (const auto& r : t.rounds)
      if (r.G == 0) sum += static_cast<uint64_t>(r.W), ++counted;
    return static_cast<double>(sum) + kThresholdTol >= protocol1_threshold(t.profile);
  }
  if (t.protocol == "protocol2") {
    for (const auto& r : t.rounds)
      if (r.G == 0 && r.T == 1) sum += static_cast<uint64_t>(r.W), ++counted;
    // No T = 1 rounds: nothing was audited, reject.
    if (counted == 0) return false;
    return static_cast<double>(sum) + kThresholdTol >= protocol2_threshold(t.profile);
  }
  throw std::invalid_argument("transcript: unknown protocol '" + t.protocol + "'");
}

namespace {

json round_json(const RoundRecord& r) {
  json j = {{"kind", "round"}, {"i", r.index}, {"G", r.G}, {"C", r.C}, {"y", r.y},
            {"answer", r.answer}, {"W", r.W}, {"epoch", r.key_epoch}, {"attempts", r.attempts}};
  if (r.T) j["T"] = *r.T;
  if (r.O >= 0) j["O"] = r.O;
  if (r.K) j["K"] = *r.K;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

RoundRecord round_from_json(const json& j) {
  RoundRecord r;
  r.index = j.at("i").get<uint64_t>();
  r.G = j.at("G").get<int>();
  r.C = j.at("C").get<int>();
  r.y = j.at("y");
  r.answer = j.at("answer");
  r.W = j.at("W").get<int>();
  r.key_epoch = j.at("epoch").get<uint64_t>();
  r.attempts = j.at("attempts").get<int>();
  if (j.contains("T")) r.T = j["T"].get<int>();
  if (j.contains("O")) r.O = j["O"].get<int>();
  if (j.contains("K")) r.K = j["K"].get<int>();
  if (j.contains("note")) r.note = j["note"].get<std::string>();
  return r;
}

json key_json(uint64_t epoch, const json& pk) {
  return {{"kind", "key"}, {"epoch", epoch}, {"pk", pk}};
}

}  // namespace

std::string transcript_jsonl(const Transcript& t) {
  std::ostringstream os;
  os << json{{"fmt", 1}, {"kind", "header"}, {"protocol", t.protocol},
             {"profile", to_json(t.profile)}, {"seed", t.seed}, {"session", t.session}}
            .dump()
     << '\n';
  size_t next_key = 0;
  if (next_key < t.keys.size()) {
    os << key_json(next_key, t.keys[next_key]).dump() << '\n';
    ++next_key;
  }
  for (const auto& r : t.rounds) {
    os << round_json(r).dump() << '\n';
    if (t.protocol == "protocol1" && r.G == 0 && next_key < t.keys.size()) {
      os << key_json(next_key, t.keys[next_key]).dump() << '\n';
      ++next_key;
    }
  }
  std::vector<int> out = t.output();
  std::string out_str;
  for (int o : out) out_str += static_cast<char>('0' + o);
  os << json{{"kind", "final"},
             {"accept", t.accept},
             {"threshold", t.threshold},
             {"test_sum", t.test_sum},
             {"output", out_str},
             {"budget",
              {{"key_words", t.budget.key_words},
               {"challenge_words", t.budget.challenge_words},
               {"coin_words", t.budget.coin_words},
               {"bits", t.budget.bits()}}}}
            .dump()
     << '\n';
  return os.str();
}

Transcript transcript_from_jsonl(const std::string& text) {
  Transcript t;
  std::istringstream is(text);
  std::string line;
  bool header = false, final_seen = false;
  try {
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "header") {
        if (j.at("fmt").get<int>() != 1) throw std::invalid_argument("unsupported transcript fmt");
        t.protocol = j.at("protocol").get<std::string>();
        t.profile = profile_from_json(j.at("profile"));
        t.seed = j.at("seed").get<uint64_t>();
        t.session = j.at("session").get<uint64_t>();
        header = true;
      } else if (kind == "key") {
        if (j.at("epoch").get<uint64_t>() != t.keys.size())
          throw std::invalid_argument("key epochs out of order");
        t.keys.push_back(j.at("pk"));
      } else if (kind == "round") {
        t.rounds.push_back(round_from_json(j));
      } else if (kind == "final") {
        t.accept = j.at("accept").get<bool>();
        t.threshold = j.at("threshold").get<double>();
        t.test_sum = j.at("test_sum").get<uint64_t>();
        const json& b = j.at("budget");
        t.budget.key_words = b.at("key_words").get<uint64_t>();
        t.budget.challenge_words = b.at("challenge_words").get<uint64_t>();
        t.budget.coin_words = b.at("coin_words").get<uint64_t>();
        final_seen = true;
      } else {
        throw std::invalid_argument("unknown record kind '" + kind + "'");
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("transcript: ") + e.what());
  }
  if (!header || !final_seen) throw std::invalid_argument("transcript: missing header or final line");
  return t;
}

KeySchedule single_round_keys(const Profile& profile, uint64_t seed) {
  return KeySchedule(profile, seed, 0, "single-round");
}

SingleRoundReport single_round_test(const Profile& profile, Prover& prover, uint64_t trials,
                                    uint64_t seed) {
  require_runnable(profile);
  const KeySchedule keys = single_round_keys(profile, seed);
  SingleRoundReport rep;
  for (uint64_t i = 0; i < trials; ++i) {
    const NtcfKeyPair key = keys.key(i).first;
    prover.on_key(i, key.pub);
    const Image img = obtain_image(prover, key, i, ProtocolOptions{}.rerequest_cap);
    Rng vr = substream(seed, "single-round-verifier", 0, i);
    const int c = vr.bit();
    const json ans = prover.answer(i, c, std::nullopt);
    const Score s = score_protocol1(key, img, c, ans, vr);
    ++rep.trials;
    rep.successes += static_cast<uint64_t>(s.W);
    if (c == 0) {
      ++rep.equation_trials;
      rep.equation_successes += static_cast<uint64_t>(s.W);
      if (s.outside_ghat) ++rep.d_outside_ghat;
    } else {
      ++rep.preimage_trials;
      rep.preimage_successes += static_cast<uint64_t>(s.W);
    }
  }
  rep.rate = wilson(rep.successes, rep.trials);
  return rep;
}

void serve_prover(LineChannel& channel, const ProverFactory& make) {
  const json hello = channel.expect("hello");
  std::unique_ptr<Prover> prover = make(hello);
  channel.send({{"type", "hello"}, {"prover", prover->name()}});
  for (;;) {
    const json msg = channel.recv();
    const std::string type = msg["type"].get<std::string>();
    try {
      if (type == "key") {
        prover->on_key(msg.at("epoch").get<uint64_t>(), public_key_from_json(msg.at("pk")));
      } else if (type == "sample") {
        json reply = prover->sample(msg.at("round").get<uint64_t>(), msg.at("attempt").get<int>());
        reply["round"] = msg.at("round");
        channel.send(reply);
      } else if (type == "challenge") {
        std::optional<int> t;
        if (!msg.at("t").is_null()) t = msg["t"].get<int>();
        json reply = prover->answer(msg.at("round").get<uint64_t>(), msg.at("c").get<int>(), t);
        reply["round"] = msg.at("round");
        channel.send(reply);
      } else if (type == "decision") {
        prover->on_decision(msg);
        channel.send({{"type", "final"}});
        return;
      } else {
        throw ProtocolViolation("unexpected message type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw ProtocolViolation(std::string("malformed '") + type + "' message: " + e.what());
    }
  }
}

}  // namespace ntcfrand
