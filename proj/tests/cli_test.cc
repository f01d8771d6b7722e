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


#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "ntcfrand/extract.h"
#include "ntcfrand/ntcf.h"
#include "ntcfrand/protocol.h"

namespace ntcfrand {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kTool = NTCFRAND_TOOL_PATH;

struct Result {
  int rc;
  std::string out;
};

// Runs a shell command line with the tool substituted for "@"; stderr is
// discarded.
Result sh(const std::string& line) {
  std::string cmd;
  for (char ch : line) cmd += ch == '@' ? "'" + kTool + "'" : std::string(1, ch);
  cmd = "( " + cmd + " ) 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("popen failed");
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ntcfrand_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, SingleRoundCommittedRate) {
  const Result r = sh("@ run --mode single-round --prover classical-committed --trials 10000 --seed 7 --profile desk-small");
  ASSERT_EQ(r.rc, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("trials"), 10000);
  EXPECT_NEAR(j.at("rate").get<double>(), 0.75, 0.02);
}

TEST_F(Cli, IdealProtocolOneAccepts) {
  const Result r = sh("@ run --mode protocol1 --prover ideal --profile desk-small --seed 1");
  ASSERT_EQ(r.rc, 0);
  const json j = json::parse(r.out);
  EXPECT_TRUE(j.at("accept").get<bool>());
  EXPECT_EQ(j.at("test_pass_rate").get<double>(), 1.0);
  EXPECT_EQ(j.at("output_length"), j.at("generation_rounds"));
}

TEST_F(Cli, DeterministicTranscripts) {
  const std::string base = "@ run --mode protocol1 --prover classical-committed --profile desk-small ";
  ASSERT_EQ(sh(base + "--seed 5 --transcript " + path("a.jsonl")).rc, 0);
  ASSERT_EQ(sh(base + "--seed 5 --transcript " + path("b.jsonl")).rc, 0);
  ASSERT_EQ(sh(base + "--seed 6 --transcript " + path("c.jsonl")).rc, 0);
  const std::string a = slurp(path("a.jsonl"));
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(path("b.jsonl")));
  EXPECT_NE(a, slurp(path("c.jsonl")));
  const Transcript t = transcript_from_jsonl(a);
  EXPECT_EQ(t.seed, 5u);
  EXPECT_EQ(json::parse(a.substr(0, a.find('\n'))).at("fmt"), 1);
}

TEST_F(Cli, SessionsMatchSingleRuns) {
  const std::string base = "@ run --mode protocol1 --prover ideal --profile desk-small --seed 3 ";
  ASSERT_EQ(sh(base + "--sessions 2 --threads 2 --transcript " + path("t.jsonl")).rc, 0);
  ASSERT_EQ(sh(base + "--session 1 --transcript " + path("one.jsonl")).rc, 0);
  EXPECT_EQ(slurp(path("t.jsonl.1")), slurp(path("one.jsonl")));
  EXPECT_NE(slurp(path("t.jsonl.0")), slurp(path("t.jsonl.1")));
}

TEST_F(Cli, ServeConnectTcpMatchesLocal) {
  const std::string pf = path("port"), remote = path("remote.jsonl"), local = path("local.jsonl");
  const Result r = sh("@ serve --mode protocol1 --profile desk-small --seed 11 --port 0 --port-file " + pf +
                      " --transcript " + remote + " --summary " + path("s.json") +
                      " & @ connect --prover ideal --seed 11 --port-file " + pf +
                      " --timeout 30 >/dev/null; c=$?; wait $!; s=$?; exit $((c * 16 + s))");
  ASSERT_EQ(r.rc, 0);
  ASSERT_EQ(sh("@ run --mode protocol1 --prover ideal --profile desk-small --seed 11 --transcript " + local).rc, 0);
  const std::string a = slurp(remote);
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(local));
}

TEST_F(Cli, ServeConnectStdioMatchesLocal) {
  const std::string f1 = path("f1"), f2 = path("f2"), remote = path("remote.jsonl"), local = path("local.jsonl");
  const Result r = sh("mkfifo " + f1 + " " + f2 +
                      " && { @ serve --stdio --mode protocol2 --profile desk-small --seed 12 --transcript " +
                      remote + " < " + f1 + " > " + f2 + " & } && @ connect --stdio --prover device --seed 12 > " +
                      f1 + " < " + f2 + "; c=$?; wait; exit $c");
  ASSERT_EQ(r.rc, 0);
  ASSERT_EQ(sh("@ run --mode protocol2 --prover device --profile desk-small --seed 12 --transcript " + local).rc, 0);
  const std::string a = slurp(remote);
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(local));
}

TEST_F(Cli, DistinctExitCodes) {
  EXPECT_EQ(sh("@ run --no-such-flag").rc, 2);
  EXPECT_EQ(sh("@ run --profile no-such-profile").rc, 3);
  EXPECT_EQ(sh("@ run --profile desk-small --transcript " + path("missing/dir/t.jsonl")).rc, 4);
  EXPECT_EQ(sh("echo '{\"type\":\"nonsense\"}' | @ connect --stdio --seed 1").rc, 5);
  EXPECT_EQ(sh("@ analyze moderate --q 1009 --l 2 --n 4").rc, 6);
  EXPECT_EQ(sh("@ run --mode protocol1 --prover ideal --profile paper-shape").rc, 3);
}

TEST_F(Cli, KeygenFiles) {
  const std::string pub = path("pk.json"), sec = path("sk.json");
  ASSERT_EQ(sh("@ keygen --profile desk-small --seed 3 --public " + pub + " --secret " + sec).rc, 0);
  const json pj = json::parse(slurp(pub)), sj = json::parse(slurp(sec));
  const NtcfKeyPair key = keypair_from_json(pj, sj);
  EXPECT_TRUE(key.trap.has_value());
  EXPECT_EQ(key.pub.u, key.pub.A * key.s + key.e);
  // The public file carries no secret material.
  EXPECT_FALSE(pj.contains("s"));
  EXPECT_FALSE(pj.contains("trapdoor"));
  // Same as the first key of the protocol key schedule.
  const auto scheduled = KeySchedule(profile_by_name("desk-small"), 3, 0).key(0).first;
  EXPECT_EQ(scheduled.pub.u, key.pub.u);
}

TEST_F(Cli, ProfileReport) {
  const Result r = sh("@ profile --profile desk-small");
  ASSERT_EQ(r.rc, 0);
  const json j = json::parse(r.out);
  EXPECT_TRUE(j.contains("conditions"));
  EXPECT_TRUE(j.at("insecure").get<bool>());
  const Result all = sh("@ profile --all");
  ASSERT_EQ(all.rc, 0);
  EXPECT_NE(all.out.find("paper-shape"), std::string::npos);
}

TEST_F(Cli, ExtractFromTranscript) {
  const std::string t = path("t.jsonl"), bits = path("bits.hex"), out = path("ex.hex");
  ASSERT_EQ(sh("@ run --mode protocol1 --prover ideal --profile desk-small --seed 1 --transcript " + t +
               " --output-bits " + bits).rc,
            0);
  const Result a = sh("@ extract --transcript " + t + " --seed 5 --out-len 100 --out " + out);
  ASSERT_EQ(a.rc, 0);
  EXPECT_EQ(json::parse(a.out).at("n_out"), 100);
  EXPECT_EQ(bits_from_hex(slurp(out)).size(), 100u);
  const std::string first = slurp(out);
  ASSERT_EQ(sh("@ extract --in " + bits + " --seed 5 --out-len 100 --out " + out).rc, 0);
  EXPECT_EQ(slurp(out), first);
  EXPECT_EQ(sh("@ extract --in " + path("missing.hex") + " --seed 5 --out-len 10").rc, 4);
}

TEST_F(Cli, AnalyzeReports) {
  const json dev = json::parse(sh("@ analyze device").out);
  EXPECT_NEAR(dev.at("overlap").get<double>(), 0.5, 1e-9);
  const json lam = json::parse(sh("@ analyze lambda --omega 0.75 --steps 8").out);
  EXPECT_TRUE(lam.contains("rate_bound"));
  const json hc = json::parse(sh("@ analyze hardcore --profile desk-small --trials 500 --adversary zero").out);
  // Constant c = 0 guesses: no advantage beyond sampling error.
  EXPECT_EQ(hc.at("advantage_ci")[0].get<double>(), 0.0);
  const json jd = json::parse(sh("@ analyze jordan --dim 8 --instances 5").out);
  EXPECT_LE(jd.at("max_reconstruction_error").get<double>(), 1e-8);
  const Result mod = sh("@ analyze moderate --q 5 --l 1 --n 16 --samples 200");
  ASSERT_EQ(mod.rc, 0);
  EXPECT_NO_THROW(json::parse(mod.out));
}

}  // namespace
}  // namespace ntcfrand
