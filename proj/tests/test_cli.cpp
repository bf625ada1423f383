#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "lgdda/lgdda.hpp"

using namespace lgdda;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Outcome run(const std::vector<std::string>& args) {
  std::string cmd = quote(LGDDA_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string(LGDDA_DATA_DIR) + "/" + name; }

std::string temp(const std::string& name) { return ::testing::TempDir() + "lgdda_" + name; }

json read(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

}  // namespace

TEST(Cli, ValidMonotoneBelief) {
  Outcome r = run({"valid", "B{1,3}p -> B{1,1}p"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "valid\n");
  r = run({"valid", "B{1,1}p -> B{1,3}p"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "invalid\n");
}

TEST(Cli, SatExitCodes) {
  EXPECT_EQ(run({"sat", "p & ~p"}).code, 1);
  EXPECT_EQ(run({"sat", "p"}).code, 0);
}

TEST(Cli, DisagreeOnCommittee) {
  Outcome r = run({"disagree", "--model", data("committee.json"), "--group", "Ann Bob Cath John"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2\n");
  EXPECT_EQ(run({"disagree", "--model", data("committee.json"), "--group", "Ann Bob"}).out, "0\n");
}

TEST(Cli, ValidateReportsViolations) {
  Outcome r = run({"validate", "--in", data("bad_qngdm.json"), "--as", "qngdm"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("partition_witness"), std::string::npos);
  r = run({"validate", "--in", data("two_worlds.json"), "--as", "qngdm"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "ok\n");
}

TEST(Cli, UsageAndInputErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  Outcome r = run({"parse", "B{1,0} p"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("position"), std::string::npos);
  EXPECT_EQ(run({"mc", "--model", data("committee.json"), "--formula", "B{Zed,1} p"}).code, 2);
  EXPECT_EQ(run({"sat", "~D{1,1} ~D{1,1} p", "--max-depth", "1"}).code, 2);
  std::ofstream(temp("broken.json")) << "{\"agents\": [";
  r = run({"mc", "--model", temp("broken.json"), "--formula", "p"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("broken.json"), std::string::npos);
}

TEST(Cli, ParseMatchesLibrary) {
  for (const char* text : {"p -> q", "disagree{1 2,2}", "Dhat{1,1} B{2,w} ~p", "p <-> (q | r)"}) {
    Outcome r = run({"parse", text});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, render(parse(text)) + "\n");
  }
}

TEST(Cli, ModelCheckMatchesLibrary) {
  std::ifstream in(data("committee.json"));
  Magbm m = io::magbm_from_json(json::parse(in));
  for (const char* text : {"D{Ann Bob,0} in", "D{Ann Bob,1} in", "D{Cath John,0} ~in", "disagree{Ann Bob,1}"}) {
    Outcome r = run({"mc", "--model", data("committee.json"), "--formula", text});
    const bool expected = check(m, parse(text));
    EXPECT_EQ(r.out, expected ? "true\n" : "false\n") << text;
    EXPECT_EQ(r.code, expected ? 0 : 1);
  }
  DoxModel d = io::dox_model_from_json(read(data("two_worlds.json")));
  for (const char* text : {"D{1,3} p", "D{1,2} p", "B{1,2} p"}) {
    Outcome r = run({"mc", "--model", data("two_worlds.json"), "--formula", text});
    EXPECT_EQ(r.out, eval_designated(d, parse(text)) ? "true\n" : "false\n") << text;
  }
}

TEST(Cli, DecisionMatchesLibrary) {
  oracle::RandomConfig cfg;
  cfg.seed = 77;
  for (std::uint64_t i = 0; i < 20; ++i) {
    OuterFormula f = oracle::random_formula(cfg, i);
    Verdict v = decide_formula(f, Mode::sat, false);
    Outcome r = run({"--json", "sat", render(f), "--stats"});
    json j = json::parse(r.out);
    EXPECT_EQ(j["result"], v.result());
    EXPECT_EQ(j["stats"], io::to_json(v.stats));
  }
}

TEST(Cli, ExtractedModelIsWritten) {
  const std::string path = temp("model.json");
  Outcome r = run({"valid", "B{Ann,1} p -> D{Ann Bob,1} p", "--extract-model", path});
  EXPECT_EQ(r.code, 1);
  DoxModel m = io::dox_model_from_json(read(path));
  EXPECT_TRUE(validate_qngdm(m).ok());
  EXPECT_FALSE(eval_designated(m, parse("B{Ann,1} p -> D{Ann Bob,1} p")));
}

TEST(Cli, TransformCycleMatchesLibrary) {
  const std::string q = temp("q.json"), n = temp("n.json"), b = temp("b.json"), f = temp("f.json");
  ASSERT_EQ(run({"transform", "--from", "magbm", "--to", "qngdm", "--in", data("committee.json"), "--out", q}).code, 0);
  std::ifstream in(data("committee.json"));
  Magbm m = io::magbm_from_json(json::parse(in));
  DoxModel lib = magbm_to_qngdm(m);
  EXPECT_EQ(read(q), io::to_json(lib));

  ASSERT_EQ(run({"filtrate", "--in", q, "--formula", "D{Ann Bob,0} in", "--out", f}).code, 0);
  EXPECT_EQ(read(f), io::to_json(filtrate(lib, parse("D{Ann Bob,0} in"))));

  ASSERT_EQ(run({"transform", "--from", "qngdm", "--to", "ngdm", "--in", f, "--out", n}).code, 0);
  EXPECT_EQ(run({"validate", "--in", n, "--as", "ngdm"}).code, 0);
  ASSERT_EQ(run({"transform", "--from", "ngdm", "--to", "magbm", "--in", n, "--out", b}).code, 0);
  Outcome r = run({"mc", "--model", b, "--formula", "D{Ann Bob,0} in"});
  EXPECT_EQ(r.out, "true\n");
  EXPECT_EQ(run({"transform", "--from", "ngdm", "--to", "magbm", "--in", data("bad_qngdm.json"), "--out", b}).code,
            2);
}

TEST(Cli, AxiomsMatchLibrary) {
  const std::string path = temp("axioms.txt");
  ASSERT_EQ(run({"axioms", "--bounds", "agents=2,grade=1,atoms=p,omega=1,psi=1", "--emit", path}).code, 0);
  axioms::Bounds b;
  b.max_grade = 1;
  b.max_omega = 1;
  b.max_psi = 1;
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  auto corpus = axioms::corpus(b);
  ASSERT_EQ(lines.size(), corpus.size());
  for (std::size_t i = 0; i < lines.size(); ++i) EXPECT_EQ(parse(lines[i]), corpus[i]);
  EXPECT_EQ(run({"axioms", "--bounds", "agents=2,grade=1", "--check"}).code, 0);
  EXPECT_EQ(run({"axioms", "--bounds", "colour=blue"}).code, 2);
}

TEST(Cli, FuzzMatchesLibrary) {
  Outcome r = run({"--json", "fuzz", "--n", "15", "--seed", "4", "--budget", "100000"});
  ASSERT_EQ(r.code, 0);
  oracle::RandomConfig cfg;
  cfg.seed = 4;
  oracle::SearchBounds sb;
  sb.budget = 100000;
  EXPECT_EQ(json::parse(r.out), io::to_json(oracle::cross_check(15, cfg, sb)));
}
