#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <regex>

#include "tlem/axiomlab.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
           ("tlem_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome tlem(const std::string& args, const std::string& env = "") const
  {
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    std::string cmd = env + (env.empty() ? "" : " ") + "'" + TLEM_CLI + "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
    int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, tlem::read_file(out), tlem::read_file(err)};
  }

  std::string at(const std::string& name) const { return (dir_ / name).string(); }
  static std::string data(const std::string& name) { return std::string(TLEM_DATA_DIR) + "/" + name; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ProveThenCheck)
{
  Outcome p = tlem("prove --goal '(or (= 0 0) (not (= 0 0)))' --basis '" + data("empty.axb") + "' --apparatus tab --out '" +
               at("lem.tabproof") + "'");
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_NE(p.err.find("# config max-nodes=10000"), std::string::npos);
  Outcome c = tlem("checkproof --file '" + at("lem.tabproof") + "'");
  EXPECT_EQ(c.code, 0) << c.out << c.err;
  EXPECT_EQ(c.out, "Valid\n");
}

TEST_F(Cli, CorruptedNodeIsNamed)
{
  ASSERT_EQ(tlem("prove --goal '(or (= 0 0) (not (= 0 0)))' --basis empty --out '" + at("p.tabproof") + "'").code, 0);
  std::string text = tlem::read_file(at("p.tabproof"));
  // Node 2 is the first line after the root; swap its formula for an unrelated atom.
  std::regex node2(R"(\n2 1 (\S+) [^\n]*)");
  std::string bad = std::regex_replace(text, node2, "\n2 1 $1 (leq 1 0)", std::regex_constants::format_first_only);
  ASSERT_NE(bad, text);
  std::ofstream(at("bad.tabproof")) << bad;
  Outcome c = tlem("checkproof --file '" + at("bad.tabproof") + "'");
  EXPECT_EQ(c.code, 1);
  EXPECT_NE(c.out.find("node 2"), std::string::npos) << c.out;

  std::ofstream(at("junk.tabproof")) << "goal (= 0 0)\nbasis empty\napparatus tab\n1 0 goal (= 0\n";
  EXPECT_EQ(tlem("checkproof --file '" + at("junk.tabproof") + "'").code, 1);
}

TEST_F(Cli, Sequences)
{
  Outcome s = tlem("sequences --kind squaring --n 3");
  EXPECT_EQ(s.code, 0);
  EXPECT_EQ(s.out.substr(0, s.out.find('\n')), "256");
  Outcome d = tlem("--json sequences --kind doubling --n 10");
  EXPECT_NE(d.out.find("\"value\":\"2048\""), std::string::npos) << d.out;
  EXPECT_NE(d.out.find("\"logsp\":11"), std::string::npos) << d.out;
}

TEST_F(Cli, UsageErrors)
{
  EXPECT_EQ(tlem("prove --goal '(= 0 0)' --frobnicate").code, 2);
  EXPECT_EQ(tlem("").code, 2);
  EXPECT_EQ(tlem("nosuchcommand").code, 2);
  EXPECT_EQ(tlem("checkproof --file '" + at("missing.tabproof") + "'").code, 2);
  EXPECT_EQ(tlem("prove --goal '(= 0 0' --basis empty").code, 2);
  EXPECT_EQ(tlem("--config '" + at("missing.conf") + "' sequences --n 1").code, 2);
}

TEST_F(Cli, ExhaustionAndFalsity)
{
  EXPECT_EQ(tlem("--budget 200 prove --goal '(= 0 1)' --basis empty").code, 1);
  EXPECT_EQ(tlem("eval '(leq 1 0)'").code, 1);
  Outcome t = tlem("eval '(count (add 1 (add 1 1)) (add 1 1))'");
  EXPECT_EQ(t.code, 0);
  EXPECT_EQ(t.out, "2\n");
}

TEST_F(Cli, ConfigAndEnvironment)
{
  std::ofstream(at("small.conf")) << "max-nodes = 123\n";
  Outcome r = tlem("--config '" + at("small.conf") + "' sequences --n 1");
  EXPECT_NE(r.err.find("max-nodes=123"), std::string::npos) << r.err;
  Outcome e = tlem("--config '" + at("small.conf") + "' --budget 77 sequences --n 1");
  EXPECT_NE(e.err.find("max-nodes=77"), std::string::npos) << e.err;
  Outcome v = tlem("sequences --n 1", "TLEM_SEED=5");
  EXPECT_NE(v.err.find("seed=5"), std::string::npos) << v.err;
}

TEST_F(Cli, ComposeRoundTrip)
{
  std::ofstream(at("mp.axb")) << "(leq 1 0)\n(implies (leq 1 0) (= 1 0))\n";
  ASSERT_EQ(tlem("prove --goal '(leq 1 0)' --basis '" + at("mp.axb") + "' --out '" + at("a.tabproof") + "'").code, 0);
  ASSERT_EQ(tlem("prove --goal '(implies (leq 1 0) (= 1 0))' --basis '" + at("mp.axb") + "' --out '" +
                 at("b.tabproof") + "'")
                .code,
            0);
  Outcome c = tlem("--json compose --p1 '" + at("a.tabproof") + "' --p2 '" + at("b.tabproof") + "' --out '" +
               at("c.tabproof") + "'");
  ASSERT_EQ(c.code, 0) << c.out << c.err;
  EXPECT_NE(c.out.find("\"valid\":true"), std::string::npos);
  EXPECT_NE(tlem::read_file(at("c.tabproof")).find("apparatus xtab"), std::string::npos);
  EXPECT_EQ(tlem("checkproof --file '" + at("c.tabproof") + "'").code, 0);
}

TEST_F(Cli, ClassifyBuildAndProbe)
{
  Outcome ta = tlem("classify --basis '" + data("type_a.axb") + "'");
  EXPECT_EQ(ta.code, 0);
  EXPECT_EQ(ta.out.substr(0, 6), "Type-A");
  EXPECT_EQ(tlem("classify --basis '" + data("type_m.axb") + "'").out.substr(0, 6), "Type-M");

  Outcome is = tlem("build-is --beta '" + data("beta_true.axb") + "' --apparatus tab --out '" + at("is.axb") + "'");
  ASSERT_EQ(is.code, 0) << is.err;
  EXPECT_NE(is.out.find("Group-3 rank Pi1"), std::string::npos) << is.out;
  EXPECT_EQ(tlem("classify --basis '" + at("is.axb") + "'").out.substr(0, 6), "Type-A");

  Outcome ctr = tlem("probe --basis '" + data("contradiction.axb") + "' --probe-budget 20000");
  EXPECT_EQ(ctr.code, 1);
  EXPECT_EQ(ctr.out.substr(0, 9), "PairFound");
  Outcome ok = tlem("--json probe --basis '" + data("beta_true.axb") + "' --probe-budget 3000");
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("\"result\":\"NoPairFound\""), std::string::npos) << ok.out;
  EXPECT_NE(ok.out.find("\"inconclusive\":true"), std::string::npos) << ok.out;
}

TEST_F(Cli, RefuteAndCheck)
{
  Outcome r = tlem("refute --cnf '" + data("cnf/php2.cnf") + "' --out '" + at("php.resproof") + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(tlem("rescheck --cnf '" + data("cnf/php2.cnf") + "' --proof '" + at("php.resproof") + "'").code, 0);
  EXPECT_EQ(tlem("refute --cnf '" + data("cnf/sat_small.cnf") + "'").code, 1);
  EXPECT_EQ(tlem("refute --sentence '(and (leq 0 1) (not (leq 0 1)))' --apparatus xres").code, 0);
}

TEST_F(Cli, ParseEncodeDecode)
{
  Outcome p = tlem("parse '(forall x (leq 0 x))'");
  EXPECT_EQ(p.code, 0);
  EXPECT_NE(p.out.find("rank Pi1"), std::string::npos);
  Outcome c = tlem("codes '(add 1 1)'");
  ASSERT_EQ(c.code, 0);
  std::string code = c.out.substr(0, c.out.find('\t'));
  Outcome d = tlem("codes --decode " + code);
  EXPECT_EQ(d.out, "(add 1 1)\n");
}

TEST_F(Cli, BenchWritesCsvAndProofs)
{
  Outcome b = tlem("--seed 3 bench --families LEMBatch:5,MPChain:2 --out '" + at("r.csv") + "' --proof-dir '" +
               at("proofs") + "'");
  ASSERT_EQ(b.code, 0) << b.err;
  std::string csv = tlem::read_file(at("r.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "family,n,apparatus,outcome,nodes,symbols,ms,seed,budget");
  std::size_t checked = 0;
  for (const auto& e : fs::directory_iterator(at("proofs"))) {
    if (e.path().extension() != ".tabproof") continue;
    EXPECT_EQ(tlem("checkproof --file '" + e.path().string() + "'").code, 0) << e.path();
    ++checked;
  }
  EXPECT_GE(checked, 10u);
}
