#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <unistd.h>

#include "support.hpp"
#include "tlem/axiomlab.hpp"
#include "tlem/bench.hpp"
#include "tlem/config.hpp"
#include "tlem/tabproof.hpp"

using namespace tlem;
namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::string>> cells(const std::string& csv)
{
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) row.push_back(c);
    out.push_back(row);
  }
  return out;
}

std::string without_ms(const std::string& csv)
{
  std::string out;
  for (auto row : cells(csv)) {
    row.erase(row.begin() + 6);
    for (const auto& c : row) out += c + ",";
    out += "\n";
  }
  return out;
}

std::size_t tokens(const Formula& f)
{
  std::size_t n = 0;
  bool in = false;
  for (char c : to_string(f)) {
    bool word = c != '(' && c != ')' && c != ' ';
    n += word && !in;
    in = word;
  }
  return n;
}

std::size_t tokens(const ProofTree& t)
{
  std::size_t n = 0;
  for (const ProofNode& nd : t.nodes) n += tokens(nd.formula);
  return n;
}

fs::path scratch_dir(const std::string& name)
{
  fs::path p = fs::temp_directory_path() / ("tlem_bench_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

BenchOptions small_run()
{
  BenchOptions o;
  o.families = {{FamilyKind::DoublingChain, 3}, {FamilyKind::MPChain, 3}, {FamilyKind::LEMBatch, 4}};
  o.seed = 9;
  return o;
}

}  // namespace

TEST(Bench, HeaderIsFixed)
{
  EXPECT_EQ(to_csv({}), "family,n,apparatus,outcome,nodes,symbols,ms,seed,budget\n");
  auto rows = cells(to_csv(run_bench(small_run())));
  ASSERT_GT(rows.size(), 1u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 9u);
    EXPECT_TRUE(rows[i][3] == "Found" || rows[i][3] == "Exhausted");
    EXPECT_EQ(rows[i][7], "9");
    EXPECT_EQ(rows[i][8], "10000");
  }
}

TEST(Bench, DeterministicApartFromTime)
{
  std::string a = to_csv(run_bench(small_run()));
  std::string b = to_csv(run_bench(small_run()));
  EXPECT_EQ(without_ms(a), without_ms(b));
  BenchOptions other = small_run();
  other.seed = 10;
  EXPECT_NE(without_ms(a), without_ms(to_csv(run_bench(other))));
}

TEST(Bench, RowsSortedByFamilyThenSize)
{
  auto rows = run_bench(small_run());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LE(std::tie(rows[i - 1].family, rows[i - 1].n, rows[i - 1].apparatus),
              std::tie(rows[i].family, rows[i].n, rows[i].apparatus));
  }
}

TEST(Bench, FoundRowsRevalidateFromDisk)
{
  BenchOptions o = small_run();
  o.proof_dir = scratch_dir("reload");
  auto rows = run_bench(o);
  std::size_t reloaded = 0;
  for (const BenchRow& r : rows) {
    if (!r.found) {
      EXPECT_TRUE(r.proof_file.empty());
      continue;
    }
    ASSERT_FALSE(r.proof_file.empty()) << r.family << r.n;
    TabProofFile f = read_tabproof(read_file(r.proof_file));
    EXPECT_EQ(f.apparatus, r.apparatus);
    std::vector<Formula> basis;
    if (f.basis != "empty") basis = load_axb(o.proof_dir / f.basis).formulas();
    Apparatus app = r.apparatus == "tab" ? Apparatus::tab() : Apparatus::xtab();
    Verdict v = check(f.tree, f.tree.goal, basis, app);
    EXPECT_TRUE(v) << r.proof_file << ": " << v.diagnostic;
    EXPECT_EQ(proof_size(f.tree).nodes, r.nodes);
    EXPECT_EQ(proof_size(f.tree).symbols, r.symbols);
    ++reloaded;
  }
  EXPECT_GT(reloaded, 10u);
  fs::remove_all(o.proof_dir);
}

TEST(Bench, LemBatchUnderTabAllFound)
{
  BenchOptions o;
  o.families = {{FamilyKind::LEMBatch, 50}};
  o.apparatuses = {"tab"};
  auto rows = run_bench(o);
  ASSERT_EQ(rows.size(), 50u);
  for (const BenchRow& r : rows) {
    EXPECT_TRUE(r.found) << r.n;
    EXPECT_LE(r.nodes, 6u);
  }
}

// Each composition adds at most the link proof plus 4(|A_i| + |A_i+1|).
TEST(Bench, MpChainWithinComposeBound)
{
  const unsigned k = 6;
  BenchOptions o;
  o.families = {{FamilyKind::MPChain, k}};
  o.apparatuses = {"xtab"};
  auto rows = run_bench(o);
  ASSERT_EQ(rows.size(), k);
  for (const BenchRow& r : rows) {
    ASSERT_TRUE(r.found) << r.n;
    BenchCase c = make_case(FamilyKind::MPChain, r.n, o.seed);
    std::size_t bound = tokens(search(mp_atom(0), c.basis, Apparatus::tab()).tree);
    for (unsigned i = 0; i < r.n; ++i) {
      bound += tokens(search(c.basis[i + 1], c.basis, Apparatus::tab()).tree);
      bound += 4 * (tokens(mp_atom(i)) + tokens(mp_atom(i + 1)));
    }
    EXPECT_LE(r.symbols, bound) << r.n;
  }
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].symbols, rows[i - 1].symbols);
}

TEST(Bench, DoublingChainTen)
{
  BenchCase c = make_case(FamilyKind::DoublingChain, 10, 1);
  ASSERT_TRUE(c.goal.is_sentence());
  const Term top = numeral_term(Nat(2048));
  EXPECT_EQ(c.goal.term(1), top);
  EXPECT_EQ(oracle::term(top, {}), Nat(2048));
  EXPECT_EQ(growth(GrowthKind::Doubling, 10).value, Nat(2048));
  EXPECT_EQ(growth_logsp(growth(GrowthKind::Doubling, 10)), 11u);
  EXPECT_TRUE(oracle::truth(c.goal));
}

TEST(Bench, FailuresBecomeRows)
{
  BenchOptions o;
  o.families = {{FamilyKind::SquaringChain, 3}};
  o.budget = 50;
  std::vector<BenchRow> rows;
  ASSERT_NO_THROW(rows = run_bench(o));
  ASSERT_EQ(rows.size(), 8u);  // n = 0..3, two apparatuses
  std::size_t exhausted = 0;
  for (const BenchRow& r : rows) {
    if (!r.found) {
      ++exhausted;
      EXPECT_EQ(r.nodes, 0u);
    }
  }
  EXPECT_GT(exhausted, 0u);
  EXPECT_THROW(make_case(FamilyKind::SquaringChain, 9, 1), std::out_of_range);
  EXPECT_THROW(family_from_string("Fibonacci"), std::invalid_argument);
}

TEST(Config, DefaultsAndFile)
{
  Config c;
  EXPECT_EQ(c.max_nodes, 10000u);
  EXPECT_EQ(c.max_depth, 6u);
  EXPECT_EQ(c.eval_budget, 1000u);
  c.load_text("# comment\nmax-nodes = 500\n\n depth=3 # trailing\n");
  EXPECT_EQ(c.max_nodes, 500u);
  EXPECT_EQ(c.max_depth, 3u);
  EXPECT_NE(c.describe().find("max-nodes=500"), std::string::npos);
  c.load_file(std::string(TLEM_DATA_DIR) + "/tlem.conf");
  EXPECT_EQ(c.max_nodes, 10000u);
}

TEST(Config, EnvironmentOverrides)
{
  Config c;
  std::map<std::string, std::string> env{{"TLEM_SEED", "42"}, {"TLEM_MAX_NODES", "77"}};
  c.load_env([&](const char* k) -> const char* {
    auto it = env.find(k);
    return it == env.end() ? nullptr : it->second.c_str();
  });
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.max_nodes, 77u);
  EXPECT_EQ(c.max_depth, 6u);
}

TEST(Config, Errors)
{
  Config c;
  EXPECT_THROW(c.load_text("max-nodes\n"), ConfigError);
  EXPECT_THROW(c.load_text("colour = blue\n"), ConfigError);
  EXPECT_THROW(c.set("depth", "6x"), ConfigError);
  EXPECT_THROW(c.set("seed", "-1"), ConfigError);
  EXPECT_THROW(c.load_file("/nonexistent/tlem.conf"), ConfigError);
}
