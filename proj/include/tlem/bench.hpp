#ifndef TLEM_BENCH_HPP
#define TLEM_BENCH_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "tlem/check.hpp"
#include "tlem/compose.hpp"
#include "tlem/group1.hpp"
#include "tlem/numeral.hpp"
#include "tlem/search.hpp"
#include "tlem/tabproof.hpp"

namespace tlem {

enum class FamilyKind { DoublingChain, SquaringChain, MPChain, LEMBatch };

inline const char* to_string(FamilyKind k)
{
  switch (k) {
    case FamilyKind::DoublingChain: return "DoublingChain";
    case FamilyKind::SquaringChain: return "SquaringChain";
    case FamilyKind::MPChain: return "MPChain";
    case FamilyKind::LEMBatch: return "LEMBatch";
  }
  return "?";
}

inline FamilyKind family_from_string(const std::string& s)
{
  for (FamilyKind k : {FamilyKind::DoublingChain, FamilyKind::SquaringChain, FamilyKind::MPChain, FamilyKind::LEMBatch}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown family '" + s + "'");
}

/// A family with its largest instance parameter; instances run for n = 1..max_n
/// (DoublingChain and SquaringChain also include n = 0).
struct FamilySpec {
  FamilyKind kind;
  unsigned max_n;
};

inline constexpr unsigned kSquaringBenchCap = 8;

struct BenchCase {
  std::vector<Formula> basis;
  Formula goal;
};

/// MPChain atoms: A_i = (leq N(i) N(i+1)).
inline Formula mp_atom(unsigned i) { return Formula::leq(numeral_term(i), numeral_term(i + 1)); }

/// LEMBatch sentence number i for a seed: a random comparison between two
/// small numerals, possibly negated.
inline Formula lem_batch_sentence(unsigned i, std::uint64_t seed)
{
  std::mt19937_64 rng(seed * 1000003ULL + i);
  std::uniform_int_distribution<unsigned> val(0, 20), coin(0, 1);
  Term a = numeral_term(val(rng)), b = numeral_term(val(rng));
  Formula f = coin(rng) ? Formula::eq(a, b) : Formula::leq(a, b);
  return coin(rng) ? Formula::neg(f) : f;
}

inline BenchCase make_case(FamilyKind k, unsigned n, std::uint64_t seed)
{
  switch (k) {
    case FamilyKind::DoublingChain: return {group1_formulas(), growth_sentence(GrowthKind::Doubling, n)};
    case FamilyKind::SquaringChain:
      if (n > kSquaringBenchCap) throw std::out_of_range("SquaringChain instances are capped at n = 8");
      return {group1_formulas(), growth_sentence(GrowthKind::Squaring, n)};
    case FamilyKind::MPChain: {
      BenchCase c;
      c.basis.push_back(mp_atom(0));
      for (unsigned i = 0; i < n; ++i) c.basis.push_back(Formula::implies(mp_atom(i), mp_atom(i + 1)));
      c.goal = mp_atom(n);
      return c;
    }
    case FamilyKind::LEMBatch: {
      Formula f = lem_batch_sentence(n, seed);
      return {{}, Apparatus::lem(f)};
    }
  }
  throw std::logic_error("make_case");
}

struct BenchRow {
  std::string family;
  unsigned n = 0;
  std::string apparatus;
  bool found = false;
  std::size_t nodes = 0;
  std::size_t symbols = 0;
  double ms = 0;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::string proof_file;  // set when proofs are written out
};

inline const char* kBenchHeader = "family,n,apparatus,outcome,nodes,symbols,ms,seed,budget";

inline std::string csv_row(const BenchRow& r)
{
  std::ostringstream os;
  os << r.family << ',' << r.n << ',' << r.apparatus << ',' << (r.found ? "Found" : "Exhausted") << ',' << r.nodes << ','
     << r.symbols << ',';
  os.setf(std::ios::fixed);
  os.precision(3);
  os << r.ms << ',' << r.seed << ',' << r.budget;
  return os.str();
}

inline std::string to_csv(const std::vector<BenchRow>& rows)
{
  std::string out = std::string(kBenchHeader) + "\n";
  for (const BenchRow& r : rows) out += csv_row(r) + "\n";
  return out;
}

struct BenchOptions {
  std::vector<FamilySpec> families;
  std::vector<std::string> apparatuses{"tab", "xtab"};
  std::size_t budget = 10000;
  unsigned max_depth = 6;
  std::uint64_t seed = 1;
  std::filesystem::path proof_dir;  // empty: proofs are not written
};

namespace detail {

inline Apparatus bench_apparatus(const std::string& s)
{
  if (s == "tab") return Apparatus::tab();
  if (s == "xtab") return Apparatus::xtab();
  throw std::invalid_argument("bench supports apparatus tab or xtab, not '" + s + "'");
}

// MPChain under Xtab: a proof of A_0, then one linear-sum composition per link.
inline std::optional<ProofTree> mp_compose(const BenchCase& c, unsigned n, const SearchBudget& b)
{
  SearchResult first = search(mp_atom(0), c.basis, Apparatus::tab(), b);
  if (!first.found) return std::nullopt;
  ProofTree acc = first.tree;
  for (unsigned i = 0; i < n; ++i) {
    SearchResult link = search(c.basis[i + 1], c.basis, Apparatus::tab(), b);
    if (!link.found) return std::nullopt;
    acc = compose_linear_sum(acc, link.tree);
  }
  return acc;
}

}  // namespace detail

/// Runs every (family instance, apparatus) case. Found rows carry the size of
/// a proof that passed the checker; failures become Exhausted rows.
inline std::vector<BenchRow> run_bench(const BenchOptions& opt)
{
  std::vector<BenchRow> rows;
  if (!opt.proof_dir.empty()) std::filesystem::create_directories(opt.proof_dir);
  for (const FamilySpec& fam : opt.families) {
    unsigned lo = (fam.kind == FamilyKind::DoublingChain || fam.kind == FamilyKind::SquaringChain) ? 0 : 1;
    unsigned hi = fam.kind == FamilyKind::SquaringChain ? std::min(fam.max_n, kSquaringBenchCap) : fam.max_n;
    for (unsigned n = lo; n <= hi; ++n) {
      BenchCase c = make_case(fam.kind, n, opt.seed);
      for (const std::string& app_name : opt.apparatuses) {
        Apparatus app = detail::bench_apparatus(app_name);
        BenchRow row;
        row.family = to_string(fam.kind);
        row.n = n;
        row.apparatus = app_name;
        row.seed = opt.seed;
        row.budget = opt.budget;
        SearchBudget b;
        b.max_nodes = opt.budget;
        b.max_depth = opt.max_depth;
        auto t0 = std::chrono::steady_clock::now();
        std::optional<ProofTree> proof;
        try {
          if (fam.kind == FamilyKind::MPChain && app.kind == Apparatus::Kind::Xtab) {
            proof = detail::mp_compose(c, n, b);
          } else {
            SearchResult r = search(c.goal, c.basis, app, b);
            if (r.found) proof = std::move(r.tree);
          }
        } catch (const std::exception&) {
          proof.reset();
        }
        row.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        if (proof && check(*proof, c.goal, c.basis, app)) {
          row.found = true;
          ProofSize s = proof_size(*proof);
          row.nodes = s.nodes;
          row.symbols = s.symbols;
          if (!opt.proof_dir.empty()) {
            std::string stem = row.family + "_" + std::to_string(n) + "_" + app_name;
            auto path = opt.proof_dir / (stem + ".tabproof");
            std::string basis_ref = "empty";
            if (!c.basis.empty()) {
              basis_ref = stem + ".axb";
              std::ofstream axb(opt.proof_dir / basis_ref);
              for (const Formula& f : c.basis) axb << f << "\n";
            }
            std::ofstream(path) << write_tabproof({*proof, basis_ref, app_name});
            row.proof_file = path.string();
          }
        }
        rows.push_back(row);
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.family, a.n, a.apparatus) < std::tie(b.family, b.n, b.apparatus);
  });
  return rows;
}

}  // namespace tlem

#endif  // TLEM_BENCH_HPP
