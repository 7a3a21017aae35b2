#ifndef TLEM_AXIOMLAB_HPP
#define TLEM_AXIOMLAB_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tlem/arith.hpp"
#include "tlem/check.hpp"
#include "tlem/diagonal.hpp"
#include "tlem/group1.hpp"
#include "tlem/hilbert.hpp"
#include "tlem/rank.hpp"
#include "tlem/search.hpp"
#include "tlem/tabproof.hpp"

namespace tlem {

enum class Provenance { Group0, Group1, Group2, Group3, Totality, User };

inline const char* to_string(Provenance p)
{
  switch (p) {
    case Provenance::Group0: return "group0";
    case Provenance::Group1: return "group1";
    case Provenance::Group2: return "group2";
    case Provenance::Group3: return "group3";
    case Provenance::Totality: return "totality";
    case Provenance::User: return "user";
  }
  return "?";
}

struct BasisAxiom {
  Formula formula;
  Provenance provenance = Provenance::User;
  std::string name;
};

/// Oracle symbol names used by IS constructions.
inline constexpr const char* kPairSymbol = "pair";
inline constexpr const char* kHilbPrfSymbol = "hilbprf";
inline constexpr const char* kPrfSymbol = "prf";
inline constexpr const char* kPrfMultSymbol = "prfm";

struct AxiomBasis {
  std::string name = "basis";
  std::vector<BasisAxiom> axioms;
  OracleTable oracles;
  /// Group-2 generator: the beta whose Hilbert proofs the instances refer to.
  std::shared_ptr<const std::vector<Formula>> group2_beta;

  std::vector<Formula> formulas() const
  {
    std::vector<Formula> out;
    for (const BasisAxiom& a : axioms) out.push_back(a.formula);
    return out;
  }
  bool contains(const Formula& f) const
  {
    return std::any_of(axioms.begin(), axioms.end(), [&](const BasisAxiom& a) { return a.formula == f; });
  }
  void add(Formula f, Provenance p, std::string name = {})
  {
    if (!f.is_sentence() || f.has_params()) throw std::invalid_argument("basis axioms must be sentences without parameters");
    if (!contains(f)) axioms.push_back({std::move(f), p, std::move(name)});
  }
  std::size_t count(Provenance p) const
  {
    return static_cast<std::size_t>(
        std::count_if(axioms.begin(), axioms.end(), [&](const BasisAxiom& a) { return a.provenance == p; }));
  }
  const BasisAxiom* group3() const
  {
    for (const BasisAxiom& a : axioms) {
      if (a.provenance == Provenance::Group3) return &a;
    }
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Groups 0 and 1

/// Group-0: the members of F that fix 0, 1, addition and doubling.
inline const std::vector<std::string>& group0_names()
{
  static const std::vector<std::string> names{"one_def", "leq_zero", "neq_zero_r", "add_zero", "add_succ", "double_def"};
  return names;
}

inline void add_group0(AxiomBasis& b)
{
  for (const std::string& n : group0_names()) b.add(group1_axiom(n), Provenance::Group0, n);
}

inline void add_group1(AxiomBasis& b)
{
  for (const NamedAxiom& a : group1_axioms()) b.add(a.formula, Provenance::Group1, a.name);
}

// ---------------------------------------------------------------------------
// Oracles

/// pair(x, y): x codes a Rank-1* sentence and y codes its negation.
inline void register_pair(OracleTable& t)
{
  t.register_predicate(kPairSymbol, 2, [](const std::vector<Nat>& a) {
    try {
      Formula x = decode_formula(a[0]);
      Formula y = decode_formula(a[1]);
      return x.is_sentence() && is_rank1star(x) && y == Formula::neg(x);
    } catch (const DecodeError&) {
      return false;
    }
  });
}

/// hilbprf(f, p): p codes a Hilbert derivation of the sentence coded by f from beta.
inline void register_hilbprf(OracleTable& t, std::shared_ptr<const std::vector<Formula>> beta)
{
  t.register_predicate(kHilbPrfSymbol, 2, [beta](const std::vector<Nat>& a) {
    try {
      Formula goal = decode_formula(a[0]);
      HilbProof p = decode_hilbert(a[1]);
      return check_hilbert(p, goal, *beta).valid;
    } catch (const std::exception&) {
      return false;
    }
  });
}

/// Proof predicate of an IS basis: prf(f, p, s) holds when p codes a proof of
/// the sentence coded by f under `app`, from `core` plus the sentence coded by
/// s (the Group-3 axiom passes its own code here).
inline void register_prf(OracleTable& t, const std::string& symbol, std::shared_ptr<const std::vector<Formula>> core,
                         Apparatus app)
{
  t.register_predicate(symbol, 3, [core, app](const std::vector<Nat>& a) {
    try {
      Formula goal = decode_formula(a[0]);
      std::vector<Formula> axioms = *core;
      try {
        Formula self = decode_formula(a[2]);
        if (self.is_sentence()) axioms.push_back(self);
      } catch (const DecodeError&) {
      }
      if (app.kind == Apparatus::Kind::Tab1) {
        Tab1Chain c = decode_chain(a[1]);
        return c.goal == goal && check_chain(c, axioms).valid;
      }
      return check(decode_proof(a[1]), goal, axioms, app).valid;
    } catch (const std::exception&) {
      return false;
    }
  });
}

// ---------------------------------------------------------------------------
// Group 2 and Group 3

/// Group-2 instance: forall p (hilbprf(N(code(phi)), p) -> phi).
inline Formula group2_instance(const Formula& phi)
{
  if (!phi.is_sentence() || !is_rank1star(phi)) throw std::invalid_argument("group2_instance: phi must be a Rank-1* sentence");
  Term code = numeral_term(encode(phi));
  return Formula::forall("p", Formula::implies(Formula::pred(kHilbPrfSymbol, {code, Term::var("p")}), phi));
}

/// Level-1 template with free variable s standing for the sentence's own code:
///   forall x y p q  not (pair(x,y) and prf(x,p,s) and prf(y,q,s))
inline Formula level1_template(const std::string& prf_symbol)
{
  Term x = Term::var("x"), y = Term::var("y"), p = Term::var("p"), q = Term::var("q"), s = Term::var("s");
  Formula matrix = Formula::conj(Formula::pred(kPairSymbol, {x, y}),
                                 Formula::conj(Formula::pred(prf_symbol, {x, p, s}), Formula::pred(prf_symbol, {y, q, s})));
  return Formula::forall("x", Formula::forall("y", Formula::forall("p", Formula::forall("q", Formula::neg(matrix)))));
}

/// SelfRef template: forall p not prf(N(code(0 = 1)), p, s).
inline Formula selfref_template(const std::string& prf_symbol)
{
  Term falsum = numeral_term(encode(Formula::eq(Term::zero(), Term::one())));
  return Formula::forall("p", Formula::neg(Formula::pred(prf_symbol, {falsum, Term::var("p"), Term::var("s")})));
}

/// The "I am consistent" sentence for (basis, app): no proof of 0 = 1 exists
/// from the basis plus this sentence. The prf oracle is registered in the
/// basis's table under `prf_symbol`.
inline Diagonal build_selfref(AxiomBasis& basis, const Apparatus& app, const std::string& prf_symbol = "prf0")
{
  register_substitution(basis.oracles);
  register_prf(basis.oracles, prf_symbol, std::make_shared<const std::vector<Formula>>(basis.formulas()), app);
  return diagonalize(selfref_template(prf_symbol));
}

struct BuildOptions {
  bool mult_extended = false;
  /// Extra sentences for which Group-2 instances are materialized, on top of
  /// beta's own Rank-1* axioms.
  std::vector<Formula> group2_for;
};

/// IS_D(beta): Group-0, F, materialized Group-2 instances, optionally multiplication totality,
/// and the diagonal Level-1 consistency sentence last.
inline AxiomBasis build_IS(const AxiomBasis& beta, const Apparatus& app, const BuildOptions& opt = {})
{
  AxiomBasis out;
  out.name = std::string(opt.mult_extended ? "ISM_" : "IS_") + app.label + "(" + beta.name + ")";
  add_group0(out);
  add_group1(out);
  auto beta_f = std::make_shared<const std::vector<Formula>>(beta.formulas());
  out.group2_beta = beta_f;
  std::vector<Formula> g2;
  for (const Formula& f : *beta_f) {
    if (is_rank1star(f)) g2.push_back(f);
  }
  for (const Formula& f : opt.group2_for) g2.push_back(f);
  for (const Formula& f : g2) out.add(group2_instance(f), Provenance::Group2);
  if (opt.mult_extended) out.add(totality_multiplication(), Provenance::Totality, "multiplication");

  register_pair(out.oracles);
  register_hilbprf(out.oracles, beta_f);
  register_substitution(out.oracles);
  const std::string prf = opt.mult_extended ? kPrfMultSymbol : kPrfSymbol;
  register_prf(out.oracles, prf, std::make_shared<const std::vector<Formula>>(out.formulas()), app);
  Diagonal d = diagonalize(level1_template(prf));
  out.add(d.sentence, Provenance::Group3, "level1");
  return out;
}

/// The embedded self-term of the basis's Group-3 sentence, for fixed-point checks.
inline std::optional<Term> group3_self_term(const AxiomBasis& b)
{
  const BasisAxiom* g3 = b.group3();
  if (!g3) return std::nullopt;
  std::optional<Term> found;
  std::vector<Formula> todo{g3->formula};
  while (!todo.empty() && !found) {
    Formula f = todo.back();
    todo.pop_back();
    if (f.is_atom()) {
      for (const Term& t : f.terms()) {
        if (t.kind() == Term::Kind::Call && t.name() == kSubSymbol) found = t;
      }
      continue;
    }
    if (f.kind() == Formula::Kind::Not || f.is_quantifier()) todo.push_back(f.kind() == Formula::Kind::Not ? f.sub() : f.body());
    else {
      todo.push_back(f.lhs());
      todo.push_back(f.rhs());
    }
  }
  return found;
}

// ---------------------------------------------------------------------------
// Classification

enum class Evidence { ProvedWithinBudget, Declared, NotEstablished };

inline const char* to_string(Evidence e)
{
  switch (e) {
    case Evidence::ProvedWithinBudget: return "proved";
    case Evidence::Declared: return "declared";
    case Evidence::NotEstablished: return "not-established";
  }
  return "?";
}

struct TypeClass {
  std::string label;           // NS, S, A, M
  Evidence evidence[3]{};      // successor, addition, multiplication totality
  std::size_t nodes_explored = 0;
};

inline std::vector<Formula> totality_sentences()
{
  return {totality_successor(), totality_addition(), totality_multiplication()};
}

inline TypeClass classify_type(const AxiomBasis& basis, const SearchBudget& budget = {})
{
  TypeClass tc;
  auto sentences = totality_sentences();
  auto axioms = basis.formulas();
  bool ok[3];
  for (int i = 0; i < 3; ++i) {
    if (basis.contains(sentences[static_cast<std::size_t>(i)])) {
      tc.evidence[i] = Evidence::Declared;
    } else {
      SearchResult r = search(sentences[static_cast<std::size_t>(i)], axioms, Apparatus::tab(), budget);
      tc.nodes_explored += r.nodes_explored;
      tc.evidence[i] = r.found ? Evidence::ProvedWithinBudget : Evidence::NotEstablished;
    }
    ok[i] = tc.evidence[i] != Evidence::NotEstablished;
  }
  tc.label = !ok[0] ? "NS" : !ok[1] ? "S" : !ok[2] ? "A" : "M";
  return tc;
}

// ---------------------------------------------------------------------------
// Level-1 probe

struct ProbeResult {
  bool pair_found = false;
  bool inconclusive = true;  // NoPairFound under a finite budget says nothing definite
  Formula sentence;
  ProofTree proof_pos, proof_neg;
  std::size_t examined = 0;
  std::size_t nodes_used = 0;
};

/// Candidate Rank-1* sentences: the basis's own Rank-1* axioms (negations
/// stripped) and small comparisons between 0, 1, (add 1 1), (double 1),
/// ordered by Goedel code.
inline std::vector<Formula> probe_candidates(const AxiomBasis& basis)
{
  std::vector<Formula> pool;
  for (const BasisAxiom& a : basis.axioms) {
    Formula f = a.formula;
    while (f.kind() == Formula::Kind::Not) f = f.sub();
    if (is_rank1star(f) && !detail::mentions_oracles(f)) pool.push_back(f);
  }
  std::vector<Term> ts{Term::zero(), Term::one(), Term::add(Term::one(), Term::one()), Term::dbl(Term::one())};
  for (const Term& a : ts) {
    for (const Term& b : ts) {
      pool.push_back(Formula::eq(a, b));
      pool.push_back(Formula::leq(a, b));
    }
  }
  std::vector<std::pair<Nat, Formula>> coded;
  std::set<std::string> seen;
  for (const Formula& f : pool) {
    if (seen.insert(to_string(f)).second) coded.emplace_back(encode(f), f);
  }
  std::sort(coded.begin(), coded.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Formula> out;
  for (auto& [c, f] : coded) out.push_back(f);
  return out;
}

/// Searches each candidate and its negation until a pair of proofs appears or
/// the total node budget runs out.
inline ProbeResult probe_level1(const AxiomBasis& basis, const Apparatus& app, std::size_t budget,
                                std::size_t per_search = 10000)
{
  ProbeResult res;
  auto axioms = basis.formulas();
  for (const Formula& phi : probe_candidates(basis)) {
    if (res.nodes_used >= budget) break;
    ++res.examined;
    auto attempt = [&](const Formula& g) {
      SearchBudget b;
      b.max_nodes = std::min(per_search, budget - res.nodes_used);
      SearchResult r = search(g, axioms, app, b);
      res.nodes_used += r.nodes_explored;
      return r;
    };
    SearchResult pos = attempt(phi);
    if (!pos.found || res.nodes_used >= budget) continue;
    SearchResult neg = attempt(Formula::neg(phi));
    if (neg.found) {
      res.pair_found = true;
      res.inconclusive = false;
      res.sentence = phi;
      res.proof_pos = std::move(pos.tree);
      res.proof_neg = std::move(neg.tree);
      return res;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// .axb files

class BasisFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// One sentence per line, `#` comments, and directives:
///   group0 | group1 | group2 <beta.axb> | group3 [tab|xtab|tab1]
///   totality successor|addition|multiplication ...
/// group3 appends the diagonal Level-1 sentence for the axioms read so far.
inline AxiomBasis parse_axb(std::string_view text, const std::filesystem::path& base_dir = ".", std::string name = "basis")
{
  AxiomBasis b;
  b.name = std::move(name);
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto err = [&](const std::string& m) { return BasisFormatError("line " + std::to_string(lineno) + ": " + m); };
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "group0") {
      add_group0(b);
    } else if (head == "group1") {
      add_group1(b);
    } else if (head == "group2") {
      std::string path;
      if (!(ls >> path)) throw err("group2 needs a basis path");
      auto p = base_dir / path;
      AxiomBasis beta = parse_axb(read_file(p), p.parent_path(), p.stem().string());
      auto beta_f = std::make_shared<const std::vector<Formula>>(beta.formulas());
      b.group2_beta = beta_f;
      register_hilbprf(b.oracles, beta_f);
      for (const Formula& f : *beta_f) {
        if (is_rank1star(f)) b.add(group2_instance(f), Provenance::Group2);
      }
    } else if (head == "group3") {
      std::string app = "tab";
      ls >> app;
      Apparatus a = app == "xtab" ? Apparatus::xtab() : app == "tab1" ? Apparatus::tab1() : Apparatus::tab();
      if (app != "tab" && app != "xtab" && app != "tab1") throw err("unknown apparatus '" + app + "'");
      register_pair(b.oracles);
      register_substitution(b.oracles);
      const std::string prf = b.contains(totality_multiplication()) ? kPrfMultSymbol : kPrfSymbol;
      register_prf(b.oracles, prf, std::make_shared<const std::vector<Formula>>(b.formulas()), a);
      b.add(diagonalize(level1_template(prf)).sentence, Provenance::Group3, "level1");
    } else if (head == "totality") {
      std::string which;
      bool any = false;
      while (ls >> which) {
        any = true;
        if (which == "successor") b.add(totality_successor(), Provenance::Totality, "successor");
        else if (which == "addition") b.add(totality_addition(), Provenance::Totality, "addition");
        else if (which == "multiplication") b.add(totality_multiplication(), Provenance::Totality, "multiplication");
        else throw err("unknown totality '" + which + "'");
      }
      if (!any) throw err("totality needs successor, addition or multiplication");
    } else {
      try {
        b.add(parse_sentence(line), Provenance::User);
      } catch (const ParseError& e) {
        throw err(e.what());
      } catch (const std::invalid_argument& e) {
        throw err(e.what());
      }
    }
  }
  return b;
}

inline AxiomBasis load_axb(const std::filesystem::path& p)
{
  if (p == "empty" || p == "empty.axb") {
    if (!std::filesystem::exists(p)) {
      AxiomBasis b;
      b.name = "empty";
      return b;
    }
  }
  return parse_axb(read_file(p), p.parent_path(), p.stem().string());
}

/// Writes every axiom as a sentence line, tagged with its provenance.
inline std::string write_axb(const AxiomBasis& b)
{
  std::ostringstream os;
  os << "# " << b.name << "\n";
  for (const BasisAxiom& a : b.axioms) {
    os << "# " << to_string(a.provenance);
    if (!a.name.empty()) os << " " << a.name;
    os << "\n" << a.formula << "\n";
  }
  return os.str();
}

}  // namespace tlem

#endif  // TLEM_AXIOMLAB_HPP
