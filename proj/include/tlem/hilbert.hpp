#ifndef TLEM_HILBERT_HPP
#define TLEM_HILBERT_HPP

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tlem/ast.hpp"
#include "tlem/godel.hpp"
#include "tlem/sexpr.hpp"
#include "tlem/tabproof.hpp"

namespace tlem {

/// A linear Hilbert-style derivation. Each line is a proper axiom, an instance
/// of one of the logical schemas below, modus ponens, generalization, or a
/// bounded-quantifier unfolding of an earlier line.
///
/// Schemas (A, B, C formulas; x a variable; t a term free for x):
///   k    A -> (B -> A)
///   s    (A -> (B -> C)) -> ((A -> B) -> (A -> C))
///   n    (not B -> not A) -> ((not B -> A) -> B)
///   andi A -> (B -> (A and B))      andl (A and B) -> A     andr (A and B) -> B
///   orl  A -> (A or B)              orr  B -> (A or B)
///   ore  (A -> C) -> ((B -> C) -> ((A or B) -> C))
///   q1   (forall x A) -> A[x := t]
///   q2   (forall x (A -> B)) -> (A -> forall x B),   x not free in A
///   exi  A[x := t] -> exists x A
///   exe  (forall x (A -> B)) -> ((exists x A) -> B), x not free in B
/// Equality is not built in; it comes from the proper axioms.
struct HilbLine {
  enum class Kind { Axiom, Schema, MP, Gen, Unfold };
  Formula formula;
  Kind kind = Kind::Axiom;
  std::size_t axiom = 0;  // Axiom
  std::string schema;     // Schema
  std::size_t a = 0;      // MP: line holding A; Gen / Unfold: source line
  std::size_t b = 0;      // MP: line holding (A -> B)
  std::string var;        // Gen
};

struct HilbProof {
  Formula goal;
  std::vector<HilbLine> lines;
};

struct HilbVerdict {
  bool valid = false;
  std::string diagnostic;
};

namespace detail {

// Decides whether inst == body[x := t] for some term t free for x.
class InstanceMatcher {
 public:
  explicit InstanceMatcher(std::string x) : x_(std::move(x)) {}

  bool formula(const Formula& pat, const Formula& f, const NameSet& bound = {})
  {
    if (pat.kind() != f.kind()) return false;
    using K = Formula::Kind;
    switch (pat.kind()) {
      case K::Eq:
      case K::Leq:
      case K::Pred: {
        if (pat.name() != f.name() || pat.terms().size() != f.terms().size()) return false;
        for (std::size_t i = 0; i < pat.terms().size(); ++i) {
          if (!term(pat.term(i), f.term(i), bound)) return false;
        }
        return true;
      }
      case K::Not: return formula(pat.sub(), f.sub(), bound);
      case K::And:
      case K::Or:
      case K::Implies: return formula(pat.lhs(), f.lhs(), bound) && formula(pat.rhs(), f.rhs(), bound);
      case K::Forall:
      case K::Exists:
      case K::BForall:
      case K::BExists: {
        if (pat.var() != f.var()) return false;
        if (pat.is_bounded() && !term(pat.bound(), f.bound(), bound)) return false;
        if (pat.var() == x_) return pat.body() == f.body();
        NameSet b2 = merge_names(bound, NameSet{pat.var()});
        return formula(pat.body(), f.body(), b2);
      }
    }
    return false;
  }

  bool term(const Term& pat, const Term& t, const NameSet& bound)
  {
    if (pat.kind() == Term::Kind::Var && pat.name() == x_) {
      for (const std::string& v : t.free_vars()) {
        if (contains_name(bound, v)) return false;  // capture
      }
      if (witness_) return *witness_ == t;
      witness_ = t;
      return true;
    }
    if (pat.kind() != t.kind()) return false;
    switch (pat.kind()) {
      case Term::Kind::App:
        if (pat.fn() != t.fn()) return false;
        break;
      case Term::Kind::Call:
      case Term::Kind::Var:
      case Term::Kind::Param:
        if (pat.name() != t.name()) return false;
        break;
      default: break;
    }
    if (pat.args().size() != t.args().size()) return false;
    for (std::size_t i = 0; i < pat.args().size(); ++i) {
      if (!term(pat.args()[i], t.args()[i], bound)) return false;
    }
    return true;
  }

 private:
  std::string x_;
  std::optional<Term> witness_;
};

inline bool is_instance(const Formula& body, const std::string& x, const Formula& inst)
{
  return InstanceMatcher(x).formula(body, inst);
}

inline bool imp(const Formula& f) { return f.kind() == Formula::Kind::Implies; }

inline bool check_schema(const std::string& name, const Formula& f)
{
  using K = Formula::Kind;
  auto N = [](const Formula& x) { return Formula::neg(x); };
  auto I = [](const Formula& a, const Formula& b) { return Formula::implies(a, b); };
  if (!imp(f)) return false;
  const Formula& l = f.lhs();
  const Formula& r = f.rhs();
  if (name == "k") return imp(r) && r.rhs() == l;
  if (name == "s") {
    if (!imp(l) || !imp(l.rhs()) || !imp(r)) return false;
    const Formula &A = l.lhs(), &B = l.rhs().lhs(), &C = l.rhs().rhs();
    return r == I(I(A, B), I(A, C));
  }
  if (name == "n") {
    if (!imp(l) || l.lhs().kind() != K::Not || l.rhs().kind() != K::Not) return false;
    const Formula &B = l.lhs().sub(), &A = l.rhs().sub();
    return r == I(I(N(B), A), B);
  }
  if (name == "andi") return imp(r) && r.rhs() == Formula::conj(l, r.lhs());
  if (name == "andl") return l.kind() == K::And && r == l.lhs();
  if (name == "andr") return l.kind() == K::And && r == l.rhs();
  if (name == "orl") return r.kind() == K::Or && r.lhs() == l;
  if (name == "orr") return r.kind() == K::Or && r.rhs() == l;
  if (name == "ore") {
    if (!imp(l) || !imp(r) || !imp(r.lhs()) || !imp(r.rhs())) return false;
    const Formula &A = l.lhs(), &C = l.rhs(), &B = r.lhs().lhs();
    return r == I(I(B, C), I(Formula::disj(A, B), C));
  }
  if (name == "q1") return l.kind() == K::Forall && is_instance(l.body(), l.var(), r);
  if (name == "q2") {
    if (l.kind() != K::Forall || !imp(l.body())) return false;
    const Formula &A = l.body().lhs(), &B = l.body().rhs();
    return !contains_name(A.free_vars(), l.var()) && r == I(A, Formula::forall(l.var(), B));
  }
  if (name == "exi") return r.kind() == K::Exists && is_instance(r.body(), r.var(), l);
  if (name == "exe") {
    if (l.kind() != K::Forall || !imp(l.body()) || !imp(r)) return false;
    const Formula &A = l.body().lhs(), &B = l.body().rhs();
    return !contains_name(B.free_vars(), l.var()) && r == I(Formula::exists(l.var(), A), B);
  }
  return false;
}

}  // namespace detail

inline HilbVerdict check_hilbert(const HilbProof& p, const Formula& goal, const std::vector<Formula>& axioms)
{
  auto bad = [](std::size_t i, const std::string& m) { return HilbVerdict{false, "line " + std::to_string(i) + ": " + m}; };
  if (!(p.goal == goal)) return {false, "proof goal differs from the requested goal"};
  if (p.lines.empty()) return {false, "empty derivation"};
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const HilbLine& ln = p.lines[i];
    switch (ln.kind) {
      case HilbLine::Kind::Axiom:
        if (ln.axiom >= axioms.size() || !(axioms[ln.axiom] == ln.formula)) return bad(i, "not the cited axiom");
        break;
      case HilbLine::Kind::Schema:
        if (!detail::check_schema(ln.schema, ln.formula)) return bad(i, "not an instance of schema " + ln.schema);
        break;
      case HilbLine::Kind::MP:
        if (ln.a >= i || ln.b >= i) return bad(i, "modus ponens cites a later line");
        if (!(p.lines[ln.b].formula == Formula::implies(p.lines[ln.a].formula, ln.formula))) {
          return bad(i, "modus ponens premises do not match");
        }
        break;
      case HilbLine::Kind::Gen:
        if (ln.a >= i) return bad(i, "generalization cites a later line");
        if (!(ln.formula == Formula::forall(ln.var, p.lines[ln.a].formula))) return bad(i, "not a generalization");
        break;
      case HilbLine::Kind::Unfold:
        if (ln.a >= i) return bad(i, "unfolding cites a later line");
        if (!(expand_bounded(ln.formula) == expand_bounded(p.lines[ln.a].formula))) {
          return bad(i, "lines differ beyond bounded-quantifier unfolding");
        }
        break;
    }
  }
  if (!(p.lines.back().formula == goal)) return {false, "last line is not the goal"};
  return {true, ""};
}

// (hilbproof GOAL (lemma F J) ...)  J = (axiom K) | SCHEMA | (mp A B) | (gen A x) | (unfold A)
inline std::string hilbert_sexpr(const HilbProof& p)
{
  std::ostringstream os;
  os << "(hilbproof " << p.goal;
  for (const HilbLine& l : p.lines) {
    os << " (lemma " << l.formula << " ";
    switch (l.kind) {
      case HilbLine::Kind::Axiom: os << "(axiom " << l.axiom << ")"; break;
      case HilbLine::Kind::Schema: os << l.schema; break;
      case HilbLine::Kind::MP: os << "(mp " << l.a << " " << l.b << ")"; break;
      case HilbLine::Kind::Gen: os << "(gen " << l.a << " " << l.var << ")"; break;
      case HilbLine::Kind::Unfold: os << "(unfold " << l.a << ")"; break;
    }
    os << ")";
  }
  os << ")";
  return os.str();
}

inline Nat encode(const HilbProof& p) { return TokenCodec::instance().encode_text(hilbert_sexpr(p)); }

inline HilbProof decode_hilbert(const Nat& code)
{
  return detail::decode_with(code, [](const SExpr& e) {
    if (!e.is_list || e.list.size() < 2 || e.list[0].is_list || e.list[0].atom != "hilbproof") {
      throw DecodeError("not a hilbproof");
    }
    HilbProof p;
    p.goal = formula_from_sexpr(e.list[1]);
    for (std::size_t i = 2; i < e.list.size(); ++i) {
      const SExpr& x = e.list[i];
      if (!x.is_list || x.list.size() != 3 || x.list[0].is_list || x.list[0].atom != "lemma") {
        throw DecodeError("bad hilbproof line");
      }
      HilbLine l;
      l.formula = formula_from_sexpr(x.list[1]);
      const SExpr& j = x.list[2];
      if (!j.is_list) {
        l.kind = HilbLine::Kind::Schema;
        l.schema = j.atom;
      } else {
        if (j.list.empty() || j.list[0].is_list) throw DecodeError("bad hilbproof justification");
        const std::string& h = j.list[0].atom;
        auto num = [&](std::size_t k) { return static_cast<std::size_t>(detail::atom_int(j.list.at(k))); };
        if (h == "axiom" && j.list.size() == 2) {
          l.kind = HilbLine::Kind::Axiom;
          l.axiom = num(1);
        } else if (h == "mp" && j.list.size() == 3) {
          l.kind = HilbLine::Kind::MP;
          l.a = num(1);
          l.b = num(2);
        } else if (h == "gen" && j.list.size() == 3 && !j.list[2].is_list) {
          l.kind = HilbLine::Kind::Gen;
          l.a = num(1);
          l.var = j.list[2].atom;
        } else if (h == "unfold" && j.list.size() == 2) {
          l.kind = HilbLine::Kind::Unfold;
          l.a = num(1);
        } else {
          throw DecodeError("bad hilbproof justification '" + h + "'");
        }
      }
      p.lines.push_back(std::move(l));
    }
    return p;
  });
}

}  // namespace tlem

#endif  // TLEM_HILBERT_HPP
