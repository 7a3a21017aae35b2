#ifndef TLEM_PROOF_HPP
#define TLEM_PROOF_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tlem/ast.hpp"
#include "tlem/sexpr.hpp"

namespace tlem {

/// Tableau elimination rules: 1..6 plus the bounded-quantifier rules a and b.
enum class Rule { R1, R2, R3, R4, R5, R6, A, B };

inline const char* rule_name(Rule r)
{
  switch (r) {
    case Rule::R1: return "r1";
    case Rule::R2: return "r2";
    case Rule::R3: return "r3";
    case Rule::R4: return "r4";
    case Rule::R5: return "r5";
    case Rule::R6: return "r6";
    case Rule::A: return "ra";
    case Rule::B: return "rb";
  }
  return "?";
}

inline bool rule_from_name(const std::string& s, Rule& out)
{
  for (Rule r : {Rule::R1, Rule::R2, Rule::R3, Rule::R4, Rule::R5, Rule::R6, Rule::A, Rule::B}) {
    if (s == rule_name(r)) {
      out = r;
      return true;
    }
  }
  return false;
}

inline bool is_branching(Rule r) { return r == Rule::R3 || r == Rule::R4; }
inline bool takes_term(Rule r) { return r == Rule::R5 || r == Rule::A; }
inline bool takes_param(Rule r) { return r == Rule::R6 || r == Rule::B; }

struct Justification {
  enum class Kind { NegatedGoal, ProperAxiom, LogicalAxiom, RuleApp };
  Kind kind = Kind::NegatedGoal;
  std::size_t axiom = 0;  // ProperAxiom: index into the basis
  Rule rule = Rule::R1;   // RuleApp
  int ancestor = 0;       // RuleApp: id of the cited ancestor
  std::optional<Term> term;  // rules 5 / a: instantiation term
  std::string param;         // rules 6 / b: new parameter name

  static Justification negated_goal() { return {}; }
  static Justification proper_axiom(std::size_t index)
  {
    Justification j;
    j.kind = Kind::ProperAxiom;
    j.axiom = index;
    return j;
  }
  static Justification logical_axiom()
  {
    Justification j;
    j.kind = Kind::LogicalAxiom;
    return j;
  }
  static Justification apply(Rule r, int ancestor)
  {
    Justification j;
    j.kind = Kind::RuleApp;
    j.rule = r;
    j.ancestor = ancestor;
    return j;
  }
  static Justification instantiate(Rule r, int ancestor, Term t)
  {
    Justification j = apply(r, ancestor);
    j.term = std::move(t);
    return j;
  }
  static Justification introduce(Rule r, int ancestor, std::string p)
  {
    Justification j = apply(r, ancestor);
    j.param = std::move(p);
    return j;
  }

  friend bool operator==(const Justification& a, const Justification& b)
  {
    return a.kind == b.kind && a.axiom == b.axiom && a.rule == b.rule && a.ancestor == b.ancestor &&
           a.term.has_value() == b.term.has_value() && (!a.term || *a.term == *b.term) &&
           a.param == b.param;
  }
};

struct ProofNode {
  int id = 0;
  int parent = 0;  // 0 for the root
  Formula formula;
  Justification just;
};

/// Closure witness of a leaf: `pos` holds phi and `neg` holds (not phi), both on
/// the leaf's branch.
struct Closure {
  int leaf = 0;
  int pos = 0;
  int neg = 0;
  friend bool operator==(const Closure&, const Closure&) = default;
};

/// A tableau proof. Node ids run 1..n with nodes[i].id == i + 1; the root
/// (id 1) holds the negated goal.
struct ProofTree {
  Formula goal;
  std::vector<ProofNode> nodes;
  std::vector<Closure> closures;

  const ProofNode& node(int id) const { return nodes.at(static_cast<std::size_t>(id - 1)); }
  std::size_t size() const { return nodes.size(); }
};

/// A deduction apparatus. Tab admits no logical axioms; Xtab admits every
/// instance of excluded middle; the Z-enriched variants admit the instances
/// whose disjunct passes the filter.
struct Apparatus {
  enum class Kind { Tab, Xtab, ZEnriched, ZVarEnriched, Tab1 };
  using Filter = std::function<bool(const Formula&)>;

  Kind kind = Kind::Tab;
  Filter zfilter;
  std::string label = "tab";

  static Apparatus tab() { return {Kind::Tab, {}, "tab"}; }
  static Apparatus xtab() { return {Kind::Xtab, {}, "xtab"}; }
  static Apparatus tab1() { return {Kind::Tab1, {}, "tab1"}; }
  static Apparatus z_enriched(Filter f, std::string label = "z")
  {
    return {Kind::ZEnriched, std::move(f), std::move(label)};
  }
  static Apparatus z_var_enriched(Filter f, std::string label = "zvar")
  {
    return {Kind::ZVarEnriched, std::move(f), std::move(label)};
  }
  /// ZEnriched over a finite list of sentences.
  static Apparatus z_list(std::vector<Formula> list, std::string label = "z")
  {
    auto shared = std::make_shared<std::vector<Formula>>(std::move(list));
    return z_enriched(
        [shared](const Formula& f) {
          for (const Formula& g : *shared) {
            if (g == f) return true;
          }
          return false;
        },
        std::move(label));
  }
  static Apparatus z_var_list(std::vector<Formula> list, std::string label = "zvar")
  {
    auto shared = std::make_shared<std::vector<Formula>>(std::move(list));
    return z_var_enriched(
        [shared](const Formula& f) {
          for (const Formula& g : *shared) {
            if (g == f) return true;
          }
          return false;
        },
        std::move(label));
  }

  bool may_use_lem() const { return kind == Kind::Xtab || kind == Kind::ZEnriched || kind == Kind::ZVarEnriched; }

  /// Whether `f` is an admissible logical-axiom node under this apparatus.
  bool admits_logical_axiom(const Formula& f) const
  {
    switch (kind) {
      case Kind::Tab:
      case Kind::Tab1: return false;
      case Kind::Xtab: return lem_disjunct(f).has_value();
      case Kind::ZEnriched: {
        auto u = lem_disjunct(f);
        return u && zfilter && zfilter(*u);
      }
      case Kind::ZVarEnriched: {
        if (f.kind() != Formula::Kind::Forall) return false;
        auto u = lem_disjunct(f.body());
        if (!u || u->free_vars() != detail::NameSet{f.var()}) return false;
        return zfilter && zfilter(*u);
      }
    }
    return false;
  }

  /// For `U or (not U)` returns U.
  static std::optional<Formula> lem_disjunct(const Formula& f)
  {
    if (f.kind() != Formula::Kind::Or) return std::nullopt;
    const Formula& r = f.rhs();
    if (r.kind() != Formula::Kind::Not || !(r.sub() == f.lhs())) return std::nullopt;
    return f.lhs();
  }

  static Formula lem(const Formula& u) { return Formula::disj(u, Formula::neg(u)); }
};

/// Tab-1 proof: ordered (proof, lemma) pairs; the last lemma is the goal.
struct Tab1Chain {
  std::vector<std::pair<ProofTree, Formula>> pairs;
  Formula goal;
};

struct ProofSize {
  std::size_t nodes = 0;
  std::size_t symbols = 0;
};

/// Node count and total symbol count over all node sentences.
inline ProofSize proof_size(const ProofTree& t)
{
  if (t.nodes.empty()) throw std::invalid_argument("proof_size: empty proof tree");
  ProofSize s;
  s.nodes = t.nodes.size();
  for (const ProofNode& n : t.nodes) s.symbols += n.formula.size();
  return s;
}

inline std::size_t symbol_size(const Formula& f) { return f.size(); }

}  // namespace tlem

#endif  // TLEM_PROOF_HPP
