#ifndef TLEM_AST_HPP
#define TLEM_AST_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tlem {

/// The eight U-grounding functions of L*.
enum class Fn : std::uint8_t { Add, Double, Sub, Div, Max, LogSp, Root, Count };

inline constexpr Fn kAllFns[] = {Fn::Add, Fn::Double, Fn::Sub, Fn::Div,
                                 Fn::Max, Fn::LogSp,  Fn::Root, Fn::Count};

constexpr int arity(Fn f)
{
  return (f == Fn::Double || f == Fn::LogSp) ? 1 : 2;
}

/// Add and Double are the only growth-oriented primitives.
constexpr bool is_non_growth(Fn f) { return f != Fn::Add && f != Fn::Double; }

constexpr std::string_view fn_name(Fn f)
{
  switch (f) {
    case Fn::Add: return "add";
    case Fn::Double: return "double";
    case Fn::Sub: return "sub";
    case Fn::Div: return "div";
    case Fn::Max: return "max";
    case Fn::LogSp: return "logsp";
    case Fn::Root: return "root";
    case Fn::Count: return "count";
  }
  return "?";
}

inline bool fn_from_name(std::string_view s, Fn& out)
{
  for (Fn f : kAllFns) {
    if (fn_name(f) == s) {
      out = f;
      return true;
    }
  }
  return false;
}

class ArityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::size_t hash_mix(std::size_t seed, std::size_t v)
{
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

using NameSet = std::vector<std::string>;  // sorted, unique

inline NameSet merge_names(const NameSet& a, const NameSet& b)
{
  if (a.empty()) return b;
  if (b.empty()) return a;
  NameSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool contains_name(const NameSet& s, const std::string& n)
{
  return std::binary_search(s.begin(), s.end(), n);
}

}  // namespace detail

/// Immutable term of L*. Cheap to copy (shared node).
class Term {
 public:
  enum class Kind : std::uint8_t { Zero, One, Var, Param, App, Call };

  /// The constant 0.
  Term() : Term(zero()) {}

  static Term zero() { return Term(make(Kind::Zero, Fn::Add, {}, {})); }
  static Term one() { return Term(make(Kind::One, Fn::Add, {}, {})); }
  static Term var(std::string name) { return Term(make(Kind::Var, Fn::Add, std::move(name), {})); }
  static Term param(std::string name)
  {
    return Term(make(Kind::Param, Fn::Add, std::move(name), {}));
  }
  static Term app(Fn f, std::vector<Term> args)
  {
    if (static_cast<int>(args.size()) != arity(f)) {
      throw ArityError(std::string(fn_name(f)) + " expects " + std::to_string(arity(f)) +
                       " argument(s), got " + std::to_string(args.size()));
    }
    return Term(make(Kind::App, f, {}, std::move(args)));
  }
  /// Application of a registered oracle function symbol (e.g. the substitution function).
  static Term call(std::string symbol, std::vector<Term> args)
  {
    return Term(make(Kind::Call, Fn::Add, std::move(symbol), std::move(args)));
  }

  static Term add(Term a, Term b) { return app(Fn::Add, {std::move(a), std::move(b)}); }
  static Term dbl(Term a) { return app(Fn::Double, {std::move(a)}); }
  static Term succ(Term a) { return add(std::move(a), one()); }

  Kind kind() const { return node_->kind; }
  Fn fn() const { return node_->fn; }
  const std::string& name() const { return node_->name; }
  std::span<const Term> args() const { return node_->args; }
  const Term& arg(std::size_t i) const { return node_->args.at(i); }

  std::size_t hash() const { return node_->hash; }
  /// Number of symbols (AST nodes).
  std::size_t size() const { return node_->size; }
  bool is_ground() const { return node_->free_vars.empty(); }
  bool has_params() const { return node_->has_params; }
  const detail::NameSet& free_vars() const { return node_->free_vars; }

  bool same_node(const Term& o) const { return node_ == o.node_; }

  friend bool operator==(const Term& a, const Term& b)
  {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash || a.node_->size != b.node_->size) return false;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.kind != y.kind || x.fn != y.fn || x.name != y.name || x.args.size() != y.args.size()) {
      return false;
    }
    for (std::size_t i = 0; i < x.args.size(); ++i) {
      if (!(x.args[i] == y.args[i])) return false;
    }
    return true;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    Fn fn;
    std::string name;
    std::vector<Term> args;
    std::size_t hash = 0;
    std::size_t size = 1;
    bool has_params = false;
    detail::NameSet free_vars;
  };

  static std::shared_ptr<const Node> make(Kind k, Fn f, std::string name, std::vector<Term> args)
  {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->fn = f;
    n->name = std::move(name);
    n->args = std::move(args);
    std::size_t h = detail::hash_mix(static_cast<std::size_t>(k) * 31 + 7,
                                     static_cast<std::size_t>(f));
    h = detail::hash_mix(h, std::hash<std::string>{}(n->name));
    for (const Term& a : n->args) {
      h = detail::hash_mix(h, a.hash());
      n->size += a.size();
      n->has_params = n->has_params || a.has_params();
      n->free_vars = detail::merge_names(n->free_vars, a.free_vars());
    }
    if (k == Kind::Var) n->free_vars = {n->name};
    if (k == Kind::Param) n->has_params = true;
    n->hash = h;
    return n;
  }

  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Immutable formula of L*.
class Formula {
 public:
  enum class Kind : std::uint8_t {
    Eq,
    Leq,
    Pred,  // registered oracle predicate
    Not,
    And,
    Or,
    Implies,
    Forall,
    Exists,
    BForall,
    BExists
  };

  /// Placeholder value (= 0 0), so that containers of formulas can be sized.
  Formula() : Formula(eq(Term::zero(), Term::zero())) {}

  static Formula eq(Term a, Term b) { return Formula(make(Kind::Eq, {}, {std::move(a), std::move(b)}, {})); }
  static Formula leq(Term a, Term b)
  {
    return Formula(make(Kind::Leq, {}, {std::move(a), std::move(b)}, {}));
  }
  static Formula pred(std::string symbol, std::vector<Term> args)
  {
    return Formula(make(Kind::Pred, std::move(symbol), std::move(args), {}));
  }
  static Formula neg(Formula f) { return Formula(make(Kind::Not, {}, {}, {std::move(f)})); }
  static Formula conj(Formula a, Formula b)
  {
    return Formula(make(Kind::And, {}, {}, {std::move(a), std::move(b)}));
  }
  static Formula disj(Formula a, Formula b)
  {
    return Formula(make(Kind::Or, {}, {}, {std::move(a), std::move(b)}));
  }
  static Formula implies(Formula a, Formula b)
  {
    return Formula(make(Kind::Implies, {}, {}, {std::move(a), std::move(b)}));
  }
  static Formula forall(std::string v, Formula body)
  {
    return Formula(make(Kind::Forall, std::move(v), {}, {std::move(body)}));
  }
  static Formula exists(std::string v, Formula body)
  {
    return Formula(make(Kind::Exists, std::move(v), {}, {std::move(body)}));
  }
  static Formula bforall(std::string v, Term bound, Formula body)
  {
    check_bound(v, bound);
    return Formula(make(Kind::BForall, std::move(v), {std::move(bound)}, {std::move(body)}));
  }
  static Formula bexists(std::string v, Term bound, Formula body)
  {
    check_bound(v, bound);
    return Formula(make(Kind::BExists, std::move(v), {std::move(bound)}, {std::move(body)}));
  }

  Kind kind() const { return node_->kind; }
  bool is_atom() const { return kind() <= Kind::Pred; }
  bool is_quantifier() const { return kind() >= Kind::Forall; }
  bool is_bounded() const { return kind() == Kind::BForall || kind() == Kind::BExists; }
  /// Literal: atom or negated atom.
  bool is_literal() const { return is_atom() || (kind() == Kind::Not && sub().is_atom()); }

  /// Atom arguments.
  std::span<const Term> terms() const { return node_->terms; }
  const Term& term(std::size_t i) const { return node_->terms.at(i); }
  /// Oracle predicate symbol, or bound variable name for quantifiers.
  const std::string& name() const { return node_->name; }
  const std::string& var() const { return node_->name; }
  /// Bound term of a bounded quantifier.
  const Term& bound() const { return node_->terms.at(0); }
  const Formula& sub() const { return node_->subs.at(0); }
  const Formula& lhs() const { return node_->subs.at(0); }
  const Formula& rhs() const { return node_->subs.at(1); }
  const Formula& body() const { return node_->subs.back(); }

  std::size_t hash() const { return node_->hash; }
  std::size_t size() const { return node_->size; }
  const detail::NameSet& free_vars() const { return node_->free_vars; }
  bool is_sentence() const { return node_->free_vars.empty(); }
  bool has_params() const { return node_->has_params; }
  bool has_unbounded_quantifier() const { return node_->unbounded; }

  bool same_node(const Formula& o) const { return node_ == o.node_; }

  friend bool operator==(const Formula& a, const Formula& b)
  {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash || a.node_->size != b.node_->size) return false;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.kind != y.kind || x.name != y.name || x.terms.size() != y.terms.size() ||
        x.subs.size() != y.subs.size()) {
      return false;
    }
    for (std::size_t i = 0; i < x.terms.size(); ++i) {
      if (!(x.terms[i] == y.terms[i])) return false;
    }
    for (std::size_t i = 0; i < x.subs.size(); ++i) {
      if (!(x.subs[i] == y.subs[i])) return false;
    }
    return true;
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Term> terms;
    std::vector<Formula> subs;
    std::size_t hash = 0;
    std::size_t size = 1;
    bool has_params = false;
    bool unbounded = false;
    detail::NameSet free_vars;
  };

  static void check_bound(const std::string& v, const Term& bound)
  {
    if (detail::contains_name(bound.free_vars(), v)) {
      throw std::invalid_argument("bound of quantifier over '" + v + "' mentions '" + v + "'");
    }
  }

  static std::shared_ptr<const Node> make(Kind k, std::string name, std::vector<Term> terms,
                                          std::vector<Formula> subs)
  {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->name = std::move(name);
    n->terms = std::move(terms);
    n->subs = std::move(subs);
    std::size_t h = detail::hash_mix(static_cast<std::size_t>(k) * 131 + 3,
                                     std::hash<std::string>{}(n->name));
    detail::NameSet fv;
    for (const Term& t : n->terms) {
      h = detail::hash_mix(h, t.hash());
      n->size += t.size();
      n->has_params = n->has_params || t.has_params();
      fv = detail::merge_names(fv, t.free_vars());
    }
    detail::NameSet body_fv;
    for (const Formula& f : n->subs) {
      h = detail::hash_mix(h, f.hash());
      n->size += f.size();
      n->has_params = n->has_params || f.has_params();
      n->unbounded = n->unbounded || f.has_unbounded_quantifier();
      body_fv = detail::merge_names(body_fv, f.free_vars());
    }
    if (k >= Kind::Forall) {
      n->size += 1;  // the bound variable
      auto it = std::lower_bound(body_fv.begin(), body_fv.end(), n->name);
      if (it != body_fv.end() && *it == n->name) body_fv.erase(it);
      if (k == Kind::Forall || k == Kind::Exists) n->unbounded = true;
    }
    n->free_vars = detail::merge_names(fv, body_fv);
    n->hash = h;
    return n;
  }

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};
struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// ---------------------------------------------------------------------------
// Structural utilities

/// Replaces free occurrences of variable `v` by `t`. No renaming is performed;
/// callers substitute terms that are free for `v` (ground terms in proofs).
inline Term substitute(const Term& term, const std::string& v, const Term& t)
{
  if (!detail::contains_name(term.free_vars(), v)) return term;
  switch (term.kind()) {
    case Term::Kind::Var: return term.name() == v ? t : term;
    case Term::Kind::App:
    case Term::Kind::Call: {
      std::vector<Term> args;
      args.reserve(term.args().size());
      for (const Term& a : term.args()) args.push_back(substitute(a, v, t));
      return term.kind() == Term::Kind::App ? Term::app(term.fn(), std::move(args))
                                            : Term::call(term.name(), std::move(args));
    }
    default: return term;
  }
}

inline Formula substitute(const Formula& f, const std::string& v, const Term& t)
{
  if (!detail::contains_name(f.free_vars(), v)) return f;
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Eq: return Formula::eq(substitute(f.term(0), v, t), substitute(f.term(1), v, t));
    case K::Leq: return Formula::leq(substitute(f.term(0), v, t), substitute(f.term(1), v, t));
    case K::Pred: {
      std::vector<Term> args;
      for (const Term& a : f.terms()) args.push_back(substitute(a, v, t));
      return Formula::pred(f.name(), std::move(args));
    }
    case K::Not: return Formula::neg(substitute(f.sub(), v, t));
    case K::And: return Formula::conj(substitute(f.lhs(), v, t), substitute(f.rhs(), v, t));
    case K::Or: return Formula::disj(substitute(f.lhs(), v, t), substitute(f.rhs(), v, t));
    case K::Implies:
      return Formula::implies(substitute(f.lhs(), v, t), substitute(f.rhs(), v, t));
    case K::Forall:
    case K::Exists: {
      if (f.var() == v) return f;
      Formula body = substitute(f.body(), v, t);
      return f.kind() == K::Forall ? Formula::forall(f.var(), body) : Formula::exists(f.var(), body);
    }
    case K::BForall:
    case K::BExists: {
      Term bound = substitute(f.bound(), v, t);
      Formula body = f.var() == v ? f.body() : substitute(f.body(), v, t);
      return f.kind() == K::BForall ? Formula::bforall(f.var(), bound, body)
                                    : Formula::bexists(f.var(), bound, body);
    }
  }
  return f;
}

/// True when no free variable of `t` would be captured by substituting it for `v` in `f`.
inline bool free_for(const Formula& f, const std::string& v, const Term& t)
{
  if (!detail::contains_name(f.free_vars(), v) || t.free_vars().empty()) return true;
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Eq:
    case K::Leq:
    case K::Pred: return true;
    case K::Not: return free_for(f.sub(), v, t);
    case K::And:
    case K::Or:
    case K::Implies: return free_for(f.lhs(), v, t) && free_for(f.rhs(), v, t);
    default:
      if (f.var() == v) return true;
      if (detail::contains_name(t.free_vars(), f.var())) return false;
      return free_for(f.body(), v, t);
  }
}

inline void collect_params(const Term& t, std::set<std::string>& out)
{
  if (!t.has_params()) return;
  if (t.kind() == Term::Kind::Param) out.insert(t.name());
  for (const Term& a : t.args()) collect_params(a, out);
}

inline void collect_params(const Formula& f, std::set<std::string>& out)
{
  if (!f.has_params()) return;
  for (const Term& t : f.terms()) collect_params(t, out);
  if (!f.is_atom()) {
    collect_params(f.sub(), out);
    if (f.kind() == Formula::Kind::And || f.kind() == Formula::Kind::Or ||
        f.kind() == Formula::Kind::Implies) {
      collect_params(f.rhs(), out);
    }
  }
}

inline bool mentions_param(const Term& t, const std::string& p)
{
  if (!t.has_params()) return false;
  if (t.kind() == Term::Kind::Param) return t.name() == p;
  for (const Term& a : t.args()) {
    if (mentions_param(a, p)) return true;
  }
  return false;
}

inline bool mentions_param(const Formula& f, const std::string& p)
{
  if (!f.has_params()) return false;
  for (const Term& t : f.terms()) {
    if (mentions_param(t, p)) return true;
  }
  if (f.is_atom()) return false;
  if (mentions_param(f.sub(), p)) return true;
  if (f.kind() == Formula::Kind::And || f.kind() == Formula::Kind::Or ||
      f.kind() == Formula::Kind::Implies) {
    return mentions_param(f.rhs(), p);
  }
  return false;
}

/// Collects every subterm of `t` (including `t`) that has no free variables.
inline void collect_ground_subterms(const Term& t, std::vector<Term>& out)
{
  if (t.is_ground()) out.push_back(t);
  for (const Term& a : t.args()) collect_ground_subterms(a, out);
}

inline void collect_ground_subterms(const Formula& f, std::vector<Term>& out)
{
  for (const Term& t : f.terms()) collect_ground_subterms(t, out);
  if (f.is_atom()) return;
  collect_ground_subterms(f.sub(), out);
  if (f.kind() == Formula::Kind::And || f.kind() == Formula::Kind::Or ||
      f.kind() == Formula::Kind::Implies) {
    collect_ground_subterms(f.rhs(), out);
  }
}

/// Rewrites bounded quantifiers into their unbounded abbreviations:
///   (bforall v s F) -> (forall v (implies (leq v s) F))
///   (bexists v s F) -> (exists v (and (leq v s) F))
/// Identity on formulas without bounded quantifiers.
inline Formula expand_bounded(const Formula& f)
{
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Eq:
    case K::Leq:
    case K::Pred: return f;
    case K::Not: {
      Formula s = expand_bounded(f.sub());
      return s.same_node(f.sub()) ? f : Formula::neg(s);
    }
    case K::And:
    case K::Or:
    case K::Implies: {
      Formula a = expand_bounded(f.lhs());
      Formula b = expand_bounded(f.rhs());
      if (a.same_node(f.lhs()) && b.same_node(f.rhs())) return f;
      if (f.kind() == K::And) return Formula::conj(a, b);
      if (f.kind() == K::Or) return Formula::disj(a, b);
      return Formula::implies(a, b);
    }
    case K::Forall:
    case K::Exists: {
      Formula b = expand_bounded(f.body());
      if (b.same_node(f.body())) return f;
      return f.kind() == K::Forall ? Formula::forall(f.var(), b) : Formula::exists(f.var(), b);
    }
    case K::BForall:
      return Formula::forall(
          f.var(), Formula::implies(Formula::leq(Term::var(f.var()), f.bound()), expand_bounded(f.body())));
    case K::BExists:
      return Formula::exists(
          f.var(), Formula::conj(Formula::leq(Term::var(f.var()), f.bound()), expand_bounded(f.body())));
  }
  return f;
}

}  // namespace tlem

#endif  // TLEM_AST_HPP
