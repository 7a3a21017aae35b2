#ifndef TLEM_SEARCH_HPP
#define TLEM_SEARCH_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tlem/ast.hpp"
#include "tlem/check.hpp"
#include "tlem/eval.hpp"
#include "tlem/group1.hpp"
#include "tlem/numeral.hpp"
#include "tlem/proof.hpp"
#include "tlem/prune.hpp"
#include "tlem/rank.hpp"

namespace tlem {

struct SearchBudget {
  std::size_t max_nodes = 10000;  // nodes created, summed over all attempts
  unsigned max_depth = 6;         // instantiation depth for iterative deepening
};

struct SearchResult {
  bool found = false;
  ProofTree tree;
  std::size_t nodes_explored = 0;
  std::string method;  // "delta0" or "tableau"
};

class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("search budget exhausted") {}
};

namespace detail {

class TreeBuilder {
 public:
  TreeBuilder(const Formula& goal, std::size_t& counter, std::size_t limit) : counter_(counter), limit_(limit)
  {
    tree.goal = goal;
  }

  int add(int parent, Formula f, Justification j)
  {
    if (counter_ >= limit_) throw BudgetExhausted();
    ++counter_;
    ProofNode n;
    n.id = static_cast<int>(tree.nodes.size()) + 1;
    n.parent = parent;
    n.formula = std::move(f);
    n.just = std::move(j);
    tree.nodes.push_back(std::move(n));
    return tree.nodes.back().id;
  }

  void close(int leaf, int pos, int neg) { tree.closures.push_back({leaf, pos, neg}); }
  const Formula& formula(int id) const { return tree.node(id).formula; }

  ProofTree tree;

 private:
  std::size_t& counter_;
  std::size_t limit_;
};

struct TacticFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool mentions_oracles(const Term& t)
{
  if (t.kind() == Term::Kind::Call) return true;
  for (const Term& a : t.args()) {
    if (mentions_oracles(a)) return true;
  }
  return false;
}

inline bool mentions_oracles(const Formula& f)
{
  if (f.kind() == Formula::Kind::Pred) return true;
  for (const Term& t : f.terms()) {
    if (mentions_oracles(t)) return true;
  }
  if (f.is_atom()) return false;
  if (mentions_oracles(f.sub())) return true;
  if (f.kind() == Formula::Kind::And || f.kind() == Formula::Kind::Or || f.kind() == Formula::Kind::Implies) {
    return mentions_oracles(f.rhs());
  }
  return false;
}

/// Evaluation-guided proofs of true Delta0* sentences from the Group-1 set.
///
/// The negated goal is decomposed along its falsity; bounded parameters are
/// split into cases p = 0, ..., p = s; every atom is settled by deriving
/// t = c(v) for each term, where c(v) is the successor numeral
/// (add ... (add 0 1) ... 1), through the congruence and recursion axioms.
class Delta0Tactic {
 public:
  static constexpr unsigned long kValueCap = 4096;

  Delta0Tactic(TreeBuilder& b, const std::vector<Formula>& axioms) : b_(b), axioms_(axioms)
  {
    for (const NamedAxiom& a : group1_axioms()) {
      for (std::size_t i = 0; i < axioms.size(); ++i) {
        if (axioms[i] == a.formula) {
          index_.emplace(a.name, i);
          break;
        }
      }
    }
  }

  bool has_group1() const { return index_.size() == group1_axioms().size(); }

  void prove(const Formula& goal)
  {
    int root = b_.add(0, Formula::neg(goal), Justification::negated_goal());
    tip_ = root;
    note(root);
    refute(root);
  }

 private:
  struct Mark {
    std::size_t undo;
    int tip;
    Env env;
  };

  TreeBuilder& b_;
  const std::vector<Formula>& axioms_;
  std::map<std::string, std::size_t> index_;
  std::unordered_map<Formula, int, FormulaHash> facts_;
  std::vector<Formula> undo_;
  Env env_;
  int tip_ = 0;
  int next_param_ = 1;
  std::vector<Term> numerals_{Term::zero()};

  Mark save() const { return {undo_.size(), tip_, env_}; }
  void restore(const Mark& m)
  {
    while (undo_.size() > m.undo) {
      facts_.erase(undo_.back());
      undo_.pop_back();
    }
    tip_ = m.tip;
    env_ = m.env;
  }

  const Formula& fml(int id) const { return b_.formula(id); }

  void note(int id)
  {
    const Formula& f = fml(id);
    if (facts_.emplace(f, id).second) undo_.push_back(f);
  }

  int find(const Formula& f) const
  {
    auto it = facts_.find(f);
    return it == facts_.end() ? 0 : it->second;
  }

  int put(const Formula& f, Justification j)
  {
    if (int id = find(f)) return id;
    tip_ = b_.add(tip_, f, std::move(j));
    note(tip_);
    return tip_;
  }

  // successor numeral
  const Term& c(unsigned long n)
  {
    if (n > kValueCap) throw TacticFailure("value too large for successor numerals");
    while (numerals_.size() <= n) numerals_.push_back(Term::succ(numerals_.back()));
    return numerals_[n];
  }

  static bool canon(const Term& t, unsigned long& n)
  {
    if (t.kind() == Term::Kind::Zero) {
      n = 0;
      return true;
    }
    if (t.kind() == Term::Kind::App && t.fn() == Fn::Add && t.arg(1).kind() == Term::Kind::One &&
        canon(t.arg(0), n)) {
      ++n;
      return true;
    }
    return false;
  }

  unsigned long val(const Term& t) const
  {
    Nat v = eval_term(t, OracleTable{}, env_);
    if (v > kValueCap) throw TacticFailure("value too large for successor numerals");
    return v.get_ui();
  }

  bool truth(const Formula& f) const
  {
    Truth t = eval_formula(f, env_);
    if (t == Truth::BudgetExceeded) throw TacticFailure("undecided subformula");
    return t == Truth::True;
  }

  int ax(const char* name)
  {
    auto it = index_.find(name);
    if (it == index_.end()) throw TacticFailure(std::string("basis lacks ") + name);
    return put(axioms_[it->second], Justification::proper_axiom(it->second));
  }

  int inst(int node, std::initializer_list<Term> ts)
  {
    int cur = node;
    for (const Term& t : ts) {
      const Formula& f = fml(cur);
      if (f.kind() != Formula::Kind::Forall) throw std::logic_error("instantiating a non-universal node");
      cur = put(substitute(f.body(), f.var(), t), Justification::instantiate(Rule::R5, cur, t));
    }
    return cur;
  }

  // Modus ponens on (A -> B) with A already on the branch: the rule-4 pair
  // closes (not A) at once and continues on B.
  int mp(int impl)
  {
    const Formula f = fml(impl);
    if (f.kind() != Formula::Kind::Implies) throw std::logic_error("mp on a non-implication");
    if (int have = find(f.rhs())) return have;
    int a = find(f.lhs());
    if (!a) throw std::logic_error("mp: antecedent not on the branch: " + to_string(f.lhs()));
    int l = b_.add(tip_, Formula::neg(f.lhs()), Justification::apply(Rule::R4, impl));
    int r = b_.add(tip_, f.rhs(), Justification::apply(Rule::R4, impl));
    b_.close(l, a, l);
    tip_ = r;
    note(r);
    return r;
  }

  int refl(const Term& t) { return inst(ax("eq_refl"), {t}); }

  int symm(int e)
  {
    const Formula& f = fml(e);
    Term a = f.term(0), b = f.term(1);
    if (a == b) return e;
    if (int have = find(Formula::eq(b, a))) return have;
    return mp(inst(ax("eq_symm"), {a, b}));
  }

  int trans(int e1, int e2)
  {
    Term a = fml(e1).term(0), m = fml(e1).term(1), z = fml(e2).term(1);
    if (a == m) return e2;
    if (m == z) return e1;
    if (int have = find(Formula::eq(a, z))) return have;
    return mp(mp(inst(ax("eq_trans"), {a, m, z})));
  }

  // (= t c(v))
  int canon_eq(const Term& t)
  {
    unsigned long n = 0;
    if (canon(t, n)) return refl(t);
    const unsigned long v = val(t);
    if (int have = find(Formula::eq(t, c(v)))) return have;
    switch (t.kind()) {
      case Term::Kind::One: return ax("one_def");
      case Term::Kind::Param: throw std::logic_error("parameter without a case fact");
      case Term::Kind::App: break;
      default: throw TacticFailure("term outside the tactic's fragment");
    }
    if (t.fn() == Fn::Add && t.arg(1).kind() == Term::Kind::One) {
      int e = canon_eq(t.arg(0));
      int one = refl(Term::one());
      int step = inst(ax("cong_add"), {t.arg(0), Term::one(), fml(e).term(1), Term::one()});
      (void)one;
      return mp(mp(step));
    }
    std::vector<unsigned long> vals;
    bool all_canon = true;
    for (const Term& a : t.args()) {
      unsigned long k = 0;
      if (!canon(a, k)) all_canon = false;
      vals.push_back(val(a));
    }
    if (all_canon) return canon_app(t.fn(), vals);
    std::vector<int> eqs;
    for (const Term& a : t.args()) eqs.push_back(canon_eq(a));
    int step;
    if (arity(t.fn()) == 1) {
      step = inst(ax(cong_name(t.fn())), {t.arg(0), c(vals[0])});
    } else {
      step = inst(ax(cong_name(t.fn())), {t.arg(0), t.arg(1), c(vals[0]), c(vals[1])});
    }
    for (std::size_t i = 0; i < eqs.size(); ++i) step = mp(step);
    int app = canon_app(t.fn(), vals);
    return trans(step, app);
  }

  static const char* cong_name(Fn f)
  {
    switch (f) {
      case Fn::Add: return "cong_add";
      case Fn::Double: return "cong_double";
      case Fn::Sub: return "cong_sub";
      case Fn::Div: return "cong_div";
      case Fn::Max: return "cong_max";
      case Fn::LogSp: return "cong_logsp";
      case Fn::Root: return "cong_root";
      case Fn::Count: return "cong_count";
    }
    return "";
  }

  Term app_of(Fn f, const std::vector<unsigned long>& v)
  {
    if (arity(f) == 1) return Term::app(f, {c(v[0])});
    return Term::app(f, {c(v[0]), c(v[1])});
  }

  // (= f(c(a), c(b)) c(value))
  int canon_app(Fn f, const std::vector<unsigned long>& v)
  {
    Term lhs = app_of(f, v);
    const unsigned long a = v[0];
    const unsigned long b = v.size() > 1 ? v[1] : 0;
    std::vector<Nat> nv;
    for (unsigned long x : v) nv.emplace_back(x);
    const unsigned long value = Nat(apply_fn(f, nv)).get_ui();
    if (value > kValueCap) throw TacticFailure("value too large for successor numerals");
    if (int have = find(Formula::eq(lhs, c(value)))) return have;
    switch (f) {
      case Fn::Add: {
        if (b == 0) return inst(ax("add_zero"), {c(a)});
        int step = inst(ax("add_succ"), {c(a), c(b - 1)});
        return trans(step, canon_eq(fml(step).term(1)));
      }
      case Fn::Double: {
        int step = inst(ax("double_def"), {c(a)});
        return trans(step, canon_eq(fml(step).term(1)));
      }
      case Fn::Sub: {
        if (b == 0) return inst(ax("sub_zero"), {c(a)});
        if (a == 0) return inst(ax("sub_zero_l"), {c(b)});
        int step = inst(ax("sub_succ"), {c(a - 1), c(b - 1)});
        return trans(step, canon_app(Fn::Sub, {a - 1, b - 1}));
      }
      case Fn::Max: {
        if (a <= b) {
          canon_leq(a, b);
          return mp(inst(ax("max_le"), {c(a), c(b)}));
        }
        canon_nleq(a, b);
        return mp(inst(ax("max_gt"), {c(a), c(b)}));
      }
      case Fn::Div: {
        if (b == 0) return inst(ax("div_zero"), {c(a)});
        if (a < b) {
          canon_nleq(b, a);
          return mp(inst(ax("div_small"), {c(a), c(b)}));
        }
        int sum = canon_app(Fn::Add, {a - b, b});
        int back = symm(sum);
        refl(c(b));
        Term split = fml(sum).term(0);
        int cong = mp(mp(inst(ax("cong_div"), {c(a), c(b), split, c(b)})));
        (void)back;
        int step = inst(ax("div_step"), {c(a - b), c(b - 1)});
        int rest = canon_eq(fml(step).term(1));
        return trans(trans(cong, step), rest);
      }
      case Fn::LogSp: {
        if (a == 0) return ax("logsp_zero");
        int step = inst(ax("logsp_succ"), {c(a - 1)});
        return trans(step, canon_eq(fml(step).term(1)));
      }
      case Fn::Count: {
        if (b == 0) return inst(ax("count_zero"), {c(a)});
        int step = inst(ax("count_succ"), {c(a), c(b - 1)});
        return trans(step, canon_eq(fml(step).term(1)));
      }
      case Fn::Root: {
        if (b == 0) return inst(ax("root_zero"), {c(a)});
        if (b == 1) return inst(ax("root_one"), {c(a)});
        if (a == 0) return inst(ax("root_of_zero"), {c(b - 1)});
        root_bound(a, b, value, true);
        if (value >= 2) {
          root_bound(a, b, value - 1, false);
        } else {
          inst(ax("root_pos"), {c(a - 1), c(b - 1)});
        }
        return mp(mp(inst(ax("leq_antisym"), {lhs, c(value - 1)})));
      }
    }
    throw std::logic_error("unknown function");
  }

  // (leq (root c(a) c(b)) c(k)) or its negation, for b >= 2 and k >= 1.
  int root_bound(unsigned long a, unsigned long b, unsigned long k, bool holds)
  {
    Term r = Term::app(Fn::Root, {c(a), c(b)});
    Formula target = Formula::leq(r, c(k));
    if (int have = find(holds ? target : Formula::neg(target))) return have;
    int step = inst(ax(holds ? "root_le_step" : "root_nle_step"), {c(a), c(b - 2), c(k - 1)});
    Formula premise = fml(step).lhs();
    prove_atom(holds ? premise : premise.sub(), holds);
    return mp(step);
  }

  int canon_leq(unsigned long a, unsigned long b)
  {
    if (int have = find(Formula::leq(c(a), c(b)))) return have;
    if (a == 0) return inst(ax("leq_zero"), {c(b)});
    canon_leq(a - 1, b - 1);
    return mp(inst(ax("leq_succ"), {c(a - 1), c(b - 1)}));
  }

  int canon_nleq(unsigned long a, unsigned long b)
  {
    if (int have = find(Formula::neg(Formula::leq(c(a), c(b))))) return have;
    if (b == 0) return inst(ax("nleq_zero"), {c(a - 1)});
    canon_nleq(a - 1, b - 1);
    return mp(inst(ax("nleq_succ"), {c(a - 1), c(b - 1)}));
  }

  int canon_neq(unsigned long a, unsigned long b)
  {
    if (int have = find(Formula::neg(Formula::eq(c(a), c(b))))) return have;
    if (a == 0) return inst(ax("neq_zero_l"), {c(b - 1)});
    if (b == 0) return inst(ax("neq_zero_r"), {c(a - 1)});
    canon_neq(a - 1, b - 1);
    return mp(inst(ax("neq_succ"), {c(a - 1), c(b - 1)}));
  }

  int eq_between(const Term& x, const Term& y)
  {
    if (int have = find(Formula::eq(x, y))) return have;
    if (x == y) return refl(x);
    int ex = canon_eq(x);
    if (fml(ex).term(1) == y) return ex;
    int ey = canon_eq(y);
    if (fml(ey).term(1) == x) return symm(ey);
    return trans(ex, symm(ey));
  }

  // Node holding `atom` (holds) or (not atom).
  int prove_atom(const Formula& atom, bool holds)
  {
    Formula target = holds ? atom : Formula::neg(atom);
    if (int have = find(target)) return have;
    const Term& x = atom.term(0);
    const Term& y = atom.term(1);
    if (atom.kind() == Formula::Kind::Eq && holds) return eq_between(x, y);
    const unsigned long vx = val(x), vy = val(y);
    int base;
    const char* cong;
    if (atom.kind() == Formula::Kind::Eq) {
      base = canon_neq(vx, vy);
      cong = "cong_neq";
    } else if (holds) {
      base = canon_leq(vx, vy);
      cong = "cong_leq";
    } else {
      base = canon_nleq(vx, vy);
      cong = "cong_nleq";
    }
    if (x == c(vx) && y == c(vy)) return base;
    canon_eq(x);
    canon_eq(y);
    return mp(mp(mp(inst(ax(cong), {x, y, c(vx), c(vy)}))));
  }

  void close_with(int pos, int neg) { b_.close(tip_, pos, neg); }

  // Closes the current branch, given node `n` whose sentence is false.
  void refute(int n)
  {
    const Formula f = fml(n);
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Eq:
      case K::Leq: {
        int m = prove_atom(f, false);
        close_with(n, m);
        return;
      }
      case K::Pred: throw TacticFailure("oracle atom");
      case K::Not: {
        if (f.sub().is_atom()) {
          if (f.sub().kind() == K::Pred) throw TacticFailure("oracle atom");
          int m = prove_atom(f.sub(), true);
          close_with(m, n);
          return;
        }
        auto concl = rule2_conclusion(f);
        refute(put(*concl, Justification::apply(Rule::R2, n)));
        return;
      }
      case K::And: {
        if (!truth(f.lhs())) {
          refute(put(f.lhs(), Justification::apply(Rule::R1, n)));
        } else {
          refute(put(f.rhs(), Justification::apply(Rule::R1, n)));
        }
        return;
      }
      case K::Or: split(n, f.lhs(), f.rhs(), Rule::R3); return;
      case K::Implies: split(n, Formula::neg(f.lhs()), f.rhs(), Rule::R4); return;
      case K::BForall: {
        Term w = c(counterexample(f.var(), f.body(), val(f.bound())));
        Formula inst_f = Formula::implies(Formula::leq(w, f.bound()), substitute(f.body(), f.var(), w));
        refute(put(inst_f, Justification::instantiate(Rule::A, n, w)));
        return;
      }
      case K::Forall: {
        // arises from (not (bexists ...)) as (forall v (not (and (leq v s) F)))
        auto bound = bound_of(f.var(), f.body());
        Term w = c(counterexample(f.var(), f.body(), bound ? val(*bound) : 64));
        refute(put(substitute(f.body(), f.var(), w), Justification::instantiate(Rule::R5, n, w)));
        return;
      }
      case K::BExists: {
        std::string p = fresh();
        Term pt = Term::param(p);
        Formula body = Formula::conj(Formula::leq(pt, f.bound()), substitute(f.body(), f.var(), pt));
        cases(put(body, Justification::introduce(Rule::B, n, p)), p);
        return;
      }
      case K::Exists: {
        std::string p = fresh();
        Term pt = Term::param(p);
        int m = put(substitute(f.body(), f.var(), pt), Justification::introduce(Rule::R6, n, p));
        if (fml(m).kind() == K::Not) m = put(*rule2_conclusion(fml(m)), Justification::apply(Rule::R2, m));
        cases(m, p);
        return;
      }
    }
  }

  std::string fresh() { return "p" + std::to_string(next_param_++); }

  // Bound term s when `body` is (not (and (leq v s) F)) or (not (implies (leq v s) F)).
  static std::optional<Term> bound_of(const std::string& v, const Formula& body)
  {
    Formula x = body.kind() == Formula::Kind::Not ? body.sub() : body;
    if ((x.kind() == Formula::Kind::And || x.kind() == Formula::Kind::Implies) &&
        x.lhs().kind() == Formula::Kind::Leq && x.lhs().term(0) == Term::var(v)) {
      return x.lhs().term(1);
    }
    return std::nullopt;
  }

  unsigned long counterexample(const std::string& v, const Formula& body, unsigned long last)
  {
    for (unsigned long w = 0; w <= last; ++w) {
      Env e = env_;
      e[v] = Nat(w);
      Truth t = eval_formula(body, e);
      if (t == Truth::False) return w;
    }
    throw TacticFailure("no counterexample inside the bound");
  }

  // Closed, with every parameter fixed by an enclosing case.
  template <class T>
  bool settled(const T& x) const
  {
    std::set<std::string> ps;
    collect_params(x, ps);
    for (const std::string& p : ps) {
      if (!env_.count("?" + p)) return false;
    }
    return true;
  }

  void hoist_term(const Term& t)
  {
    unsigned long n = 0;
    if (t.is_ground() && settled(t)) {
      if (!canon(t, n)) canon_eq(t);
      return;
    }
    if (t.kind() == Term::Kind::App) {
      for (const Term& a : t.args()) hoist_term(a);
    }
  }

  // Derives the closed pieces of `f` on the current branch, so that the
  // branches split off below share them instead of each rebuilding them.
  void hoist(const Formula& f)
  {
    using K = Formula::Kind;
    try {
      switch (f.kind()) {
        case K::Eq:
        case K::Leq:
          if (f.is_sentence() && settled(f)) {
            prove_atom(f, truth(f));
          } else {
            hoist_term(f.term(0));
            hoist_term(f.term(1));
          }
          return;
        case K::Pred: return;
        case K::Not: hoist(f.sub()); return;
        case K::And:
        case K::Or:
        case K::Implies:
          hoist(f.lhs());
          hoist(f.rhs());
          return;
        case K::BForall:
        case K::BExists:
          hoist_term(f.bound());
          hoist(f.body());
          return;
        case K::Forall:
        case K::Exists: hoist(f.body()); return;
      }
    } catch (const TacticFailure&) {
      // whatever was derived so far stays; the branches redo the rest
    }
  }

  void split(int n, const Formula& left, const Formula& right, Rule rule)
  {
    hoist(left);
    hoist(right);
    int l = b_.add(tip_, left, Justification::apply(rule, n));
    int r = b_.add(tip_, right, Justification::apply(rule, n));
    Mark m = save();
    tip_ = l;
    note(l);
    refute(l);
    restore(m);
    tip_ = r;
    note(r);
    refute(r);
    restore(m);
  }

  // `n` holds (and (leq p s) F) with F false for every value of p up to s.
  void cases(int n, const std::string& p)
  {
    const Formula f = fml(n);
    if (f.kind() != Formula::Kind::And || f.lhs().kind() != Formula::Kind::Leq) {
      throw TacticFailure("unexpected bounded-witness shape");
    }
    Term pt = Term::param(p);
    Term s = f.lhs().term(1);
    int le = put(f.lhs(), Justification::apply(Rule::R1, n));
    int body = put(f.rhs(), Justification::apply(Rule::R1, n));
    hoist(f.rhs());
    unsigned long k = val(s);
    unsigned long dummy = 0;
    if (!canon(s, dummy)) {
      int se = canon_eq(s);
      symm(se);
      refl(pt);
      le = mp(mp(mp(inst(ax("cong_leq"), {pt, c(k), pt, s}))));
    }
    (void)le;
    for (;;) {
      if (k == 0) {
        mp(inst(ax("leq_zero_eq"), {pt}));
        env_["?" + p] = Nat(0);
        refute(body);
        return;
      }
      int disj = mp(inst(ax("leq_split"), {pt, c(k - 1)}));
      int l = b_.add(tip_, fml(disj).lhs(), Justification::apply(Rule::R3, disj));
      int r = b_.add(tip_, fml(disj).rhs(), Justification::apply(Rule::R3, disj));
      Mark m = save();
      tip_ = l;
      note(l);
      env_["?" + p] = Nat(k);
      refute(body);
      restore(m);
      tip_ = r;
      note(r);
      --k;
    }
  }
};

/// Generic tableau search under iterative deepening on instantiation depth.
class TableauSearch {
 public:
  TableauSearch(const Formula& goal, const std::vector<Formula>& axioms, const Apparatus& app)
      : goal_(goal), axioms_(axioms), app_(app)
  {
    collect_lem_candidates();
  }

  /// One attempt at depth `depth`; true when every branch closed.
  bool attempt(TreeBuilder& b, unsigned depth)
  {
    b_ = &b;
    depth_ = depth;
    goal_side_.clear();
    next_param_ = 1;
    Branch br;
    int root = b.add(0, Formula::neg(goal_), Justification::negated_goal());
    br.tip = root;
    br.materialized.assign(axioms_.size(), 0);
    if (enter(br, root, true)) return true;
    for (std::size_t k = 0; k < axioms_.size(); ++k) {
      if (axioms_[k].kind() == Formula::Kind::Forall || axioms_[k].kind() == Formula::Kind::BForall) continue;
      if (materialize(br, k)) return true;
    }
    return solve(br);
  }

 private:
  struct Branch {
    int tip = 0;
    std::vector<int> path;
    std::unordered_map<Formula, int, FormulaHash> present;  // fully expanded formula -> node
    std::vector<int> todo;     // alpha / delta / rule-2 nodes
    std::vector<int> betas;    // disjunctions and implications
    std::vector<int> gammas;   // universal sources
    std::vector<int> literals;
    std::vector<int> materialized;  // axiom index -> node id (0 = not yet on the branch)
    unsigned matches = 0, pools = 0, lems = 0;
    bool closed = false;
  };

  const Formula goal_;
  const std::vector<Formula>& axioms_;
  const Apparatus& app_;
  std::vector<Formula> lem_candidates_;
  TreeBuilder* b_ = nullptr;
  unsigned depth_ = 0;
  int next_param_ = 1;

  const Formula& fml(int id) const { return b_->formula(id); }

  // Nodes that descend from the negated goal (or from a logical axiom, or an
  // instantiation with a parameter term) are "goal side"; the rest come from
  // the basis alone. Goal-side material is tried first.
  std::vector<char> goal_side_;

  void mark_origin(int id)
  {
    if (goal_side_.size() <= static_cast<std::size_t>(id)) goal_side_.resize(static_cast<std::size_t>(id) + 1, 0);
    const Justification& j = b_->tree.node(id).just;
    char g = 0;
    switch (j.kind) {
      case Justification::Kind::NegatedGoal:
      case Justification::Kind::LogicalAxiom: g = 1; break;
      case Justification::Kind::ProperAxiom: g = 0; break;
      case Justification::Kind::RuleApp:
        g = goal_side_[static_cast<std::size_t>(j.ancestor)] || (j.term && j.term->has_params()) ||
            !j.param.empty();
        break;
    }
    goal_side_[static_cast<std::size_t>(id)] = g;
  }

  bool goal_side(int id) const { return goal_side_[static_cast<std::size_t>(id)] != 0; }

  void collect_lem_candidates()
  {
    if (!app_.may_use_lem()) return;
    std::vector<Formula> seen;
    auto visit = [&](auto&& self, const Formula& f) -> void {
      bool want = app_.kind == Apparatus::Kind::ZVarEnriched ? f.free_vars().size() == 1 : f.is_sentence();
      if (want && !f.has_params()) {
        bool dup = false;
        for (const Formula& s : seen) dup = dup || s == f;
        if (!dup) {
          seen.push_back(f);
          Formula node = lem_node(f);
          if (app_.admits_logical_axiom(node)) lem_candidates_.push_back(node);
        }
      }
      if (f.is_atom()) return;
      self(self, f.sub());
      if (f.kind() == Formula::Kind::And || f.kind() == Formula::Kind::Or || f.kind() == Formula::Kind::Implies) {
        self(self, f.rhs());
      }
    };
    visit(visit, goal_);
    for (const Formula& a : axioms_) visit(visit, a);
  }

  Formula lem_node(const Formula& u) const
  {
    Formula d = Apparatus::lem(u);
    if (app_.kind == Apparatus::Kind::ZVarEnriched) return Formula::forall(u.free_vars().front(), d);
    return d;
  }

  static Formula complement(const Formula& k)
  {
    return k.kind() == Formula::Kind::Not ? k.sub() : Formula::neg(k);
  }

  // Registers node `id` (already the branch tip) on the branch. Returns true
  // when the branch closes.
  bool enter(Branch& br, int id, bool source)
  {
    br.path.push_back(id);
    mark_origin(id);
    const Formula& f = fml(id);
    Formula key = expand_bounded(f);
    auto comp = br.present.find(complement(key));
    if (comp != br.present.end()) {
      bool neg = key.kind() == Formula::Kind::Not;
      b_->close(br.tip, neg ? comp->second : id, neg ? id : comp->second);
      br.closed = true;
      return true;
    }
    if (!br.present.emplace(key, id).second) return false;
    if (f.is_literal()) {
      br.literals.push_back(id);
      return false;
    }
    Formula x = expand_top(f);
    switch (x.kind()) {
      case Formula::Kind::And:
      case Formula::Kind::Not:
      case Formula::Kind::Exists: br.todo.push_back(id); break;
      case Formula::Kind::Or:
      case Formula::Kind::Implies: br.betas.push_back(id); break;
      case Formula::Kind::Forall:
        if (source) br.gammas.push_back(id);
        break;
      default: break;
    }
    return false;
  }

  bool extend(Branch& br, Formula f, Justification j, bool source = true)
  {
    Formula key = expand_bounded(f);
    if (br.present.count(key)) return false;
    br.tip = b_->add(br.tip, std::move(f), std::move(j));
    return enter(br, br.tip, source);
  }

  bool materialize(Branch& br, std::size_t k)
  {
    if (br.materialized[k]) return false;
    Formula key = expand_bounded(axioms_[k]);
    auto it = br.present.find(key);
    if (it != br.present.end()) {
      br.materialized[k] = it->second;
      return false;
    }
    br.tip = b_->add(br.tip, axioms_[k], Justification::proper_axiom(k));
    br.materialized[k] = br.tip;
    return enter(br, br.tip, true);
  }

  std::string fresh() { return "p" + std::to_string(next_param_++); }

  bool expand_alpha(Branch& br, int id)
  {
    const Formula f = fml(id);
    Formula x = expand_top(f);
    switch (x.kind()) {
      case Formula::Kind::And:
        if (extend(br, x.lhs(), Justification::apply(Rule::R1, id))) return true;
        return extend(br, x.rhs(), Justification::apply(Rule::R1, id));
      case Formula::Kind::Not: {
        auto c = rule2_conclusion(f);
        if (!c) return false;
        return extend(br, *c, Justification::apply(Rule::R2, id));
      }
      case Formula::Kind::Exists: {
        std::string p = fresh();
        Term pt = Term::param(p);
        if (f.kind() == Formula::Kind::BExists) {
          return extend(br, Formula::conj(Formula::leq(pt, f.bound()), substitute(f.body(), f.var(), pt)),
                        Justification::introduce(Rule::B, id, p));
        }
        return extend(br, substitute(x.body(), x.var(), pt), Justification::introduce(Rule::R6, id, p));
      }
      default: return false;
    }
  }

  std::pair<Formula, Formula> beta_children(const Formula& f) const
  {
    Formula x = expand_top(f);
    if (x.kind() == Formula::Kind::Or) return {x.lhs(), x.rhs()};
    return {Formula::neg(x.lhs()), x.rhs()};
  }

  bool closes_at_once(const Branch& br, const Formula& f) const
  {
    return br.present.count(complement(expand_bounded(f))) > 0;
  }

  bool branch_on(Branch& br, std::size_t index)
  {
    int id = br.betas[index];
    br.betas.erase(br.betas.begin() + static_cast<std::ptrdiff_t>(index));
    auto [lf, rf] = beta_children(fml(id));
    Rule rule = expand_top(fml(id)).kind() == Formula::Kind::Or ? Rule::R3 : Rule::R4;
    int l = b_->add(br.tip, lf, Justification::apply(rule, id));
    int r = b_->add(br.tip, rf, Justification::apply(rule, id));
    {
      Branch left = br;
      left.tip = l;
      if (!enter(left, l, true) && !solve(left)) return false;
    }
    br.tip = r;
    if (!enter(br, r, true) && !solve(br)) return false;
    return true;
  }

  // Universal prefix of a source formula.
  static void prefix_of(const Formula& f, std::vector<std::string>& vars, Formula& matrix)
  {
    Formula x = expand_top(f);
    while (x.kind() == Formula::Kind::Forall) {
      vars.push_back(x.var());
      x = expand_top(x.body());
    }
    matrix = x;
  }

  static void leaves(const Formula& f, bool pos, std::vector<std::pair<Formula, bool>>& out)
  {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Eq:
      case K::Leq:
      case K::Pred: out.emplace_back(f, pos); return;
      case K::Not: leaves(f.sub(), !pos, out); return;
      case K::And:
      case K::Or:
        leaves(f.lhs(), pos, out);
        leaves(f.rhs(), pos, out);
        return;
      case K::Implies:
        leaves(f.lhs(), !pos, out);
        leaves(f.rhs(), pos, out);
        return;
      default: return;
    }
  }

  static bool match(const Term& pat, const Term& t, const std::vector<std::string>& vars, std::map<std::string, Term>& th)
  {
    if (pat.kind() == Term::Kind::Var) {
      bool bindable = false;
      for (const auto& v : vars) bindable = bindable || v == pat.name();
      if (!bindable) return false;
      auto it = th.find(pat.name());
      if (it != th.end()) return it->second == t;
      th.emplace(pat.name(), t);
      return true;
    }
    if (pat.kind() != t.kind() || pat.args().size() != t.args().size()) return false;
    if (pat.kind() == Term::Kind::App && pat.fn() != t.fn()) return false;
    if ((pat.kind() == Term::Kind::Call || pat.kind() == Term::Kind::Param) && pat.name() != t.name()) return false;
    for (std::size_t i = 0; i < pat.args().size(); ++i) {
      if (!match(pat.args()[i], t.args()[i], vars, th)) return false;
    }
    return true;
  }

  static bool match_atom(const Formula& pat, const Formula& a, const std::vector<std::string>& vars,
                         std::map<std::string, Term>& th)
  {
    if (pat.kind() != a.kind() || pat.name() != a.name() || pat.terms().size() != a.terms().size()) return false;
    for (std::size_t i = 0; i < pat.terms().size(); ++i) {
      if (!match(pat.term(i), a.term(i), vars, th)) return false;
    }
    return true;
  }

  Formula instance_of(const Formula& f, const std::vector<std::string>& vars, const std::vector<Term>& ts) const
  {
    Formula x = expand_top(f);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      x = expand_top(substitute(x.body(), vars[i], ts[i]));
    }
    return x;
  }

  // Adds the rule-5 chain instantiating source node `id` with `ts`.
  bool instantiate(Branch& br, int id, const std::vector<Term>& ts, bool goal)
  {
    int cur = id;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      Formula x = expand_top(fml(cur));
      Formula next = substitute(x.body(), x.var(), ts[i]);
      auto it = br.present.find(expand_bounded(next));
      if (it != br.present.end()) {
        cur = it->second;
        continue;
      }
      br.tip = b_->add(br.tip, next, Justification::instantiate(Rule::R5, cur, ts[i]));
      cur = br.tip;
      bool closed = enter(br, cur, i + 1 == ts.size());
      if (goal) goal_side_[static_cast<std::size_t>(cur)] = 1;
      if (closed) return true;
    }
    return false;
  }

  struct Candidate {
    int source = 0;            // node id, or 0 when `axiom` names an axiom not yet on the branch
    std::size_t axiom = 0;
    std::vector<Term> terms;
    bool goal = true;  // driven by goal-side material
  };

  bool fresh_instance(const Branch& br, const Formula& f, const std::vector<std::string>& vars,
                      const std::vector<Term>& ts) const
  {
    return br.present.count(expand_bounded(instance_of(f, vars, ts))) == 0;
  }

  std::optional<Candidate> match_candidate(const Branch& br) const
  {
    auto try_source = [&](const Formula& f, int source, std::size_t axiom) -> std::optional<Candidate> {
      const bool source_goal = source != 0 && goal_side(source);
      std::vector<std::string> vars;
      Formula m;
      prefix_of(f, vars, m);
      if (vars.empty()) return std::nullopt;
      std::vector<std::pair<Formula, bool>> ls;
      leaves(m, true, ls);
      for (int pass = 0; pass < (source_goal ? 2 : 1); ++pass) {
      for (const auto& [pat, pos] : ls) {
        for (int lit : br.literals) {
          if (goal_side(lit) != (pass == 0)) continue;
          const Formula& lf = fml(lit);
          bool lpos = lf.kind() != Formula::Kind::Not;
          if (lpos == pos) continue;
          const Formula& atom = lpos ? lf : lf.sub();
          std::map<std::string, Term> th;
          if (!match_atom(pat, atom, vars, th) || th.size() != vars.size()) continue;
          std::vector<Term> ts;
          for (const auto& v : vars) ts.push_back(th.at(v));
          if (fresh_instance(br, f, vars, ts)) return Candidate{source, axiom, ts, pass == 0};
        }
      }
      }
      return std::nullopt;
    };
    // Sources with fewer matrix leaves first: a unit source closes the branch
    // on its first match, while a wide one only adds more literals.
    struct Source {
      std::size_t width;
      int node;
      std::size_t axiom;
    };
    std::vector<Source> sources;
    auto width = [](const Formula& f) {
      std::vector<std::string> vars;
      Formula m;
      prefix_of(f, vars, m);
      std::vector<std::pair<Formula, bool>> ls;
      leaves(m, true, ls);
      return ls.size();
    };
    for (int g : br.gammas) sources.push_back({width(fml(g)), g, 0});
    for (std::size_t k = 0; k < axioms_.size(); ++k) {
      if (!br.materialized[k]) sources.push_back({width(axioms_[k]), 0, k});
    }
    std::stable_sort(sources.begin(), sources.end(), [](const Source& a, const Source& b) { return a.width < b.width; });
    for (const Source& s : sources) {
      if (auto c = try_source(s.node ? fml(s.node) : axioms_[s.axiom], s.node, s.axiom)) return c;
    }
    return std::nullopt;
  }

  std::vector<Term> pool(const Branch& br) const
  {
    std::vector<Term> out;
    auto add = [&](const Term& t) {
      if (t.size() > 12 + 2 * depth_) return;
      for (const Term& s : out) {
        if (s == t) return;
      }
      out.push_back(t);
    };
    auto from_path = [&](bool goal_pass) {
      for (int id : br.path) {
        if (goal_side(id) != goal_pass) continue;
        std::vector<Term> sub;
        collect_ground_subterms(fml(id), sub);
        for (const Term& t : sub) add(t);
      }
    };
    from_path(true);
    std::stable_sort(out.begin(), out.end(), [](const Term& a, const Term& b) {
      if (a.has_params() != b.has_params()) return a.has_params();
      return a.has_params() && a.size() > b.size();
    });
    add(Term::zero());
    add(Term::one());
    from_path(false);
    for (unsigned k = 2; k <= depth_ + 1; ++k) add(numeral_term(Nat(k)));
    return out;
  }

  bool is_axiom_node(int id) const { return b_->tree.node(id).just.kind == Justification::Kind::ProperAxiom; }

  std::optional<Candidate> pool_candidate(const Branch& br) const
  {
    std::vector<Term> terms = pool(br);
    for (int g : br.gammas) {
      if (is_axiom_node(g) && depth_ < 2) continue;
      std::vector<std::string> vars;
      Formula m;
      prefix_of(fml(g), vars, m);
      if (vars.empty() || vars.size() > 2) continue;
      if (is_axiom_node(g) && vars.size() > 1) continue;
      std::vector<std::size_t> idx(vars.size(), 0);
      for (;;) {
        std::vector<Term> ts;
        for (std::size_t i : idx) ts.push_back(terms[i]);
        if (fresh_instance(br, fml(g), vars, ts)) return Candidate{g, 0, ts};
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == terms.size()) idx[pos++] = 0;
        if (pos == idx.size()) break;
      }
    }
    return std::nullopt;
  }

  bool apply(Branch& br, const Candidate& c)
  {
    int src = c.source;
    if (src == 0) {
      if (materialize(br, c.axiom)) return true;
      src = br.materialized[c.axiom];
    }
    return instantiate(br, src, c.terms, c.goal);
  }

  bool solve(Branch& br)
  {
    const unsigned match_cap = 4 + 6 * depth_;
    const unsigned pool_cap = 1 + depth_;
    const unsigned lem_cap = 1 + depth_ / 2;
    while (!br.closed) {
      if (!br.todo.empty()) {
        int id = br.todo.front();
        br.todo.erase(br.todo.begin());
        if (expand_alpha(br, id)) return true;
        continue;
      }
      std::optional<std::size_t> quick;
      for (std::size_t i = 0; i < br.betas.size() && !quick; ++i) {
        auto [l, r] = beta_children(fml(br.betas[i]));
        if (closes_at_once(br, l) || closes_at_once(br, r)) quick = i;
      }
      if (quick) return branch_on(br, *quick);
      if (br.matches < match_cap) {
        if (auto c = match_candidate(br)) {
          ++br.matches;
          if (apply(br, *c)) return true;
          continue;
        }
      }
      if (!br.betas.empty()) return branch_on(br, 0);
      if (br.pools < pool_cap) {
        if (auto c = pool_candidate(br)) {
          ++br.pools;
          if (apply(br, *c)) return true;
          continue;
        }
      }
      if (br.lems < lem_cap && lem_step(br)) continue;
      return false;
    }
    return true;
  }

  bool lem_step(Branch& br)
  {
    for (const Formula& cand : lem_candidates_) {
      if (br.present.count(expand_bounded(cand))) continue;
      if (app_.kind != Apparatus::Kind::ZVarEnriched) {
        Formula u = expand_bounded(cand.lhs());
        if (br.present.count(u) || br.present.count(Formula::neg(u))) continue;
      }
      ++br.lems;
      br.tip = b_->add(br.tip, cand, Justification::logical_axiom());
      enter(br, br.tip, true);
      return true;
    }
    return false;
  }
};

}  // namespace detail

/// Bounded proof search. Found trees are pruned, canonically numbered and
/// re-checked before they are returned.
inline SearchResult search(const Formula& goal, const std::vector<Formula>& axioms, const Apparatus& app,
                           const SearchBudget& budget = {})
{
  if (!goal.is_sentence()) throw std::invalid_argument("search: goal is not a sentence");
  if (app.kind == Apparatus::Kind::Tab1) throw std::invalid_argument("search: Tab-1 chains are built by search_chain");
  SearchResult res;
  std::size_t counter = 0;
  auto finish = [&](const ProofTree& raw, const char* method) {
    ProofTree t = prune(raw);
    Verdict v = check(t, goal, axioms, app);
    if (!v) throw std::logic_error(std::string("search produced an invalid proof (") + method + "): " + v.diagnostic);
    res.found = true;
    res.tree = std::move(t);
    res.method = method;
    res.nodes_explored = counter;
    return res;
  };
  try {
    if (is_delta0(goal) && !detail::mentions_oracles(goal)) {
      detail::TreeBuilder b(goal, counter, budget.max_nodes);
      detail::Delta0Tactic tactic(b, axioms);
      if (tactic.has_group1() && eval_sentence(goal) == Truth::True) {
        try {
          tactic.prove(goal);
          return finish(b.tree, "delta0");
        } catch (const detail::TacticFailure&) {
          // fall through to the generic search
        }
      }
    }
    detail::TableauSearch ts(goal, axioms, app);
    for (unsigned d = 0; d <= budget.max_depth; ++d) {
      detail::TreeBuilder b(goal, counter, budget.max_nodes);
      if (ts.attempt(b, d)) return finish(b.tree, "tableau");
    }
  } catch (const BudgetExhausted&) {
  }
  res.nodes_explored = counter;
  return res;
}

}  // namespace tlem

#endif  // TLEM_SEARCH_HPP
