#ifndef TLEM_CHECK_HPP
#define TLEM_CHECK_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tlem/ast.hpp"
#include "tlem/proof.hpp"
#include "tlem/rank.hpp"
#include "tlem/sexpr.hpp"

namespace tlem {

struct Verdict {
  bool valid = false;
  std::string diagnostic;  // empty when valid
  int node = 0;            // first offending node id, 0 when not node-specific
  int index = 0;           // Tab-1 chains: 1-based failing pair index

  explicit operator bool() const { return valid; }

  static Verdict ok() { return {true, {}, 0, 0}; }
  static Verdict bad(std::string why, int node = 0) { return {false, std::move(why), node, 0}; }
};

/// Top-level abbreviation step only: a bounded quantifier becomes its
/// unbounded form; the body is left as written.
inline Formula expand_top(const Formula& f)
{
  if (f.kind() == Formula::Kind::BForall) {
    return Formula::forall(f.var(), Formula::implies(Formula::leq(Term::var(f.var()), f.bound()), f.body()));
  }
  if (f.kind() == Formula::Kind::BExists) {
    return Formula::exists(f.var(), Formula::conj(Formula::leq(Term::var(f.var()), f.bound()), f.body()));
  }
  return f;
}

/// Conclusion of rule 2 applied to (not X), or nullopt when X has no rule-2 form.
inline std::optional<Formula> rule2_conclusion(const Formula& negated)
{
  using K = Formula::Kind;
  if (negated.kind() != K::Not) return std::nullopt;
  Formula x = expand_top(negated.sub());
  switch (x.kind()) {
    case K::Not: return x.sub();
    case K::Or: return Formula::conj(Formula::neg(x.lhs()), Formula::neg(x.rhs()));
    case K::And: return Formula::disj(Formula::neg(x.lhs()), Formula::neg(x.rhs()));
    case K::Implies: return Formula::conj(x.lhs(), Formula::neg(x.rhs()));
    case K::Exists: return Formula::forall(x.var(), Formula::neg(x.body()));
    case K::Forall: return Formula::exists(x.var(), Formula::neg(x.body()));
    default: return std::nullopt;
  }
}

namespace detail {

class TreeChecker {
 public:
  TreeChecker(const ProofTree& t, const Formula& goal, const std::vector<Formula>& axioms, const Apparatus& app)
      : t_(t), goal_(goal), axioms_(axioms), app_(app)
  {
  }

  Verdict run()
  {
    if (app_.kind == Apparatus::Kind::Tab1) return Verdict::bad("Tab-1 proofs are checked as chains");
    if (t_.nodes.empty()) return Verdict::bad("empty proof tree");
    if (!(t_.goal == goal_)) return Verdict::bad("proof goal differs from the requested goal");
    const int n = static_cast<int>(t_.nodes.size());
    children_.assign(static_cast<std::size_t>(n + 1), {});
    for (int i = 1; i <= n; ++i) {
      const ProofNode& nd = t_.node(i);
      if (nd.id != i) return Verdict::bad("node ids must run 1..n in order", i);
      if (i == 1) {
        if (nd.parent != 0) return Verdict::bad("root must have no parent", i);
        continue;
      }
      if (nd.parent < 1 || nd.parent >= i) return Verdict::bad("dangling or forward parent reference", i);
      children_[static_cast<std::size_t>(nd.parent)].push_back(i);
    }
    number_tour(n);

    if (auto v = check_structure(n); !v) return v;
    for (int i = 1; i <= n; ++i) {
      if (auto v = check_node(i); !v) return v;
    }
    if (auto v = check_freshness(n); !v) return v;
    return check_closures(n);
  }

 private:
  const ProofTree& t_;
  const Formula& goal_;
  const std::vector<Formula>& axioms_;
  const Apparatus& app_;
  std::vector<std::vector<int>> children_;
  std::vector<int> tin_, tout_;

  void number_tour(int n)
  {
    tin_.assign(static_cast<std::size_t>(n + 1), 0);
    tout_.assign(static_cast<std::size_t>(n + 1), 0);
    int clock = 0;
    std::vector<std::pair<int, std::size_t>> stack{{1, 0}};
    tin_[1] = clock++;
    while (!stack.empty()) {
      auto& [v, k] = stack.back();
      const auto& ch = children_[static_cast<std::size_t>(v)];
      if (k < ch.size()) {
        int c = ch[k++];
        tin_[static_cast<std::size_t>(c)] = clock++;
        stack.push_back({c, 0});
      } else {
        tout_[static_cast<std::size_t>(v)] = clock++;
        stack.pop_back();
      }
    }
  }

  // a is an ancestor of b, or a == b
  bool above(int a, int b) const
  {
    return tin_[static_cast<std::size_t>(a)] <= tin_[static_cast<std::size_t>(b)] &&
           tout_[static_cast<std::size_t>(b)] <= tout_[static_cast<std::size_t>(a)];
  }

  Verdict check_structure(int n) const
  {
    const ProofNode& root = t_.node(1);
    if (root.just.kind != Justification::Kind::NegatedGoal) {
      return Verdict::bad("root must be justified as the negated goal", 1);
    }
    if (!(root.formula == Formula::neg(goal_))) return Verdict::bad("root must hold the negated goal", 1);
    for (int i = 1; i <= n; ++i) {
      const auto& ch = children_[static_cast<std::size_t>(i)];
      if (ch.size() > 2) return Verdict::bad("node has more than two children", i);
      if (ch.size() == 2) {
        const Justification& a = t_.node(ch[0]).just;
        const Justification& b = t_.node(ch[1]).just;
        bool paired = a.kind == Justification::Kind::RuleApp && b.kind == Justification::Kind::RuleApp &&
                      is_branching(a.rule) && a.rule == b.rule && a.ancestor == b.ancestor;
        if (!paired) return Verdict::bad("two children must be the sibling pair of one branching rule", ch[0]);
      } else if (ch.size() == 1) {
        const Justification& a = t_.node(ch[0]).just;
        if (a.kind == Justification::Kind::RuleApp && is_branching(a.rule)) {
          return Verdict::bad("branching rule produced a single child", ch[0]);
        }
      }
    }
    return Verdict::ok();
  }

  Verdict check_node(int i) const
  {
    const ProofNode& nd = t_.node(i);
    using JK = Justification::Kind;
    switch (nd.just.kind) {
      case JK::NegatedGoal:
        if (i != 1) return Verdict::bad("negated-goal justification away from the root", i);
        return Verdict::ok();
      case JK::ProperAxiom:
        if (nd.just.axiom >= axioms_.size()) return Verdict::bad("axiom index out of range", i);
        if (!(nd.formula == axioms_[nd.just.axiom])) {
          return Verdict::bad("node differs from basis axiom " + std::to_string(nd.just.axiom), i);
        }
        return Verdict::ok();
      case JK::LogicalAxiom:
        if (!app_.admits_logical_axiom(nd.formula)) {
          return Verdict::bad("logical axiom not admitted by apparatus " + app_.label, i);
        }
        return Verdict::ok();
      case JK::RuleApp: return check_rule(i);
    }
    return Verdict::bad("unknown justification", i);
  }

  Verdict check_rule(int i) const
  {
    const ProofNode& nd = t_.node(i);
    const Justification& j = nd.just;
    const int n = static_cast<int>(t_.nodes.size());
    if (j.ancestor < 1 || j.ancestor > n) return Verdict::bad("dangling ancestor reference", i);
    if (j.ancestor == i || !above(j.ancestor, i)) {
      return Verdict::bad("cited node " + std::to_string(j.ancestor) + " is not an ancestor on this branch", i);
    }
    const Formula& a = t_.node(j.ancestor).formula;
    const Formula got = expand_bounded(nd.formula);
    auto same = [&](const Formula& expected) { return expand_bounded(expected) == got; };
    auto fail = [&](const std::string& why) {
      return Verdict::bad(std::string(rule_name(j.rule)) + ": " + why, i);
    };
    if (takes_term(j.rule) != j.term.has_value()) return fail("instantiation term missing or unexpected");
    if (takes_param(j.rule) != !j.param.empty()) return fail("parameter name missing or unexpected");
    using K = Formula::Kind;
    switch (j.rule) {
      case Rule::R1: {
        Formula x = expand_top(a);
        if (x.kind() != K::And) return fail("ancestor is not a conjunction");
        if (!same(x.lhs()) && !same(x.rhs())) return fail("node is neither conjunct");
        return Verdict::ok();
      }
      case Rule::R2: {
        auto c = rule2_conclusion(a);
        if (!c) return fail("ancestor has no rule-2 form");
        if (!same(*c)) return fail("node does not match the rule-2 conclusion");
        return Verdict::ok();
      }
      case Rule::R3:
      case Rule::R4: {
        Formula x = expand_top(a);
        if (x.kind() != (j.rule == Rule::R3 ? K::Or : K::Implies)) {
          return fail(j.rule == Rule::R3 ? "ancestor is not a disjunction" : "ancestor is not an implication");
        }
        const auto& sib = children_[static_cast<std::size_t>(nd.parent)];
        if (sib.size() != 2) return fail("branching rule needs a sibling pair");
        bool left = sib[0] == i;
        Formula want = left ? (j.rule == Rule::R3 ? x.lhs() : Formula::neg(x.lhs())) : x.rhs();
        if (!same(want)) return fail(left ? "left branch does not match" : "right branch does not match");
        return Verdict::ok();
      }
      case Rule::R5: {
        Formula x = expand_top(a);
        if (x.kind() != K::Forall) return fail("ancestor is not universal");
        if (!j.term->is_ground()) return fail("instantiation term has free variables");
        if (!same(substitute(x.body(), x.var(), *j.term))) return fail("node is not the instance");
        return Verdict::ok();
      }
      case Rule::R6: {
        Formula x = expand_top(a);
        if (x.kind() != K::Exists) return fail("ancestor is not existential");
        if (!same(substitute(x.body(), x.var(), Term::param(j.param)))) return fail("node is not the instance");
        return Verdict::ok();
      }
      case Rule::A: {
        if (a.kind() != K::BForall) return fail("ancestor is not a bounded universal");
        if (!j.term->is_ground()) return fail("instantiation term has free variables");
        Formula want = Formula::implies(Formula::leq(*j.term, a.bound()), substitute(a.body(), a.var(), *j.term));
        if (!same(want)) return fail("node is not the bounded instance");
        return Verdict::ok();
      }
      case Rule::B: {
        if (a.kind() != K::BExists) return fail("ancestor is not a bounded existential");
        Term p = Term::param(j.param);
        Formula want = Formula::conj(Formula::leq(p, a.bound()), substitute(a.body(), a.var(), p));
        if (!same(want)) return fail("node is not the bounded instance");
        return Verdict::ok();
      }
    }
    return fail("unknown rule");
  }

  Verdict check_freshness(int n) const
  {
    std::map<std::string, int> introduced;
    for (int i = 1; i <= n; ++i) {
      const Justification& j = t_.node(i).just;
      if (j.kind == Justification::Kind::RuleApp && takes_param(j.rule)) {
        if (!introduced.emplace(j.param, i).second) {
          return Verdict::bad("parameter ?" + j.param + " introduced twice", i);
        }
      }
    }
    for (const Formula& ax : axioms_) {
      if (ax.has_params()) return Verdict::bad("basis axiom mentions a parameter");
    }
    if (goal_.has_params()) return Verdict::bad("goal mentions a parameter");
    for (int i = 1; i <= n; ++i) {
      std::set<std::string> ps;
      collect_params(t_.node(i).formula, ps);
      const Justification& j = t_.node(i).just;
      if (j.term) collect_params(*j.term, ps);
      for (const std::string& p : ps) {
        auto it = introduced.find(p);
        if (it == introduced.end()) return Verdict::bad("parameter ?" + p + " is never introduced", i);
        if (!above(it->second, i)) {
          return Verdict::bad("parameter ?" + p + " used outside the subtree that introduces it", i);
        }
      }
    }
    return Verdict::ok();
  }

  Verdict check_closures(int n) const
  {
    std::map<int, const Closure*> by_leaf;
    for (const Closure& c : t_.closures) {
      if (c.leaf < 1 || c.leaf > n) return Verdict::bad("closure names a missing leaf");
      if (!children_[static_cast<std::size_t>(c.leaf)].empty()) {
        return Verdict::bad("closure attached to an internal node", c.leaf);
      }
      if (!by_leaf.emplace(c.leaf, &c).second) return Verdict::bad("leaf closed twice", c.leaf);
    }
    for (int i = 1; i <= n; ++i) {
      if (!children_[static_cast<std::size_t>(i)].empty()) continue;
      auto it = by_leaf.find(i);
      if (it == by_leaf.end()) return Verdict::bad("open branch: leaf has no closure witness", i);
      const Closure& c = *it->second;
      if (c.pos < 1 || c.pos > n || c.neg < 1 || c.neg > n) return Verdict::bad("closure names a missing node", i);
      if (!above(c.pos, i) || !above(c.neg, i)) return Verdict::bad("closure pair is not on the leaf's branch", i);
      Formula p = expand_bounded(t_.node(c.pos).formula);
      Formula q = expand_bounded(t_.node(c.neg).formula);
      if (!(q == Formula::neg(p))) return Verdict::bad("closure pair is not contradictory", i);
    }
    return Verdict::ok();
  }
};

}  // namespace detail

/// Validity of a tableau proof of `goal` from `axioms` under `app`.
inline Verdict check(const ProofTree& tree, const Formula& goal, const std::vector<Formula>& axioms,
                     const Apparatus& app)
{
  return detail::TreeChecker(tree, goal, axioms, app).run();
}

/// Validity of a Tab-1 chain: every lemma Rank-1*, every sub-proof a Tab proof
/// from the basis plus the earlier lemmas, the last lemma the goal.
inline Verdict check_chain(const Tab1Chain& chain, const std::vector<Formula>& axioms)
{
  if (chain.pairs.empty()) return Verdict::bad("empty Tab-1 chain");
  std::vector<Formula> extended = axioms;
  for (std::size_t j = 0; j < chain.pairs.size(); ++j) {
    const auto& [proof, lemma] = chain.pairs[j];
    const int index = static_cast<int>(j + 1);
    if (!is_rank1star(lemma)) {
      Verdict v = Verdict::bad("rank violation at index " + std::to_string(index) + ": lemma has rank " +
                               rank(lemma).str());
      v.index = index;
      return v;
    }
    Verdict sub = check(proof, lemma, extended, Apparatus::tab());
    if (!sub) {
      Verdict v = Verdict::bad("bad sub-proof at index " + std::to_string(index) + ": " + sub.diagnostic, sub.node);
      v.index = index;
      return v;
    }
    extended.push_back(lemma);
  }
  if (!(chain.pairs.back().second == chain.goal)) {
    Verdict v = Verdict::bad("last lemma is not the goal");
    v.index = static_cast<int>(chain.pairs.size());
    return v;
  }
  return Verdict::ok();
}

}  // namespace tlem

#endif  // TLEM_CHECK_HPP
