#ifndef TLEM_PRUNE_HPP
#define TLEM_PRUNE_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tlem/ast.hpp"
#include "tlem/proof.hpp"

namespace tlem {

inline Term rename_params(const Term& t, const std::map<std::string, std::string>& m)
{
  if (!t.has_params()) return t;
  switch (t.kind()) {
    case Term::Kind::Param: {
      auto it = m.find(t.name());
      return it == m.end() ? t : Term::param(it->second);
    }
    case Term::Kind::App:
    case Term::Kind::Call: {
      std::vector<Term> args;
      for (const Term& a : t.args()) args.push_back(rename_params(a, m));
      return t.kind() == Term::Kind::App ? Term::app(t.fn(), std::move(args)) : Term::call(t.name(), std::move(args));
    }
    default: return t;
  }
}

inline Formula rename_params(const Formula& f, const std::map<std::string, std::string>& m)
{
  if (!f.has_params()) return f;
  using K = Formula::Kind;
  auto r = [&](const Term& t) { return rename_params(t, m); };
  auto g = [&](const Formula& x) { return rename_params(x, m); };
  switch (f.kind()) {
    case K::Eq: return Formula::eq(r(f.term(0)), r(f.term(1)));
    case K::Leq: return Formula::leq(r(f.term(0)), r(f.term(1)));
    case K::Pred: {
      std::vector<Term> args;
      for (const Term& t : f.terms()) args.push_back(r(t));
      return Formula::pred(f.name(), std::move(args));
    }
    case K::Not: return Formula::neg(g(f.sub()));
    case K::And: return Formula::conj(g(f.lhs()), g(f.rhs()));
    case K::Or: return Formula::disj(g(f.lhs()), g(f.rhs()));
    case K::Implies: return Formula::implies(g(f.lhs()), g(f.rhs()));
    case K::Forall: return Formula::forall(f.var(), g(f.body()));
    case K::Exists: return Formula::exists(f.var(), g(f.body()));
    case K::BForall: return Formula::bforall(f.var(), r(f.bound()), g(f.body()));
    case K::BExists: return Formula::bexists(f.var(), r(f.bound()), g(f.body()));
  }
  return f;
}

namespace detail {

inline std::vector<std::vector<int>> children_of(const ProofTree& t)
{
  std::vector<std::vector<int>> ch(t.nodes.size() + 1);
  for (const ProofNode& n : t.nodes) {
    if (n.parent > 0) ch[static_cast<std::size_t>(n.parent)].push_back(n.id);
  }
  return ch;
}

// One pass of dead-node removal. Returns the rebuilt tree in preorder.
inline ProofTree prune_once(const ProofTree& t)
{
  const std::size_t n = t.nodes.size();
  auto ch = children_of(t);
  std::map<int, Closure> closure_of;
  for (const Closure& c : t.closures) closure_of[c.leaf] = c;

  std::map<std::string, int> introducer;
  for (const ProofNode& nd : t.nodes) {
    if (nd.just.kind == Justification::Kind::RuleApp && takes_param(nd.just.rule)) introducer[nd.just.param] = nd.id;
  }

  std::vector<char> used(n + 1, 0);
  std::vector<int> work{1};
  for (const Closure& c : t.closures) {
    work.push_back(c.pos);
    work.push_back(c.neg);
  }
  while (!work.empty()) {
    int u = work.back();
    work.pop_back();
    if (used[static_cast<std::size_t>(u)]) continue;
    used[static_cast<std::size_t>(u)] = 1;
    const ProofNode& nd = t.node(u);
    if (nd.just.kind == Justification::Kind::RuleApp) work.push_back(nd.just.ancestor);
    std::set<std::string> ps;
    collect_params(nd.formula, ps);
    if (nd.just.term) collect_params(*nd.just.term, ps);
    for (const std::string& p : ps) {
      auto it = introducer.find(p);
      if (it != introducer.end()) work.push_back(it->second);
    }
  }

  // Decide the shape: kept[old] = true when the old node survives; the new
  // parent of each kept node and the leaf each closure moves to.
  std::vector<int> new_parent_old(n + 1, 0);
  std::vector<char> kept(n + 1, 0);
  std::vector<std::pair<int, int>> leaf_closure;  // (kept leaf old id, closure source leaf old id)
  kept[1] = 1;

  // Iterative walk: (old node whose children to process, kept node standing in for it)
  std::vector<std::pair<int, int>> stack{{1, 1}};
  while (!stack.empty()) {
    auto [p, np] = stack.back();
    stack.pop_back();
    const auto& c = ch[static_cast<std::size_t>(p)];
    if (c.empty()) {
      leaf_closure.emplace_back(np, p);
      continue;
    }
    if (c.size() == 1) {
      int x = c[0];
      if (used[static_cast<std::size_t>(x)]) {
        kept[static_cast<std::size_t>(x)] = 1;
        new_parent_old[static_cast<std::size_t>(x)] = np;
        stack.push_back({x, x});
      } else {
        stack.push_back({x, np});
      }
      continue;
    }
    int l = c[0], r = c[1];
    if (!used[static_cast<std::size_t>(l)]) {
      stack.push_back({l, np});
    } else if (!used[static_cast<std::size_t>(r)]) {
      stack.push_back({r, np});
    } else {
      for (int x : {l, r}) {
        kept[static_cast<std::size_t>(x)] = 1;
        new_parent_old[static_cast<std::size_t>(x)] = np;
      }
      stack.push_back({r, r});
      stack.push_back({l, l});
    }
  }

  // Children lists of the kept tree, then preorder numbering.
  std::vector<std::vector<int>> kch(n + 1);
  for (std::size_t i = 2; i <= n; ++i) {
    if (kept[i]) kch[static_cast<std::size_t>(new_parent_old[i])].push_back(static_cast<int>(i));
  }
  std::vector<int> new_id(n + 1, 0);
  std::vector<int> order;
  std::vector<int> st{1};
  while (!st.empty()) {
    int v = st.back();
    st.pop_back();
    new_id[static_cast<std::size_t>(v)] = static_cast<int>(order.size()) + 1;
    order.push_back(v);
    const auto& kc = kch[static_cast<std::size_t>(v)];
    for (auto it = kc.rbegin(); it != kc.rend(); ++it) st.push_back(*it);
  }

  ProofTree out;
  out.goal = t.goal;
  for (int old : order) {
    const ProofNode& nd = t.node(old);
    ProofNode m = nd;
    m.id = new_id[static_cast<std::size_t>(old)];
    m.parent = old == 1 ? 0 : new_id[static_cast<std::size_t>(new_parent_old[static_cast<std::size_t>(old)])];
    if (m.just.kind == Justification::Kind::RuleApp) m.just.ancestor = new_id[static_cast<std::size_t>(m.just.ancestor)];
    out.nodes.push_back(m);
  }
  for (auto [leaf, src] : leaf_closure) {
    auto it = closure_of.find(src);
    if (it == closure_of.end()) continue;  // open leaf: left for the checker to report
    Closure c;
    c.leaf = new_id[static_cast<std::size_t>(leaf)];
    c.pos = new_id[static_cast<std::size_t>(it->second.pos)];
    c.neg = new_id[static_cast<std::size_t>(it->second.neg)];
    out.closures.push_back(c);
  }
  std::sort(out.closures.begin(), out.closures.end(), [](const Closure& a, const Closure& b) { return a.leaf < b.leaf; });
  return out;
}

}  // namespace detail

/// Renames proof parameters to p1, p2, ... in order of introduction (node order).
inline ProofTree canonical_params(const ProofTree& t)
{
  std::map<std::string, std::string> m;
  for (const ProofNode& nd : t.nodes) {
    if (nd.just.kind == Justification::Kind::RuleApp && takes_param(nd.just.rule)) {
      m.emplace(nd.just.param, "p" + std::to_string(m.size() + 1));
    }
  }
  ProofTree out = t;
  for (ProofNode& nd : out.nodes) {
    nd.formula = rename_params(nd.formula, m);
    if (nd.just.term) nd.just.term = rename_params(*nd.just.term, m);
    if (!nd.just.param.empty()) {
      auto it = m.find(nd.just.param);
      if (it != m.end()) nd.just.param = it->second;
    }
  }
  return out;
}

/// Removes nodes that no closure depends on, collapsing branchings whose one
/// side is never used, then renumbers in preorder with canonical parameters.
inline ProofTree prune(const ProofTree& t)
{
  ProofTree cur = t;
  for (;;) {
    ProofTree next = detail::prune_once(cur);
    bool same = next.nodes.size() == cur.nodes.size();
    cur = std::move(next);
    if (same) break;
  }
  return canonical_params(cur);
}

}  // namespace tlem

#endif  // TLEM_PRUNE_HPP
