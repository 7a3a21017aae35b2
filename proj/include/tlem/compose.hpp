#ifndef TLEM_COMPOSE_HPP
#define TLEM_COMPOSE_HPP

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tlem/check.hpp"
#include "tlem/proof.hpp"
#include "tlem/prune.hpp"

namespace tlem {

/// Overhead constant in the composition bound
///   symbols(out) <= symbols(p1) + symbols(p2) + kComposeOverhead * (|phi| + |psi|).
inline constexpr std::size_t kComposeOverhead = 4;

namespace detail {

class Composer {
 public:
  Composer(const ProofTree& p1, const ProofTree& p2) : p1_(p1), p2_(p2) {}

  ProofTree run()
  {
    if (p2_.goal.kind() != Formula::Kind::Implies) throw std::invalid_argument("compose: second proof must prove an implication");
    phi_ = p2_.goal.lhs();
    psi_ = p2_.goal.rhs();
    if (!(p1_.goal == phi_)) throw std::invalid_argument("compose: first proof's goal is not the antecedent of the second");

    out_.goal = psi_;
    int root = add(0, Formula::neg(psi_), Justification::negated_goal());
    int lem = add(root, Apparatus::lem(phi_), Justification::logical_axiom());
    phi_node_ = add(lem, phi_, Justification::apply(Rule::R3, lem));
    int not_phi = add(lem, Formula::neg(phi_), Justification::apply(Rule::R3, lem));
    root_ = root;

    graft_implication(phi_node_);
    graft_antecedent(not_phi);
    return prune(out_);
  }

 private:
  int add(int parent, const Formula& f, Justification j)
  {
    ProofNode n;
    n.id = static_cast<int>(out_.nodes.size()) + 1;
    n.parent = parent;
    n.formula = f;
    n.just = std::move(j);
    out_.nodes.push_back(n);
    return n.id;
  }

  // p1's root already sits in the tree as the right sibling.
  void graft_antecedent(int at)
  {
    auto rename = fresh_names(p1_, "a");
    std::map<int, int> id{{1, at}};
    for (const ProofNode& n : p1_.nodes) {
      if (n.id == 1) continue;
      Justification j = n.just;
      if (j.kind == Justification::Kind::RuleApp) {
        j.ancestor = id.at(j.ancestor);
        if (j.term) j.term = rename_params(*j.term, rename);
        if (!j.param.empty()) j.param = rename.at(j.param);
      }
      id[n.id] = add(id.at(n.parent), rename_params(n.formula, rename), j);
    }
    for (const Closure& c : p1_.closures) out_.closures.push_back({id.at(c.leaf), id.at(c.pos), id.at(c.neg)});
  }

  // The proof of (phi -> psi) goes under the phi sibling. Its root and the
  // rule-2 node (phi and not psi) are not materialized: rule-1 nodes taken
  // from them are mapped onto the phi sibling and the root (not psi).
  void graft_implication(int at)
  {
    auto rename = fresh_names(p2_, "b");
    const Formula conj = Formula::conj(phi_, Formula::neg(psi_));
    std::map<int, int> id;       // p2 node -> out node standing for it
    std::set<int> virtual_conj;  // p2 rule-2 nodes for (phi and not psi)
    id[1] = at;
    for (const ProofNode& n : p2_.nodes) {
      if (n.id == 1) continue;
      const Justification& j = n.just;
      if (j.kind == Justification::Kind::RuleApp && j.rule == Rule::R2 && j.ancestor == 1 && n.formula == conj) {
        virtual_conj.insert(n.id);
        id[n.id] = id.at(n.parent);
        continue;
      }
      if (j.kind == Justification::Kind::RuleApp && j.rule == Rule::R1 && virtual_conj.count(j.ancestor)) {
        stand_in_[n.id] = n.formula == phi_ ? phi_node_ : root_;
        id[n.id] = id.at(n.parent);
        continue;
      }
      Justification nj = j;
      if (nj.kind == Justification::Kind::RuleApp) {
        if (nj.ancestor == 1 || virtual_conj.count(nj.ancestor)) {
          throw std::invalid_argument("compose: unsupported use of the implication proof's root");
        }
        nj.ancestor = target(id, nj.ancestor);
        if (nj.term) nj.term = rename_params(*nj.term, rename);
        if (!nj.param.empty()) nj.param = rename.at(nj.param);
      }
      id[n.id] = add(id.at(n.parent), rename_params(n.formula, rename), nj);
    }
    for (const Closure& c : p2_.closures) {
      int leaf = id.at(c.leaf);
      if (c.neg == 1) {
        close_implication(leaf, target(id, c.pos));
      } else if (virtual_conj.count(c.pos)) {
        close_negated_conj(leaf, target(id, c.neg));
      } else if (c.pos == 1 || virtual_conj.count(c.neg)) {
        throw std::invalid_argument("compose: unsupported closure on the implication proof's root");
      } else {
        out_.closures.push_back({leaf, target(id, c.pos), target(id, c.neg)});
      }
    }
  }

  // The two grafted proofs may reuse parameter names; keep them apart.
  static std::map<std::string, std::string> fresh_names(const ProofTree& t, const std::string& prefix)
  {
    std::map<std::string, std::string> m;
    for (const ProofNode& n : t.nodes) {
      if (n.just.kind == Justification::Kind::RuleApp && takes_param(n.just.rule)) {
        m.emplace(n.just.param, prefix + std::to_string(m.size() + 1));
      }
    }
    return m;
  }

  int target(const std::map<int, int>& id, int old) const
  {
    auto s = stand_in_.find(old);
    return s != stand_in_.end() ? s->second : id.at(old);
  }

  // Branch holds (phi -> psi) at `imp`, plus phi and (not psi).
  void close_implication(int leaf, int imp)
  {
    int l = add(leaf, Formula::neg(phi_), Justification::apply(Rule::R4, imp));
    int r = add(leaf, psi_, Justification::apply(Rule::R4, imp));
    out_.closures.push_back({l, phi_node_, l});
    out_.closures.push_back({r, r, root_});
  }

  // Branch holds not(phi and not psi) at `neg`.
  void close_negated_conj(int leaf, int neg)
  {
    int d = add(leaf, Formula::disj(Formula::neg(phi_), Formula::neg(Formula::neg(psi_))), Justification::apply(Rule::R2, neg));
    int l = add(d, Formula::neg(phi_), Justification::apply(Rule::R3, d));
    int r = add(d, Formula::neg(Formula::neg(psi_)), Justification::apply(Rule::R3, d));
    out_.closures.push_back({l, phi_node_, l});
    out_.closures.push_back({r, root_, r});
  }

  const ProofTree& p1_;
  const ProofTree& p2_;
  Formula phi_, psi_;
  int phi_node_ = 0;
  int root_ = 0;
  std::map<int, int> stand_in_;
  ProofTree out_;
};

}  // namespace detail

/// Linear-sum composition: from a proof of phi and a proof of (phi -> psi)
/// over the same basis, an Xtab proof of psi. Root (not psi), one excluded
/// middle node (phi or not phi), a rule-3 split, the implication proof below
/// phi and the antecedent proof below (not phi).
inline ProofTree compose_linear_sum(const ProofTree& p1, const ProofTree& p2)
{
  return detail::Composer(p1, p2).run();
}

inline std::size_t compose_bound(const ProofTree& p1, const ProofTree& p2)
{
  const Formula& phi = p2.goal.lhs();
  const Formula& psi = p2.goal.rhs();
  return proof_size(p1).symbols + proof_size(p2).symbols + kComposeOverhead * (phi.size() + psi.size());
}

}  // namespace tlem

#endif  // TLEM_COMPOSE_HPP
