#ifndef TLEM_RANK_HPP
#define TLEM_RANK_HPP

#include <string>

#include "tlem/ast.hpp"

namespace tlem {

/// Position of a formula in the bounded-quantifier hierarchy.
struct Rank {
  enum class Class { Delta0, Pi, Sigma, Unranked };
  Class cls = Class::Delta0;
  int level = 0;  // n >= 1 for Pi/Sigma

  static Rank delta0() { return {Class::Delta0, 0}; }
  static Rank pi(int n) { return {Class::Pi, n}; }
  static Rank sigma(int n) { return {Class::Sigma, n}; }
  static Rank unranked() { return {Class::Unranked, 0}; }

  friend bool operator==(const Rank&, const Rank&) = default;

  std::string str() const
  {
    switch (cls) {
      case Class::Delta0: return "Delta0";
      case Class::Pi: return "Pi" + std::to_string(level);
      case Class::Sigma: return "Sigma" + std::to_string(level);
      case Class::Unranked: return "Unranked";
    }
    return "?";
  }
};

/// Class inclusion: a formula of rank `a` also belongs to class `b`.
/// Delta0 sits inside every class; Pi(n) lies inside Pi(m) for m >= n and
/// inside Sigma(m) for m > n (and symmetrically).
inline bool rank_within(const Rank& a, const Rank& b)
{
  using C = Rank::Class;
  if (b.cls == C::Unranked) return true;
  if (a.cls == C::Unranked) return false;
  if (a.cls == C::Delta0) return true;
  if (b.cls == C::Delta0) return false;
  if (a.cls == b.cls) return a.level <= b.level;
  return a.level < b.level;
}

namespace detail {

inline Rank rank_neg(const Rank& r)
{
  if (r.cls == Rank::Class::Pi) return Rank::sigma(r.level);
  if (r.cls == Rank::Class::Sigma) return Rank::pi(r.level);
  return r;
}

// Least class holding both sides of a binary connective once the quantifiers
// of both are pulled to the front. Pi(n) next to Sigma(n) needs one more
// alternation; the universal block goes first.
inline Rank rank_join(const Rank& a, const Rank& b)
{
  using C = Rank::Class;
  if (a.cls == C::Unranked || b.cls == C::Unranked) return Rank::unranked();
  if (rank_within(a, b)) return b;
  if (rank_within(b, a)) return a;
  return Rank::pi(a.level + 1);
}

}  // namespace detail

/// Least class of `f` under the syntactic rules: every quantifier bounded gives
/// Delta0; a block of unbounded universals over a Sigma(n-1) (or lower) matrix
/// gives Pi(n); symmetrically for existentials. A negation swaps Pi and Sigma.
/// Connectives are classified through their prenex form.
inline Rank rank(const Formula& f)
{
  using K = Formula::Kind;
  using C = Rank::Class;
  if (!f.has_unbounded_quantifier()) return Rank::delta0();
  switch (f.kind()) {
    case K::Forall: {
      Rank r = rank(f.body());
      if (r.cls == C::Delta0) return Rank::pi(1);
      if (r.cls == C::Pi) return r;
      if (r.cls == C::Sigma) return Rank::pi(r.level + 1);
      return Rank::unranked();
    }
    case K::Exists: {
      Rank r = rank(f.body());
      if (r.cls == C::Delta0) return Rank::sigma(1);
      if (r.cls == C::Sigma) return r;
      if (r.cls == C::Pi) return Rank::sigma(r.level + 1);
      return Rank::unranked();
    }
    case K::Not: return detail::rank_neg(rank(f.sub()));
    case K::And:
    case K::Or: return detail::rank_join(rank(f.lhs()), rank(f.rhs()));
    case K::Implies: return detail::rank_join(detail::rank_neg(rank(f.lhs())), rank(f.rhs()));
    default: return Rank::unranked();
  }
}

inline bool is_delta0(const Formula& f) { return !f.has_unbounded_quantifier(); }

/// Rank-1*: encodable as a Pi1* or Sigma1* formula.
inline bool is_rank1star(const Formula& f)
{
  Rank r = rank(f);
  return rank_within(r, Rank::pi(1)) || rank_within(r, Rank::sigma(1));
}

}  // namespace tlem

#endif  // TLEM_RANK_HPP
