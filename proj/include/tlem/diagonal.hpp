#ifndef TLEM_DIAGONAL_HPP
#define TLEM_DIAGONAL_HPP

#include <stdexcept>
#include <string>

#include "tlem/eval.hpp"
#include "tlem/godel.hpp"
#include "tlem/numeral.hpp"

namespace tlem {

inline constexpr const char* kSubSymbol = "sub";

/// sub(a, b) = code of decode(a) with its single free variable replaced by
/// numeral(b). Codes that do not denote a formula with exactly one free
/// variable are returned unchanged, which keeps the function total.
inline Nat substitution_function(const Nat& a, const Nat& b)
{
  try {
    Formula f = decode_formula(a);
    if (f.free_vars().size() != 1) return a;
    return encode(substitute(f, f.free_vars().front(), numeral_term(b)));
  } catch (const DecodeError&) {
    return a;
  }
}

inline void register_substitution(OracleTable& table)
{
  table.register_function(kSubSymbol, 2, [](const std::vector<Nat>& args) {
    return substitution_function(args[0], args[1]);
  });
}

struct Diagonal {
  Formula sentence;
  /// The embedded term sub(N(d), N(d)); it evaluates to encode(sentence).
  Term self_term;
  Nat d;
};

/// Fixed point of a one-variable template T(x):
///   d = encode(T(sub(x, x))),  S = T(sub(N(d), N(d))).
/// Then sub(N(d), N(d)) evaluates to encode(T(sub(x,x))[x := N(d)]) = encode(S).
inline Diagonal diagonalize(const Formula& tmpl)
{
  if (tmpl.free_vars().size() != 1) {
    throw std::invalid_argument("diagonalize: template must have exactly one free variable, has " +
                                std::to_string(tmpl.free_vars().size()));
  }
  const std::string& x = tmpl.free_vars().front();
  Term xx = Term::call(kSubSymbol, {Term::var(x), Term::var(x)});
  Formula with_sub = substitute(tmpl, x, xx);
  Nat d = encode(with_sub);
  Term nd = numeral_term(d);
  Term self = Term::call(kSubSymbol, {nd, nd});
  return {substitute(tmpl, x, self), self, d};
}

}  // namespace tlem

#endif  // TLEM_DIAGONAL_HPP
