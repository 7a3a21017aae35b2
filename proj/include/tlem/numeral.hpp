#ifndef TLEM_NUMERAL_HPP
#define TLEM_NUMERAL_HPP

#include <cstddef>
#include <stdexcept>

#include "tlem/arith.hpp"
#include "tlem/ast.hpp"
#include "tlem/nat.hpp"

namespace tlem {

/// A compact term over {0, 1, Add, Double} denoting `target`.
struct NumeralTerm {
  Nat target;
  Term term;
};

/// Binary-expansion numeral: start from 1 at the leading bit, then for every
/// further bit apply Double and, for a 1 bit, Add(., 1).
/// numeral(6) = Double(Add(Double(1), 1)).
inline NumeralTerm numeral(const Nat& n)
{
  if (n < 0) throw std::invalid_argument("numeral of a negative number");
  if (n == 0) return {n, Term::zero()};
  Term t = Term::one();
  const std::size_t len = bit_length(n);
  for (std::size_t i = len - 1; i-- > 0;) {
    t = Term::dbl(t);
    if (mpz_tstbit(n.get_mpz_t(), i)) t = Term::succ(t);
  }
  return {n, t};
}

inline Term numeral_term(const Nat& n) { return numeral(n).term; }

/// Symbols of a numeral term: one per occurrence of 0, 1, add, double.
inline std::size_t symbol_count(const Term& t) { return t.size(); }

/// ceil(log2 n) for n >= 1.
inline std::size_t ceil_log2(const Nat& n)
{
  if (n <= 1) return 0;
  Nat m = n - 1;
  return bit_length(m);
}

enum class GrowthKind { Doubling, Squaring };

inline const char* to_string(GrowthKind k) { return k == GrowthKind::Doubling ? "doubling" : "squaring"; }

struct GrowthSeq {
  GrowthKind kind;
  unsigned index;
  Nat value;
};

inline constexpr unsigned kDefaultSquaringCap = 16;

/// x_0 = y_0 = 2, x_i = x_{i-1} + x_{i-1}, y_i = y_{i-1} * y_{i-1}.
inline GrowthSeq growth(GrowthKind kind, unsigned n, unsigned squaring_cap = kDefaultSquaringCap)
{
  if (kind == GrowthKind::Squaring && n > squaring_cap) {
    throw std::out_of_range("squaring index " + std::to_string(n) + " exceeds cap " +
                            std::to_string(squaring_cap));
  }
  Nat v = 2;
  for (unsigned i = 1; i <= n; ++i) v = kind == GrowthKind::Doubling ? Nat(v + v) : Nat(v * v);
  return {kind, n, v};
}

/// Codeword length of a sequence value, taken as ceil(log2 value): n + 1 for
/// Doubling, 2^n for Squaring. (The LogSp function itself gives one more for
/// powers of two, since it measures x + 1.)
inline std::size_t growth_logsp(const GrowthSeq& g) { return ceil_log2(g.value); }

/// The i-th sentence of a growth sequence, with values written as numerals.
///   doubling: i = 0: (= (add 1 1) N(2));  i > 0: (= (add N(x) N(x)) N(x'))
///   squaring: i = 0: same as doubling;    i > 0: Mult(N(y), N(y), N(y'))
inline Formula growth_sentence(GrowthKind kind, unsigned i, unsigned squaring_cap = kDefaultSquaringCap)
{
  if (i == 0) return Formula::eq(Term::add(Term::one(), Term::one()), numeral_term(2));
  GrowthSeq prev = growth(kind, i - 1, squaring_cap);
  GrowthSeq cur = growth(kind, i, squaring_cap);
  Term p = numeral_term(prev.value);
  Term c = numeral_term(cur.value);
  if (kind == GrowthKind::Doubling) return Formula::eq(Term::add(p, p), c);
  return mult_relation(p, p, c);
}

}  // namespace tlem

#endif  // TLEM_NUMERAL_HPP
