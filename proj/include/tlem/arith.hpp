#ifndef TLEM_ARITH_HPP
#define TLEM_ARITH_HPP

#include <string>

#include "tlem/ast.hpp"

namespace tlem {

/// The single Delta0* definition of the 3-way multiplication relation used
/// throughout the engine. L* has no multiplication symbol, so
///   Mult(x, y, z)  :=  (y = 0 and z = 0)
///                   or (not y = 0 and Div(z, y) = x
///                                  and Div(z + (y - 1), y) = x)
/// i.e. floor(z/y) = ceil(z/y) = x, which holds exactly when z = x * y.
inline Formula mult_relation(const Term& x, const Term& y, const Term& z)
{
  const Term zero = Term::zero();
  Formula y_zero = Formula::eq(y, zero);
  Formula floor_q = Formula::eq(Term::app(Fn::Div, {z, y}), x);
  Formula ceil_q = Formula::eq(
      Term::app(Fn::Div, {Term::add(z, Term::app(Fn::Sub, {y, Term::one()})), y}), x);
  return Formula::disj(Formula::conj(y_zero, Formula::eq(z, zero)),
                       Formula::conj(Formula::neg(y_zero), Formula::conj(floor_q, ceil_q)));
}

/// Successor totality: forall x exists z Add(x, 1, z).
inline Formula totality_successor()
{
  return Formula::forall(
      "x", Formula::exists("z", Formula::eq(Term::add(Term::var("x"), Term::one()), Term::var("z"))));
}

/// Addition totality: forall x forall y exists z Add(x, y, z).
inline Formula totality_addition()
{
  return Formula::forall(
      "x", Formula::forall("y", Formula::exists("z", Formula::eq(Term::add(Term::var("x"), Term::var("y")),
                                                                  Term::var("z")))));
}

/// Multiplication totality: forall x forall y exists z Mult(x, y, z).
inline Formula totality_multiplication()
{
  return Formula::forall(
      "x", Formula::forall("y", Formula::exists("z", mult_relation(Term::var("x"), Term::var("y"),
                                                                     Term::var("z")))));
}

}  // namespace tlem

#endif  // TLEM_ARITH_HPP
