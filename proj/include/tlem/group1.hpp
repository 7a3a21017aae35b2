#ifndef TLEM_GROUP1_HPP
#define TLEM_GROUP1_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tlem/ast.hpp"
#include "tlem/sexpr.hpp"

namespace tlem {

struct NamedAxiom {
  std::string name;
  Formula formula;
};

namespace detail {

// Canonical successor numeral 2, used by the halving recursions.
#define TLEM_C2 "(add (add 0 1) 1)"

inline constexpr std::pair<std::string_view, std::string_view> kGroup1Text[] = {
    {"eq_refl", "(forall x (= x x))"},
    {"eq_symm", "(forall x (forall y (implies (= x y) (= y x))))"},
    {"eq_trans", "(forall x (forall y (forall z (implies (= x y) (implies (= y z) (= x z))))))"},
    {"cong_add", "(forall x (forall y (forall u (forall w (implies (= x u) (implies (= y w) (= (add x y) (add u w))))))))"},
    {"cong_sub", "(forall x (forall y (forall u (forall w (implies (= x u) (implies (= y w) (= (sub x y) (sub u w))))))))"},
    {"cong_div", "(forall x (forall y (forall u (forall w (implies (= x u) (implies (= y w) (= (div x y) (div u w))))))))"},
    {"cong_max", "(forall x (forall y (forall u (forall w (implies (= x u) (implies (= y w) (= (max x y) (max u w))))))))"},
    {"cong_root", "(forall x (forall y (forall u (forall w (implies (= x u) (implies (= y w) (= (root x y) (root u w))))))))"},
    {"cong_count", "(forall x (forall y (forall u (forall w (implies (= x u) (implies (= y w) (= (count x y) (count u w))))))))"},
    {"cong_double", "(forall x (forall u (implies (= x u) (= (double x) (double u)))))"},
    {"cong_logsp", "(forall x (forall u (implies (= x u) (= (logsp x) (logsp u)))))"},
    {"cong_leq", "(forall x (forall y (forall u (forall w (implies (= x u) (implies (= y w) (implies (leq u w) (leq x y))))))))"},
    {"cong_nleq", "(forall x (forall y (forall u (forall w (implies (= x u) (implies (= y w) (implies (not (leq u w)) (not (leq x y)))))))))"},
    {"cong_neq", "(forall x (forall y (forall u (forall w (implies (= x u) (implies (= y w) (implies (not (= u w)) (not (= x y)))))))))"},
    {"one_def", "(= 1 (add 0 1))"},
    {"leq_zero", "(forall x (leq 0 x))"},
    {"leq_succ", "(forall x (forall y (implies (leq x y) (leq (add x 1) (add y 1)))))"},
    {"nleq_zero", "(forall x (not (leq (add x 1) 0)))"},
    {"nleq_succ", "(forall x (forall y (implies (not (leq x y)) (not (leq (add x 1) (add y 1))))))"},
    {"neq_zero_l", "(forall x (not (= 0 (add x 1))))"},
    {"neq_zero_r", "(forall x (not (= (add x 1) 0)))"},
    {"neq_succ", "(forall x (forall y (implies (not (= x y)) (not (= (add x 1) (add y 1))))))"},
    {"leq_split", "(forall x (forall y (implies (leq x (add y 1)) (or (= x (add y 1)) (leq x y)))))"},
    {"leq_zero_eq", "(forall x (implies (leq x 0) (= x 0)))"},
    {"leq_antisym", "(forall x (forall r (implies (leq x (add r 1)) (implies (not (leq x r)) (= x (add r 1))))))"},
    {"add_zero", "(forall x (= (add x 0) x))"},
    {"add_succ", "(forall x (forall y (= (add x (add y 1)) (add (add x y) 1))))"},
    {"double_def", "(forall x (= (double x) (add x x)))"},
    {"sub_zero", "(forall x (= (sub x 0) x))"},
    {"sub_zero_l", "(forall y (= (sub 0 y) 0))"},
    {"sub_succ", "(forall x (forall y (= (sub (add x 1) (add y 1)) (sub x y))))"},
    {"max_le", "(forall x (forall y (implies (leq x y) (= (max x y) y))))"},
    {"max_gt", "(forall x (forall y (implies (not (leq x y)) (= (max x y) x))))"},
    {"div_zero", "(forall x (= (div x 0) x))"},
    {"div_small", "(forall x (forall y (implies (not (leq y x)) (= (div x y) 0))))"},
    {"div_step", "(forall x (forall y (= (div (add x (add y 1)) (add y 1)) (add (div x (add y 1)) 1))))"},
    {"logsp_zero", "(= (logsp 0) 0)"},
    {"logsp_succ", "(forall x (= (logsp (add x 1)) (add (logsp (div (add x 1) " TLEM_C2 ")) 1)))"},
    {"count_zero", "(forall x (= (count x 0) 0))"},
    {"count_succ",
     "(forall x (forall j (= (count x (add j 1)) (add (count (div x " TLEM_C2 ") j) (sub x (double (div x " TLEM_C2
     ")))))))"},
    {"root_zero", "(forall x (= (root x 0) x))"},
    {"root_one", "(forall x (= (root x (add 0 1)) x))"},
    {"root_of_zero", "(forall y (= (root 0 (add y 1)) 0))"},
    {"root_pos", "(forall x (forall y (not (leq (root (add x 1) (add y 1)) 0))))"},
    {"root_le_step",
     "(forall x (forall y (forall r (implies (leq (root (div (add x r) (add r 1)) (add y 1)) (add r 1)) (leq (root x "
     "(add (add y 1) 1)) (add r 1))))))"},
    {"root_nle_step",
     "(forall x (forall y (forall r (implies (not (leq (root (div (add x r) (add r 1)) (add y 1)) (add r 1))) (not "
     "(leq (root x (add (add y 1) 1)) (add r 1)))))))"},
};

#undef TLEM_C2

}  // namespace detail

/// The shipped Group-1 set F: equality and congruence, order on successor
/// numerals, and recursion-style defining equations for all eight functions.
/// Every member is a true Pi1* sentence.
inline const std::vector<NamedAxiom>& group1_axioms()
{
  static const std::vector<NamedAxiom> axioms = [] {
    std::vector<NamedAxiom> out;
    for (const auto& [name, text] : detail::kGroup1Text) out.push_back({std::string(name), parse_sentence(text)});
    return out;
  }();
  return axioms;
}

inline std::vector<Formula> group1_formulas()
{
  std::vector<Formula> out;
  for (const NamedAxiom& a : group1_axioms()) out.push_back(a.formula);
  return out;
}

inline const Formula& group1_axiom(std::string_view name)
{
  for (const NamedAxiom& a : group1_axioms()) {
    if (a.name == name) return a.formula;
  }
  throw std::out_of_range("no Group-1 axiom named " + std::string(name));
}

}  // namespace tlem

#endif  // TLEM_GROUP1_HPP
