#ifndef TLEM_TESTS_SUPPORT_HPP
#define TLEM_TESTS_SUPPORT_HPP

// Independent oracles and generators shared by the test binaries. Nothing here
// calls into the engine's evaluator, counter or SAT search: the point is to
// have a second opinion written from the definitions.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tlem/ast.hpp"
#include "tlem/nat.hpp"
#include "tlem/resolution.hpp"
#include "tlem/sexpr.hpp"

namespace oracle {

using tlem::Fn;
using tlem::Formula;
using tlem::Nat;
using tlem::Term;

// Ground functions straight from their definitions (loops and searches, no
// shared code with the engine).
inline Nat sub(const Nat& x, const Nat& y) { return x > y ? Nat(x - y) : Nat(0); }

inline Nat div(const Nat& x, const Nat& y)
{
  if (y == 0) return x;
  // Largest q with q * y <= x.
  Nat lo = 0, hi = x;
  while (lo < hi) {
    Nat mid = (lo + hi + 1) / 2;
    if (mid * y <= x) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

// Smallest k with 2^k >= x + 1.
inline Nat logsp(const Nat& x)
{
  Nat k = 0, p = 1;
  while (p < x + 1) {
    p *= 2;
    ++k;
  }
  return k;
}

// Smallest r with r^y >= x; y = 0 gives x. For x > 0 the answer is at
// least 1, and r^y only grows with r from there.
inline Nat root(const Nat& x, const Nat& y)
{
  if (y == 0) return x;
  if (x == 0) return 0;
  auto reaches = [&](const Nat& r) {
    Nat p = 1;
    for (Nat i = 0; i < y && p < x; ++i) p *= r;
    return p >= x;
  };
  Nat lo = 1, hi = x;  // reaches(hi) always holds
  while (lo < hi) {
    Nat mid = (lo + hi) / 2;
    if (reaches(mid)) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

inline Nat count(const Nat& x, const Nat& j)
{
  Nat v = x, c = 0;
  for (Nat i = 0; i < j && v > 0; ++i) {
    if (v % 2 == 1) ++c;
    v /= 2;
  }
  return c;
}

using Env = std::map<std::string, Nat>;

inline Nat term(const Term& t, const Env& env)
{
  switch (t.kind()) {
    case Term::Kind::Zero: return 0;
    case Term::Kind::One: return 1;
    case Term::Kind::Var: return env.at(t.name());
    case Term::Kind::App: {
      std::vector<Nat> a;
      for (const Term& s : t.args()) a.push_back(term(s, env));
      switch (t.fn()) {
        case Fn::Add: return a[0] + a[1];
        case Fn::Double: return a[0] * 2;
        case Fn::Sub: return sub(a[0], a[1]);
        case Fn::Div: return div(a[0], a[1]);
        case Fn::Max: return a[0] < a[1] ? a[1] : a[0];
        case Fn::LogSp: return logsp(a[0]);
        case Fn::Root: return root(a[0], a[1]);
        case Fn::Count: return count(a[0], a[1]);
      }
      break;
    }
    default: break;
  }
  throw std::invalid_argument("oracle::term: unsupported term " + tlem::to_string(t));
}

// Truth of a Delta0 formula by brute-force enumeration of bounded quantifiers.
inline bool truth(const Formula& f, Env env = {})
{
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Eq: return term(f.term(0), env) == term(f.term(1), env);
    case K::Leq: return term(f.term(0), env) <= term(f.term(1), env);
    case K::Not: return !truth(f.sub(), env);
    case K::And: return truth(f.lhs(), env) && truth(f.rhs(), env);
    case K::Or: return truth(f.lhs(), env) || truth(f.rhs(), env);
    case K::Implies: return !truth(f.lhs(), env) || truth(f.rhs(), env);
    case K::BForall:
    case K::BExists: {
      Nat b = term(f.bound(), env);
      bool all = f.kind() == K::BForall;
      for (Nat v = 0; v <= b; ++v) {
        env[f.var()] = v;
        bool t = truth(f.body(), env);
        if (all && !t) return false;
        if (!all && t) return true;
      }
      return all;
    }
    default: break;
  }
  throw std::invalid_argument("oracle::truth: unbounded or oracle formula");
}

// Counts numeral symbols from the printed text: every standalone 0 or 1 and
// every add/double head.
inline std::size_t numeral_symbols(const std::string& text)
{
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '0' || c == '1') ++n;
    if (text.compare(i, 4, "add ") == 0 || text.compare(i, 7, "double ") == 0) ++n;
  }
  return n;
}

// ceil(log2 n) for n >= 1, by doubling.
inline std::size_t ceil_log2(const Nat& n)
{
  std::size_t k = 0;
  Nat p = 1;
  while (p < n) {
    p *= 2;
    ++k;
  }
  return k;
}

// Plain DPLL with unit propagation over integer literals.
inline bool dpll(std::vector<std::vector<int>> cls)
{
  for (;;) {
    bool changed = false;
    for (const auto& c : cls) {
      if (c.empty()) return false;
      if (c.size() == 1) {
        int u = c[0];
        std::vector<std::vector<int>> next;
        for (const auto& d : cls) {
          if (std::find(d.begin(), d.end(), u) != d.end()) continue;
          std::vector<int> e;
          for (int l : d) {
            if (l != -u) e.push_back(l);
          }
          next.push_back(e);
        }
        cls = std::move(next);
        changed = true;
        break;
      }
    }
    if (!changed) break;
  }
  if (cls.empty()) return true;
  int v = cls[0][0];
  for (int lit : {v, -v}) {
    auto copy = cls;
    copy.push_back({lit});
    if (dpll(copy)) return true;
  }
  return false;
}

inline bool dpll(const std::vector<tlem::Clause>& cs)
{
  std::vector<std::vector<int>> v;
  for (const auto& c : cs) v.emplace_back(c.lits().begin(), c.lits().end());
  return dpll(v);
}

// Satisfying assignment by enumeration (bit v-1 of the mask is atom v), if any.
inline std::optional<std::uint64_t> brute_model(const std::vector<tlem::Clause>& cs, int atoms)
{
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << atoms); ++mask) {
    bool all = true;
    for (const auto& c : cs) {
      bool sat = false;
      for (int l : c.lits()) sat |= (((mask >> (std::abs(l) - 1)) & 1) != 0) == (l > 0);
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return mask;
  }
  return std::nullopt;
}

// Satisfiability of a quantifier-free sentence by truth table over its atoms.
inline bool tt_satisfiable(const Formula& f)
{
  std::vector<Formula> atoms;
  auto collect = [&](auto&& self, const Formula& g) -> void {
    if (g.is_atom()) {
      if (std::find(atoms.begin(), atoms.end(), g) == atoms.end()) atoms.push_back(g);
      return;
    }
    self(self, g.kind() == Formula::Kind::Not ? g.sub() : g.lhs());
    if (g.kind() != Formula::Kind::Not) self(self, g.rhs());
  };
  collect(collect, f);
  const std::size_t n = atoms.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    auto val = [&](auto&& self, const Formula& g) -> bool {
      switch (g.kind()) {
        case Formula::Kind::Not: return !self(self, g.sub());
        case Formula::Kind::And: return self(self, g.lhs()) && self(self, g.rhs());
        case Formula::Kind::Or: return self(self, g.lhs()) || self(self, g.rhs());
        case Formula::Kind::Implies: return !self(self, g.lhs()) || self(self, g.rhs());
        default: {
          auto i = static_cast<std::size_t>(std::find(atoms.begin(), atoms.end(), g) - atoms.begin());
          return (mask >> i) & 1;
        }
      }
    };
    if (val(val, f)) return true;
  }
  return false;
}

}  // namespace oracle

namespace gen {

using tlem::Fn;
using tlem::Formula;
using tlem::Term;

inline Term small_numeral(unsigned v)
{
  if (v == 0) return Term::zero();
  Term t = Term::one();
  for (unsigned i = 1; i < v; ++i) t = Term::succ(t);
  return t;
}

// Random term over the eight functions; Double and Add are kept shallow so
// values stay small enough for the brute-force oracle.
class TermGen {
 public:
  explicit TermGen(std::mt19937_64& rng) : rng_(rng) {}

  Term operator()(const std::vector<std::string>& vars, unsigned depth)
  {
    std::uniform_int_distribution<int> leaf(0, 3 + static_cast<int>(vars.size()));
    if (depth == 0 || pick(3) == 0) {
      int k = leaf(rng_);
      if (k < 4) return small_numeral(static_cast<unsigned>(k));
      return Term::var(vars[static_cast<std::size_t>(k - 4)]);
    }
    static constexpr Fn fns[] = {Fn::Add, Fn::Double, Fn::Sub, Fn::Div, Fn::Max, Fn::LogSp, Fn::Root, Fn::Count};
    Fn f = fns[pick(8)];
    if (f == Fn::Double || f == Fn::LogSp) return Term::app(f, {(*this)(vars, depth - 1)});
    return Term::app(f, {(*this)(vars, depth - 1), (*this)(vars, depth - 1)});
  }

  unsigned pick(unsigned n) { return std::uniform_int_distribution<unsigned>(0, n - 1)(rng_); }

 private:
  std::mt19937_64& rng_;
};

// Random Delta0 sentence; quantifier bounds are numerals up to `max_bound`.
class Delta0Gen {
 public:
  Delta0Gen(std::mt19937_64& rng, unsigned max_bound = 8) : rng_(rng), terms_(rng), max_bound_(max_bound) {}

  Formula operator()(unsigned depth = 3) { return formula({}, depth); }

  Formula formula(std::vector<std::string> vars, unsigned depth)
  {
    if (depth == 0 || terms_.pick(4) == 0) {
      Term a = terms_(vars, 2), b = terms_(vars, 2);
      return terms_.pick(2) ? Formula::eq(a, b) : Formula::leq(a, b);
    }
    switch (terms_.pick(6)) {
      case 0: return Formula::neg(formula(vars, depth - 1));
      case 1: return Formula::conj(formula(vars, depth - 1), formula(vars, depth - 1));
      case 2: return Formula::disj(formula(vars, depth - 1), formula(vars, depth - 1));
      case 3: return Formula::implies(formula(vars, depth - 1), formula(vars, depth - 1));
      default: {
        std::string v = "v" + std::to_string(vars.size());
        Term bound = small_numeral(terms_.pick(max_bound_ + 1));
        vars.push_back(v);
        Formula body = formula(vars, depth - 1);
        return terms_.pick(2) ? Formula::bforall(v, bound, body) : Formula::bexists(v, bound, body);
      }
    }
  }

 private:
  std::mt19937_64& rng_;
  TermGen terms_;
  unsigned max_bound_;
};

// Random quantifier-free sentence over a handful of ground comparison atoms.
inline Formula propositional(std::mt19937_64& rng, unsigned atoms, unsigned depth)
{
  std::uniform_int_distribution<unsigned> a(0, atoms - 1), k(0, 4);
  auto atom = [&] { return Formula::leq(small_numeral(a(rng) + 1), Term::zero()); };
  auto rec = [&](auto&& self, unsigned d) -> Formula {
    if (d == 0) return atom();
    switch (k(rng)) {
      case 0: return Formula::neg(self(self, d - 1));
      case 1: return Formula::conj(self(self, d - 1), self(self, d - 1));
      case 2: return Formula::disj(self(self, d - 1), self(self, d - 1));
      case 3: return Formula::implies(self(self, d - 1), self(self, d - 1));
      default: return atom();
    }
  };
  return rec(rec, depth);
}

// Random 3-CNF over n atoms.
inline std::vector<tlem::Clause> random_cnf(std::mt19937_64& rng, int atoms, int clauses, int width = 3)
{
  std::uniform_int_distribution<int> v(1, atoms), s(0, 1);
  std::vector<tlem::Clause> out;
  for (int i = 0; i < clauses; ++i) {
    std::vector<int> lits;
    for (int j = 0; j < width; ++j) lits.push_back(s(rng) ? v(rng) : -v(rng));
    out.emplace_back(lits);
  }
  return out;
}

// Pigeonhole: `holes + 1` pigeons into `holes` holes; atom p*holes + h + 1.
inline std::vector<tlem::Clause> pigeonhole(int holes)
{
  const int pigeons = holes + 1;
  auto at = [&](int p, int h) { return p * holes + h + 1; };
  std::vector<tlem::Clause> out;
  for (int p = 0; p < pigeons; ++p) {
    std::vector<int> c;
    for (int h = 0; h < holes; ++h) c.push_back(at(p, h));
    out.emplace_back(c);
  }
  for (int h = 0; h < holes; ++h) {
    for (int p = 0; p < pigeons; ++p) {
      for (int q = p + 1; q < pigeons; ++q) out.emplace_back(std::vector<int>{-at(p, h), -at(q, h)});
    }
  }
  return out;
}

}  // namespace gen

#endif  // TLEM_TESTS_SUPPORT_HPP
