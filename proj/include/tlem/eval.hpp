#ifndef TLEM_EVAL_HPP
#define TLEM_EVAL_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tlem/ast.hpp"
#include "tlem/nat.hpp"
#include "tlem/sexpr.hpp"

namespace tlem {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Executable semantics for oracle symbols. Registration happens once, before
/// evaluation; afterwards the table is only read.
class OracleTable {
 public:
  using Function = std::function<Nat(const std::vector<Nat>&)>;
  using Predicate = std::function<bool(const std::vector<Nat>&)>;

  void register_function(const std::string& name, std::size_t arity, Function fn)
  {
    functions_[name] = {arity, std::move(fn)};
  }
  void register_predicate(const std::string& name, std::size_t arity, Predicate fn)
  {
    predicates_[name] = {arity, std::move(fn)};
  }

  bool has_function(const std::string& name) const { return functions_.count(name) != 0; }
  bool has_predicate(const std::string& name) const { return predicates_.count(name) != 0; }

  Nat call(const std::string& name, const std::vector<Nat>& args) const
  {
    auto it = functions_.find(name);
    if (it == functions_.end()) throw EvalError("unregistered oracle function '" + name + "'");
    if (it->second.arity != args.size()) {
      throw EvalError("oracle function '" + name + "' expects " + std::to_string(it->second.arity) +
                      " argument(s)");
    }
    return it->second.fn(args);
  }

  bool test(const std::string& name, const std::vector<Nat>& args) const
  {
    auto it = predicates_.find(name);
    if (it == predicates_.end()) throw EvalError("unregistered oracle predicate '" + name + "'");
    if (it->second.arity != args.size()) {
      throw EvalError("oracle predicate '" + name + "' expects " +
                      std::to_string(it->second.arity) + " argument(s)");
    }
    return it->second.fn(args);
  }

  /// Copies entries of `other` that are not already present.
  void merge(const OracleTable& other)
  {
    for (const auto& [k, v] : other.functions_) functions_.emplace(k, v);
    for (const auto& [k, v] : other.predicates_) predicates_.emplace(k, v);
  }

 private:
  template <class F>
  struct Entry {
    std::size_t arity;
    F fn;
  };
  std::map<std::string, Entry<Function>> functions_;
  std::map<std::string, Entry<Predicate>> predicates_;
};

// ---------------------------------------------------------------------------
// Grounding function semantics

inline Nat ground_sub(const Nat& x, const Nat& y) { return x <= y ? Nat(0) : Nat(x - y); }

inline Nat ground_div(const Nat& x, const Nat& y)
{
  if (y == 0) return x;
  Nat q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return q;
}

/// ceil(log2(x + 1)), i.e. the binary length of x.
inline Nat ground_logsp(const Nat& x) { return Nat(static_cast<unsigned long>(bit_length(x))); }

/// ceil(x^(1/y)); Root(x, 0) = x.
inline Nat ground_root(const Nat& x, const Nat& y)
{
  if (y == 0 || y == 1 || x <= 1) return x;
  if (!fits_ulong(y) || y.get_ui() >= bit_length(x)) {
    // 2^y > x > 1, so 1 < x^(1/y) <= 2.
    return Nat(2);
  }
  Nat r;
  int exact = mpz_root(r.get_mpz_t(), x.get_mpz_t(), y.get_ui());
  if (!exact) r += 1;
  return r;
}

/// Number of 1 bits among the rightmost j bits of x.
inline Nat ground_count(const Nat& x, const Nat& j)
{
  std::size_t len = bit_length(x);
  if (!fits_ulong(j) || j.get_ui() >= len) {
    return Nat(static_cast<unsigned long>(mpz_popcount(x.get_mpz_t())));
  }
  Nat low;
  mpz_fdiv_r_2exp(low.get_mpz_t(), x.get_mpz_t(), j.get_ui());
  return Nat(static_cast<unsigned long>(mpz_popcount(low.get_mpz_t())));
}

inline Nat apply_fn(Fn f, const std::vector<Nat>& a)
{
  switch (f) {
    case Fn::Add: return a[0] + a[1];
    case Fn::Double: return a[0] + a[0];
    case Fn::Sub: return ground_sub(a[0], a[1]);
    case Fn::Div: return ground_div(a[0], a[1]);
    case Fn::Max: return a[0] < a[1] ? a[1] : a[0];
    case Fn::LogSp: return ground_logsp(a[0]);
    case Fn::Root: return ground_root(a[0], a[1]);
    case Fn::Count: return ground_count(a[0], a[1]);
  }
  return Nat(0);
}

using Env = std::unordered_map<std::string, Nat>;

namespace detail {

inline Nat eval_term_env(const Term& t, const OracleTable& oracles, const Env& env)
{
  switch (t.kind()) {
    case Term::Kind::Zero: return Nat(0);
    case Term::Kind::One: return Nat(1);
    case Term::Kind::Var: {
      auto it = env.find(t.name());
      if (it == env.end()) throw EvalError("non-ground term: free variable '" + t.name() + "'");
      return it->second;
    }
    case Term::Kind::Param: {
      // Parameters may be given values under the key "?name".
      auto it = env.find("?" + t.name());
      if (it == env.end()) throw EvalError("non-ground term: parameter '?" + t.name() + "'");
      return it->second;
    }
    case Term::Kind::App:
    case Term::Kind::Call: {
      std::vector<Nat> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(eval_term_env(a, oracles, env));
      if (t.kind() == Term::Kind::App) return apply_fn(t.fn(), args);
      return oracles.call(t.name(), args);
    }
  }
  return Nat(0);
}

}  // namespace detail

/// Exact value of a ground term.
inline Nat eval_term(const Term& t, const OracleTable& oracles = OracleTable{})
{
  return detail::eval_term_env(t, oracles, Env{});
}

inline Nat eval_term(const Term& t, const OracleTable& oracles, const Env& env)
{
  return detail::eval_term_env(t, oracles, env);
}

enum class Truth { True, False, BudgetExceeded };

inline const char* to_string(Truth t)
{
  switch (t) {
    case Truth::True: return "true";
    case Truth::False: return "false";
    case Truth::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

namespace detail {

inline Truth truth_not(Truth t)
{
  if (t == Truth::True) return Truth::False;
  if (t == Truth::False) return Truth::True;
  return t;
}

inline Truth truth_of(bool b) { return b ? Truth::True : Truth::False; }

class SentenceEvaluator {
 public:
  SentenceEvaluator(const OracleTable& oracles, Nat budget) : oracles_(oracles), budget_(std::move(budget)) {}

  Truth eval(const Formula& f, Env& env) const
  {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Eq:
        return truth_of(eval_term_env(f.term(0), oracles_, env) == eval_term_env(f.term(1), oracles_, env));
      case K::Leq:
        return truth_of(eval_term_env(f.term(0), oracles_, env) <= eval_term_env(f.term(1), oracles_, env));
      case K::Pred: {
        std::vector<Nat> args;
        for (const Term& a : f.terms()) args.push_back(eval_term_env(a, oracles_, env));
        return truth_of(oracles_.test(f.name(), args));
      }
      case K::Not: return truth_not(eval(f.sub(), env));
      case K::And: {
        Truth a = eval(f.lhs(), env);
        if (a == Truth::False) return a;
        Truth b = eval(f.rhs(), env);
        if (b == Truth::False) return b;
        return (a == Truth::True && b == Truth::True) ? Truth::True : Truth::BudgetExceeded;
      }
      case K::Or: {
        Truth a = eval(f.lhs(), env);
        if (a == Truth::True) return a;
        Truth b = eval(f.rhs(), env);
        if (b == Truth::True) return b;
        return (a == Truth::False && b == Truth::False) ? Truth::False : Truth::BudgetExceeded;
      }
      case K::Implies: {
        Truth a = eval(f.lhs(), env);
        if (a == Truth::False) return Truth::True;
        Truth b = eval(f.rhs(), env);
        if (b == Truth::True) return b;
        return (a == Truth::True && b == Truth::False) ? Truth::False : Truth::BudgetExceeded;
      }
      case K::Forall:
      case K::Exists:
        if (auto bound = guard_bound(f)) {
          Nat last = eval_term_env(*bound, oracles_, env);
          return quantify(f, env, last, f.kind() == K::Forall, /*bounded=*/true, /*guarded=*/true);
        }
        return quantify(f, env, budget_ - 1, f.kind() == K::Forall, /*bounded=*/false);
      case K::BForall:
      case K::BExists: {
        Nat bound = eval_term_env(f.bound(), oracles_, env);
        return quantify(f, env, bound, f.kind() == K::BForall, /*bounded=*/true);
      }
    }
    return Truth::BudgetExceeded;
  }

 private:
  // Ranges the bound variable over 0..last. Unbounded ranges are truncated and
  // report BudgetExceeded when the answer is not decided inside the window.
  // The expanded forms (forall v (implies (leq v s) B)) and
  // (exists v (and (leq v s) B)), with v not in s, are decided like the
  // bounded quantifiers they abbreviate.
  static std::optional<Term> guard_bound(const Formula& f)
  {
    using K = Formula::Kind;
    const Formula& b = f.body();
    if (b.kind() != (f.kind() == K::Forall ? K::Implies : K::And)) return std::nullopt;
    const Formula& g = b.lhs();
    if (g.kind() != K::Leq || g.term(0).kind() != Term::Kind::Var || g.term(0).name() != f.var()) return std::nullopt;
    if (contains_name(g.term(1).free_vars(), f.var())) return std::nullopt;
    return g.term(1);
  }

  Truth quantify(const Formula& f, Env& env, const Nat& last, bool universal, bool bounded,
                 bool guarded = false) const
  {
    const std::string& v = f.var();
    auto saved = env.find(v);
    std::optional<Nat> previous;
    if (saved != env.end()) previous = saved->second;
    bool unknown = !bounded;
    Truth result = universal ? Truth::True : Truth::False;
    for (Nat i = 0; i <= last; ++i) {
      env[v] = i;
      Truth t = eval(guarded ? f.body().rhs() : f.body(), env);
      if (universal && t == Truth::False) {
        result = Truth::False;
        unknown = false;
        break;
      }
      if (!universal && t == Truth::True) {
        result = Truth::True;
        unknown = false;
        break;
      }
      if (t == Truth::BudgetExceeded) unknown = true;
    }
    if (previous) {
      env[v] = *previous;
    } else {
      env.erase(v);
    }
    return unknown ? Truth::BudgetExceeded : result;
  }

  const OracleTable& oracles_;
  Nat budget_;
};

}  // namespace detail

/// Truth value in the standard model. Bounded quantifiers are decided exactly;
/// unbounded ones are searched over 0..budget-1.
inline Truth eval_sentence(const Formula& s, const OracleTable& oracles = OracleTable{},
                           const Nat& budget = Nat(1000))
{
  if (!s.is_sentence()) {
    throw EvalError("not a sentence: free variable '" + s.free_vars().front() + "'");
  }
  if (s.has_params()) throw EvalError("sentence mentions a proof parameter");
  Env env;
  return detail::SentenceEvaluator(oracles, budget).eval(s, env);
}

/// Evaluates a formula under an explicit assignment of its free variables.
inline Truth eval_formula(const Formula& f, Env env, const OracleTable& oracles = OracleTable{},
                          const Nat& budget = Nat(1000))
{
  return detail::SentenceEvaluator(oracles, budget).eval(f, env);
}

}  // namespace tlem

#endif  // TLEM_EVAL_HPP
