#ifndef TLEM_SEXPR_HPP
#define TLEM_SEXPR_HPP

#include <cctype>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tlem/ast.hpp"

namespace tlem {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column)
  {
  }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Raw s-expression: an atom (word) or a parenthesised list.
struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;
  std::size_t line = 1;
  std::size_t column = 1;
};

class SExprReader {
 public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  bool at_end()
  {
    skip_space();
    return pos_ >= text_.size();
  }

  SExpr read()
  {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    SExpr e;
    e.line = line_;
    e.column = col_;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      e.is_list = true;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) fail("unterminated list opened at " + std::to_string(e.line) + ":" +
                                       std::to_string(e.column));
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        e.list.push_back(read());
      }
      return e;
    }
    if (c == ')') fail("unexpected ')'");
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      e.atom.push_back(text_[pos_]);
      advance();
    }
    return e;
  }

  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

 private:
  void advance()
  {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_space()
  {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

namespace detail {

inline bool is_ident(std::string_view s)
{
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

inline bool is_reserved(std::string_view s)
{
  static constexpr std::string_view kReserved[] = {
      "=",      "leq",    "oracle", "call",    "not",   "and",     "or",      "implies",
      "forall", "exists", "bforall", "bexists", "add",  "double",  "sub",     "div",
      "max",    "logsp",  "root",   "count"};
  for (auto r : kReserved) {
    if (r == s) return true;
  }
  return false;
}

[[noreturn]] inline void fail_at(const SExpr& e, const std::string& msg)
{
  throw ParseError(msg, e.line, e.column);
}

}  // namespace detail

/// Converts a raw s-expression to a Term.
inline Term term_from_sexpr(const SExpr& e)
{
  if (!e.is_list) {
    const std::string& a = e.atom;
    if (a == "0") return Term::zero();
    if (a == "1") return Term::one();
    if (a.size() > 1 && a[0] == '?') {
      std::string_view rest(a.data() + 1, a.size() - 1);
      for (char c : rest) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
          detail::fail_at(e, "malformed parameter '" + a + "'");
        }
      }
      return Term::param(std::string(rest));
    }
    if (detail::is_ident(a) && !detail::is_reserved(a)) return Term::var(a);
    detail::fail_at(e, "unexpected token '" + a + "' in term position");
  }
  if (e.list.empty() || e.list[0].is_list) detail::fail_at(e, "expected a function symbol");
  const std::string& head = e.list[0].atom;
  if (head == "call") {
    if (e.list.size() < 2 || e.list[1].is_list || !detail::is_ident(e.list[1].atom)) {
      detail::fail_at(e, "call expects an oracle symbol name");
    }
    std::vector<Term> args;
    for (std::size_t i = 2; i < e.list.size(); ++i) args.push_back(term_from_sexpr(e.list[i]));
    return Term::call(e.list[1].atom, std::move(args));
  }
  Fn f;
  if (!fn_from_name(head, f)) detail::fail_at(e.list[0], "unknown function symbol '" + head + "'");
  if (static_cast<int>(e.list.size()) - 1 != arity(f)) {
    detail::fail_at(e, "arity error: " + head + " expects " + std::to_string(arity(f)) +
                           " argument(s), got " + std::to_string(e.list.size() - 1));
  }
  std::vector<Term> args;
  for (std::size_t i = 1; i < e.list.size(); ++i) args.push_back(term_from_sexpr(e.list[i]));
  return Term::app(f, std::move(args));
}

/// Converts a raw s-expression to a Formula.
inline Formula formula_from_sexpr(const SExpr& e)
{
  if (!e.is_list || e.list.empty() || e.list[0].is_list) {
    detail::fail_at(e, "expected a formula");
  }
  const std::string& head = e.list[0].atom;
  auto expect_len = [&](std::size_t n) {
    if (e.list.size() != n) {
      detail::fail_at(e, "arity error: " + head + " expects " + std::to_string(n - 1) +
                             " argument(s), got " + std::to_string(e.list.size() - 1));
    }
  };
  auto var_at = [&](std::size_t i) {
    const SExpr& v = e.list[i];
    if (v.is_list || !detail::is_ident(v.atom) || detail::is_reserved(v.atom)) {
      detail::fail_at(v, "expected a variable name");
    }
    return v.atom;
  };
  if (head == "=" || head == "leq") {
    expect_len(3);
    Term a = term_from_sexpr(e.list[1]);
    Term b = term_from_sexpr(e.list[2]);
    return head == "=" ? Formula::eq(a, b) : Formula::leq(a, b);
  }
  if (head == "oracle") {
    if (e.list.size() < 2 || e.list[1].is_list || !detail::is_ident(e.list[1].atom)) {
      detail::fail_at(e, "oracle expects a predicate name");
    }
    std::vector<Term> args;
    for (std::size_t i = 2; i < e.list.size(); ++i) args.push_back(term_from_sexpr(e.list[i]));
    return Formula::pred(e.list[1].atom, std::move(args));
  }
  if (head == "not") {
    expect_len(2);
    return Formula::neg(formula_from_sexpr(e.list[1]));
  }
  if (head == "and" || head == "or" || head == "implies") {
    expect_len(3);
    Formula a = formula_from_sexpr(e.list[1]);
    Formula b = formula_from_sexpr(e.list[2]);
    if (head == "and") return Formula::conj(a, b);
    if (head == "or") return Formula::disj(a, b);
    return Formula::implies(a, b);
  }
  if (head == "forall" || head == "exists") {
    expect_len(3);
    std::string v = var_at(1);
    Formula body = formula_from_sexpr(e.list[2]);
    return head == "forall" ? Formula::forall(v, body) : Formula::exists(v, body);
  }
  if (head == "bforall" || head == "bexists") {
    expect_len(4);
    std::string v = var_at(1);
    Term bound = term_from_sexpr(e.list[2]);
    Formula body = formula_from_sexpr(e.list[3]);
    try {
      return head == "bforall" ? Formula::bforall(v, bound, body) : Formula::bexists(v, bound, body);
    } catch (const std::invalid_argument& ex) {
      detail::fail_at(e, ex.what());
    }
  }
  detail::fail_at(e.list[0], "unknown formula head '" + head + "'");
}

inline bool sexpr_is_formula(const SExpr& e)
{
  if (!e.is_list || e.list.empty() || e.list[0].is_list) return false;
  static constexpr std::string_view kHeads[] = {"=",   "leq",     "oracle", "not",    "and",
                                                "or",  "implies", "forall", "exists", "bforall",
                                                "bexists"};
  for (auto h : kHeads) {
    if (e.list[0].atom == h) return true;
  }
  return false;
}

/// Result of a free-standing parse: either a formula or a term.
using Parsed = std::variant<Formula, Term>;

inline Parsed parse(std::string_view text)
{
  SExprReader r(text);
  SExpr e = r.read();
  if (!r.at_end()) r.fail("trailing input after expression");
  if (sexpr_is_formula(e)) return formula_from_sexpr(e);
  return term_from_sexpr(e);
}

inline Formula parse_formula(std::string_view text)
{
  SExprReader r(text);
  SExpr e = r.read();
  if (!r.at_end()) r.fail("trailing input after formula");
  return formula_from_sexpr(e);
}

inline Term parse_term(std::string_view text)
{
  SExprReader r(text);
  SExpr e = r.read();
  if (!r.at_end()) r.fail("trailing input after term");
  return term_from_sexpr(e);
}

/// Parses a sentence; free variables are rejected.
inline Formula parse_sentence(std::string_view text)
{
  Formula f = parse_formula(text);
  if (!f.is_sentence()) {
    throw ParseError("unbound variable '" + f.free_vars().front() + "' in sentence", 1, 1);
  }
  return f;
}

inline void print(std::ostream& os, const Term& t)
{
  switch (t.kind()) {
    case Term::Kind::Zero: os << '0'; return;
    case Term::Kind::One: os << '1'; return;
    case Term::Kind::Var: os << t.name(); return;
    case Term::Kind::Param: os << '?' << t.name(); return;
    case Term::Kind::App:
      os << '(' << fn_name(t.fn());
      break;
    case Term::Kind::Call:
      os << "(call " << t.name();
      break;
  }
  for (const Term& a : t.args()) {
    os << ' ';
    print(os, a);
  }
  os << ')';
}

inline void print(std::ostream& os, const Formula& f)
{
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Eq:
    case K::Leq:
      os << (f.kind() == K::Eq ? "(= " : "(leq ");
      print(os, f.term(0));
      os << ' ';
      print(os, f.term(1));
      os << ')';
      return;
    case K::Pred:
      os << "(oracle " << f.name();
      for (const Term& a : f.terms()) {
        os << ' ';
        print(os, a);
      }
      os << ')';
      return;
    case K::Not:
      os << "(not ";
      print(os, f.sub());
      os << ')';
      return;
    case K::And:
    case K::Or:
    case K::Implies:
      os << (f.kind() == K::And ? "(and " : f.kind() == K::Or ? "(or " : "(implies ");
      print(os, f.lhs());
      os << ' ';
      print(os, f.rhs());
      os << ')';
      return;
    case K::Forall:
    case K::Exists:
      os << (f.kind() == K::Forall ? "(forall " : "(exists ") << f.var() << ' ';
      print(os, f.body());
      os << ')';
      return;
    case K::BForall:
    case K::BExists:
      os << (f.kind() == K::BForall ? "(bforall " : "(bexists ") << f.var() << ' ';
      print(os, f.bound());
      os << ' ';
      print(os, f.body());
      os << ')';
      return;
  }
}

inline std::string to_string(const Term& t)
{
  std::ostringstream os;
  print(os, t);
  return os.str();
}

inline std::string to_string(const Formula& f)
{
  std::ostringstream os;
  print(os, f);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Term& t)
{
  print(os, t);
  return os;
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f)
{
  print(os, f);
  return os;
}

}  // namespace tlem

#endif  // TLEM_SEXPR_HPP
