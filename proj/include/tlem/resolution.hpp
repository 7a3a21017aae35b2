#ifndef TLEM_RESOLUTION_HPP
#define TLEM_RESOLUTION_HPP

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tlem/ast.hpp"
#include "tlem/sexpr.hpp"

namespace tlem {

/// Literal: +v or -v for atom number v >= 1.
using Lit = int;

/// Sorted, duplicate-free literal set.
class Clause {
 public:
  Clause() = default;
  Clause(std::initializer_list<Lit> lits) : Clause(std::vector<Lit>(lits)) {}
  explicit Clause(std::vector<Lit> lits) : lits_(std::move(lits))
  {
    for (Lit l : lits_) {
      if (l == 0) throw std::invalid_argument("clause literal 0");
    }
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
  }

  const std::vector<Lit>& lits() const { return lits_; }
  bool empty() const { return lits_.empty(); }
  std::size_t size() const { return lits_.size(); }
  bool contains(Lit l) const { return std::binary_search(lits_.begin(), lits_.end(), l); }
  bool tautology() const
  {
    for (Lit l : lits_) {
      if (l > 0 && contains(-l)) return true;
    }
    return false;
  }
  /// Every literal of this clause occurs in `o`.
  bool subsumes(const Clause& o) const { return std::includes(o.lits_.begin(), o.lits_.end(), lits_.begin(), lits_.end()); }
  int max_atom() const
  {
    int m = 0;
    for (Lit l : lits_) m = std::max(m, std::abs(l));
    return m;
  }

  friend bool operator==(const Clause&, const Clause&) = default;
  friend bool operator<(const Clause& a, const Clause& b) { return a.lits_ < b.lits_; }

 private:
  std::vector<Lit> lits_;
};

inline std::string to_string(const Clause& c)
{
  std::string s = "{";
  for (std::size_t i = 0; i < c.lits().size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c.lits()[i]);
  }
  return s + "}";
}

/// Resolvent of a (containing +pivot) and b (containing -pivot).
inline Clause resolve(const Clause& a, const Clause& b, int pivot)
{
  std::vector<Lit> out;
  for (Lit l : a.lits()) {
    if (l != pivot) out.push_back(l);
  }
  for (Lit l : b.lits()) {
    if (l != -pivot) out.push_back(l);
  }
  return Clause(std::move(out));
}

enum class ResApparatus { Res, Xres };

inline const char* to_string(ResApparatus a) { return a == ResApparatus::Res ? "res" : "xres"; }

struct ResStep {
  enum class Kind { Input, LemInput, Resolve };
  Kind kind = Kind::Input;
  Clause clause;
  std::size_t input = 0;  // Input: index into the input list
  std::size_t left = 0;   // Resolve: earlier step holding +pivot
  std::size_t right = 0;  // Resolve: earlier step holding -pivot
  int pivot = 0;

  static ResStep from_input(std::size_t i, Clause c) { return {Kind::Input, std::move(c), i, 0, 0, 0}; }
  static ResStep lem(int atom) { return {Kind::LemInput, Clause({atom, -atom}), 0, 0, 0, 0}; }
  static ResStep resolution(std::size_t l, std::size_t r, int pivot, Clause c)
  {
    return {Kind::Resolve, std::move(c), 0, l, r, pivot};
  }
};

struct ResProof {
  std::vector<ResStep> steps;
};

struct ResVerdict {
  bool valid = false;
  std::string diagnostic;
  std::size_t step = 0;
};

inline ResVerdict res_check(const ResProof& p, const std::vector<Clause>& inputs, ResApparatus app)
{
  auto bad = [](std::size_t i, std::string msg) { return ResVerdict{false, "step " + std::to_string(i) + ": " + msg, i}; };
  if (p.steps.empty()) return {false, "empty resolution proof", 0};
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const ResStep& s = p.steps[i];
    switch (s.kind) {
      case ResStep::Kind::Input:
        if (s.input >= inputs.size()) return bad(i, "input index out of range");
        if (!(inputs[s.input] == s.clause)) return bad(i, "clause differs from input " + std::to_string(s.input));
        break;
      case ResStep::Kind::LemInput: {
        if (app != ResApparatus::Xres) return bad(i, "excluded-middle clause not admitted under res");
        const auto& l = s.clause.lits();
        if (l.size() != 2 || l[0] != -l[1]) return bad(i, "not an excluded-middle clause {A, -A}");
        break;
      }
      case ResStep::Kind::Resolve: {
        if (s.left >= i || s.right >= i) return bad(i, "resolvent cites a later or equal step");
        if (s.pivot <= 0) return bad(i, "pivot must be a positive atom");
        const Clause& a = p.steps[s.left].clause;
        const Clause& b = p.steps[s.right].clause;
        if (!a.contains(s.pivot)) return bad(i, "left premise lacks +pivot");
        if (!b.contains(-s.pivot)) return bad(i, "right premise lacks -pivot");
        if (!(resolve(a, b, s.pivot) == s.clause)) return bad(i, "clause is not the resolvent");
        break;
      }
    }
  }
  if (!p.steps.back().clause.empty()) return bad(p.steps.size() - 1, "final clause is not empty");
  return {true, "", 0};
}

struct ResBudget {
  std::size_t max_clauses = 20000;
};

struct ResResult {
  bool found = false;
  ResProof proof;
  std::size_t clauses_kept = 0;
};

/// Given-clause saturation. Clauses are processed in order of (size, arrival);
/// forward and backward subsumption; tautologies are dropped. Deterministic.
inline ResResult res_search(const std::vector<Clause>& inputs, ResApparatus app, ResBudget budget = {})
{
  (void)app;  // excluded-middle clauses are tautologies and never help a refutation
  struct Entry {
    Clause clause;
    std::size_t left = 0, right = 0;
    int pivot = 0;
    std::size_t input = 0;
    bool from_input = false;
    bool dead = false;
  };
  std::vector<Entry> all;
  std::vector<std::size_t> active;
  std::set<std::pair<std::size_t, std::size_t>> queue;  // (size, index)
  ResResult res;

  auto build = [&](std::size_t last) {
    // Collect the derivation of `last` and emit it in topological order.
    std::vector<std::size_t> order;
    std::vector<char> seen(all.size(), 0);
    std::vector<std::pair<std::size_t, bool>> st{{last, false}};
    while (!st.empty()) {
      auto [i, done] = st.back();
      st.pop_back();
      if (done) {
        order.push_back(i);
        continue;
      }
      if (seen[i]) continue;
      seen[i] = 1;
      st.push_back({i, true});
      if (!all[i].from_input) {
        st.push_back({all[i].right, false});
        st.push_back({all[i].left, false});
      }
    }
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t i : order) {
      const Entry& e = all[i];
      pos[i] = res.proof.steps.size();
      if (e.from_input) {
        res.proof.steps.push_back(ResStep::from_input(e.input, e.clause));
      } else {
        res.proof.steps.push_back(ResStep::resolution(pos.at(e.left), pos.at(e.right), e.pivot, e.clause));
      }
    }
  };

  auto subsumed = [&](const Clause& c) {
    for (std::size_t i : active) {
      if (!all[i].dead && all[i].clause.subsumes(c)) return true;
    }
    for (const auto& [sz, i] : queue) {
      if (!all[i].dead && all[i].clause.subsumes(c)) return true;
    }
    return false;
  };

  auto offer = [&](Entry e) -> bool {
    if (e.clause.tautology() || subsumed(e.clause)) return false;
    std::size_t idx = all.size();
    all.push_back(std::move(e));
    if (all[idx].clause.empty()) {
      build(idx);
      res.found = true;
      return true;
    }
    for (std::size_t i : active) {
      if (all[idx].clause.subsumes(all[i].clause)) all[i].dead = true;
    }
    queue.insert({all[idx].clause.size(), idx});
    return false;
  };

  for (std::size_t i = 0; i < inputs.size(); ++i) {
    Entry e;
    e.clause = inputs[i];
    e.input = i;
    e.from_input = true;
    if (offer(std::move(e))) return res;
  }

  while (!queue.empty()) {
    auto [sz, g] = *queue.begin();
    queue.erase(queue.begin());
    if (all[g].dead) continue;
    active.erase(std::remove_if(active.begin(), active.end(), [&](std::size_t i) { return all[i].dead; }), active.end());
    active.push_back(g);
    const Clause given = all[g].clause;
    for (std::size_t k = 0; k < active.size(); ++k) {
      std::size_t o = active[k];
      if (all[o].dead) continue;
      const Clause other = all[o].clause;
      for (Lit l : given.lits()) {
        if (!other.contains(-l)) continue;
        Entry e;
        if (l > 0) {
          e.left = g, e.right = o, e.pivot = l;
          e.clause = resolve(given, other, l);
        } else {
          e.left = o, e.right = g, e.pivot = -l;
          e.clause = resolve(other, given, -l);
        }
        if (offer(std::move(e))) {
          res.clauses_kept = all.size();
          return res;
        }
        if (all.size() >= budget.max_clauses) {
          res.clauses_kept = all.size();
          return res;
        }
      }
    }
  }
  res.clauses_kept = all.size();
  return res;
}

// ---------------------------------------------------------------------------
// Clausal form

/// Atom numbering for a clause set. Atoms with a sentence come from the
/// input; the others are definitional atoms introduced by clausify.
struct AtomTable {
  std::vector<std::optional<Formula>> atoms;  // index v - 1
  std::unordered_map<Formula, int, FormulaHash> index;

  int intern(const Formula& a)
  {
    auto it = index.find(a);
    if (it != index.end()) return it->second;
    atoms.push_back(a);
    int v = static_cast<int>(atoms.size());
    index.emplace(a, v);
    return v;
  }
  int fresh()
  {
    atoms.push_back(std::nullopt);
    return static_cast<int>(atoms.size());
  }
  int count() const { return static_cast<int>(atoms.size()); }
};

namespace detail {

class Tseitin {
 public:
  explicit Tseitin(AtomTable& t) : t_(t) {}

  // Literal equivalent to f; definitional clauses go to `out`.
  Lit lit(const Formula& f, std::vector<Clause>& out)
  {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Eq:
      case K::Leq:
      case K::Pred:
        if (!f.is_sentence() || f.has_params()) throw std::invalid_argument("clausify: atom is not ground");
        return t_.intern(f);
      case K::Not: return -lit(f.sub(), out);
      case K::And:
      case K::Or:
      case K::Implies: {
        Lit a = lit(f.lhs(), out);
        Lit b = lit(f.rhs(), out);
        if (f.kind() == K::Implies) a = -a;
        Lit d = t_.fresh();
        if (f.kind() == K::And) {
          out.push_back(Clause({-d, a}));
          out.push_back(Clause({-d, b}));
          out.push_back(Clause({d, -a, -b}));
        } else {
          out.push_back(Clause({-d, a, b}));
          out.push_back(Clause({d, -a}));
          out.push_back(Clause({d, -b}));
        }
        return d;
      }
      default: throw std::invalid_argument("clausify: quantified input is not supported");
    }
  }

 private:
  AtomTable& t_;
};

}  // namespace detail

/// Structural clausal form: equisatisfiable, linear in |s|. Top-level
/// conjunctions are split directly.
inline std::vector<Clause> clausify(const Formula& s, AtomTable& atoms)
{
  std::vector<Clause> out;
  detail::Tseitin ts(atoms);
  std::vector<Formula> todo{s};
  while (!todo.empty()) {
    Formula f = todo.back();
    todo.pop_back();
    if (f.kind() == Formula::Kind::And) {
      todo.push_back(f.rhs());
      todo.push_back(f.lhs());
      continue;
    }
    Lit l = ts.lit(f, out);
    out.push_back(Clause({l}));
  }
  return out;
}

inline std::vector<Clause> clausify(const Formula& s)
{
  AtomTable t;
  return clausify(s, t);
}

// ---------------------------------------------------------------------------
// File formats

class ResFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Cnf {
  int num_atoms = 0;
  std::vector<Clause> clauses;
};

inline Cnf read_cnf(std::string_view text)
{
  Cnf cnf;
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<Lit> cur;
  bool header = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == 'c' || first[0] == '%') continue;
    if (first == "p") {
      std::string fmt;
      std::size_t n_clauses = 0;
      if (!(ls >> fmt >> cnf.num_atoms >> n_clauses) || fmt != "cnf") throw ResFormatError("bad problem line");
      header = true;
      continue;
    }
    std::istringstream all(line);
    long v;
    while (all >> v) {
      if (v == 0) {
        cnf.clauses.emplace_back(cur);
        cur.clear();
      } else {
        if (std::labs(v) > cnf.num_atoms && header) throw ResFormatError("literal " + std::to_string(v) + " out of range");
        cur.push_back(static_cast<Lit>(v));
      }
    }
    if (!all.eof()) throw ResFormatError("bad token in clause line: " + line);
  }
  if (!cur.empty()) throw ResFormatError("last clause not terminated by 0");
  if (!header) {
    for (const Clause& c : cnf.clauses) cnf.num_atoms = std::max(cnf.num_atoms, c.max_atom());
  }
  return cnf;
}

inline std::string write_cnf(const std::vector<Clause>& clauses, int num_atoms = -1)
{
  if (num_atoms < 0) {
    num_atoms = 0;
    for (const Clause& c : clauses) num_atoms = std::max(num_atoms, c.max_atom());
  }
  std::ostringstream os;
  os << "p cnf " << num_atoms << ' ' << clauses.size() << "\n";
  for (const Clause& c : clauses) {
    for (Lit l : c.lits()) os << l << ' ';
    os << "0\n";
  }
  return os.str();
}

/// `.atoms` sidecar: `<v> <sexpr>` per line.
inline std::map<int, Formula> read_atoms(std::string_view text)
{
  std::map<int, Formula> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    int v;
    if (!(ls >> v)) continue;
    std::string rest;
    std::getline(ls, rest);
    out.emplace(v, parse_sentence(rest));
  }
  return out;
}

inline std::string write_atoms(const AtomTable& t)
{
  std::ostringstream os;
  for (int v = 1; v <= t.count(); ++v) {
    if (t.atoms[static_cast<std::size_t>(v - 1)]) os << v << ' ' << *t.atoms[static_cast<std::size_t>(v - 1)] << "\n";
  }
  return os.str();
}

/// `.resproof`, one step per line:
///   input K : lits 0 | lem : lits 0 | resolve I J PIVOT : lits 0
inline std::string write_resproof(const ResProof& p)
{
  std::ostringstream os;
  for (const ResStep& s : p.steps) {
    switch (s.kind) {
      case ResStep::Kind::Input: os << "input " << s.input; break;
      case ResStep::Kind::LemInput: os << "lem"; break;
      case ResStep::Kind::Resolve: os << "resolve " << s.left << ' ' << s.right << ' ' << s.pivot; break;
    }
    os << " :";
    for (Lit l : s.clause.lits()) os << ' ' << l;
    os << " 0\n";
  }
  return os.str();
}

inline ResProof read_resproof(std::string_view text)
{
  ResProof p;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto err = [&](const std::string& m) { return ResFormatError("line " + std::to_string(lineno) + ": " + m); };
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind) || kind[0] == '#') continue;
    ResStep s;
    if (kind == "input") {
      s.kind = ResStep::Kind::Input;
      if (!(ls >> s.input)) throw err("input needs an index");
    } else if (kind == "lem") {
      s.kind = ResStep::Kind::LemInput;
    } else if (kind == "resolve") {
      s.kind = ResStep::Kind::Resolve;
      if (!(ls >> s.left >> s.right >> s.pivot)) throw err("resolve needs two steps and a pivot");
    } else {
      throw err("unknown step kind '" + kind + "'");
    }
    std::string colon;
    if (!(ls >> colon) || colon != ":") throw err("missing ':' before literals");
    std::vector<Lit> lits;
    long v;
    bool terminated = false;
    while (ls >> v) {
      if (v == 0) {
        terminated = true;
        break;
      }
      lits.push_back(static_cast<Lit>(v));
    }
    if (!terminated) throw err("clause not terminated by 0");
    s.clause = Clause(std::move(lits));
    p.steps.push_back(std::move(s));
  }
  return p;
}

}  // namespace tlem

#endif  // TLEM_RESOLUTION_HPP
