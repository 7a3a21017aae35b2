#ifndef TLEM_TABPROOF_HPP
#define TLEM_TABPROOF_HPP

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tlem/godel.hpp"
#include "tlem/proof.hpp"
#include "tlem/sexpr.hpp"

namespace tlem {

class ProofFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Contents of a `.tabproof` file. `basis` and `apparatus` are kept as the
/// raw header strings; resolving them is the caller's business.
struct TabProofFile {
  ProofTree tree;
  std::string basis = "empty";
  std::string apparatus = "tab";
};

namespace detail {

inline std::string justification_text(const Justification& j)
{
  switch (j.kind) {
    case Justification::Kind::NegatedGoal: return "goal";
    case Justification::Kind::ProperAxiom: return "axiom:" + std::to_string(j.axiom);
    case Justification::Kind::LogicalAxiom: return "lem";
    case Justification::Kind::RuleApp: break;
  }
  std::string s = std::string(rule_name(j.rule)) + ":" + std::to_string(j.ancestor);
  if (takes_param(j.rule)) s += ":?" + j.param;
  return s;
}

inline int parse_int(const std::string& s, const char* what)
{
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 0) throw ProofFormatError(std::string("bad ") + what + " '" + s + "'");
  return static_cast<int>(v);
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

/// Writes the line format:
///   goal <sexpr> / basis <path> / apparatus <name>
///   <id> <parent> <justification> [<term>] <sexpr>
///   close <leaf> <phi> <negphi>
/// Rules 5 and a carry their instantiation term before the node sentence.
inline std::string write_tabproof(const TabProofFile& f)
{
  std::ostringstream os;
  os << "goal " << f.tree.goal << "\n";
  os << "basis " << f.basis << "\n";
  os << "apparatus " << f.apparatus << "\n";
  for (const ProofNode& n : f.tree.nodes) {
    os << n.id << ' ' << n.parent << ' ' << detail::justification_text(n.just) << ' ';
    if (n.just.term) os << *n.just.term << ' ';
    os << n.formula << "\n";
  }
  for (const Closure& c : f.tree.closures) os << "close " << c.leaf << ' ' << c.pos << ' ' << c.neg << "\n";
  return os.str();
}

inline TabProofFile read_tabproof(std::string_view text)
{
  TabProofFile out;
  bool have_goal = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto where = [&](const std::string& msg) {
      return ProofFormatError("line " + std::to_string(lineno) + ": " + msg);
    };
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ls(line.substr(start));
    std::string head;
    ls >> head;
    std::string rest;
    std::getline(ls, rest);
    try {
      if (head == "goal") {
        out.tree.goal = parse_sentence(rest);
        have_goal = true;
      } else if (head == "basis") {
        std::istringstream(rest) >> out.basis;
      } else if (head == "apparatus") {
        std::istringstream(rest) >> out.apparatus;
      } else if (head == "close") {
        std::istringstream cs(rest);
        Closure c;
        if (!(cs >> c.leaf >> c.pos >> c.neg)) throw where("close needs three node ids");
        out.tree.closures.push_back(c);
      } else {
        ProofNode n;
        n.id = detail::parse_int(head, "node id");
        std::istringstream ns(rest);
        std::string parent, just;
        if (!(ns >> parent >> just)) throw where("node line needs parent and justification");
        n.parent = detail::parse_int(parent, "parent id");
        std::string tail;
        std::getline(ns, tail);
        SExprReader reader(tail);
        auto parts = detail::split(just, ':');
        if (parts[0] == "goal" && parts.size() == 1) {
          n.just = Justification::negated_goal();
        } else if (parts[0] == "lem" && parts.size() == 1) {
          n.just = Justification::logical_axiom();
        } else if (parts[0] == "axiom" && parts.size() == 2) {
          n.just = Justification::proper_axiom(static_cast<std::size_t>(detail::parse_int(parts[1], "axiom index")));
        } else {
          Rule r;
          if (!rule_from_name(parts[0], r) || parts.size() < 2) throw where("unknown justification '" + just + "'");
          int anc = detail::parse_int(parts[1], "ancestor id");
          if (takes_param(r)) {
            if (parts.size() != 3 || parts[2].size() < 2 || parts[2][0] != '?') {
              throw where("rule " + parts[0] + " needs a ?parameter");
            }
            n.just = Justification::introduce(r, anc, parts[2].substr(1));
          } else if (takes_term(r)) {
            if (parts.size() != 2) throw where("malformed justification '" + just + "'");
            n.just = Justification::instantiate(r, anc, term_from_sexpr(reader.read()));
          } else {
            if (parts.size() != 2) throw where("malformed justification '" + just + "'");
            n.just = Justification::apply(r, anc);
          }
        }
        n.formula = formula_from_sexpr(reader.read());
        if (!reader.at_end()) throw where("trailing text after node sentence");
        out.tree.nodes.push_back(n);
      }
    } catch (const ParseError& e) {
      throw where(e.what());
    }
  }
  if (!have_goal) throw ProofFormatError("missing goal line");
  return out;
}

// ---------------------------------------------------------------------------
// Proof objects as Goedel codes. The proof is rendered as one canonical
// s-expression and numbered with the same token codec as formulas:
//   (tabproof GOAL (n ID PARENT J F) ... (close LEAF POS NEG) ...)
//   J = goal | lem | (axiom K) | (rK ANC) | (r5 ANC TERM) | (r6 ANC ?p)
//   (tab1chain GOAL (lemma F PROOF) ...)

namespace detail {

inline void print_just(std::ostream& os, const Justification& j)
{
  switch (j.kind) {
    case Justification::Kind::NegatedGoal: os << "goal"; return;
    case Justification::Kind::LogicalAxiom: os << "lem"; return;
    case Justification::Kind::ProperAxiom: os << "(axiom " << j.axiom << ")"; return;
    case Justification::Kind::RuleApp: break;
  }
  os << "(" << rule_name(j.rule) << " " << j.ancestor;
  if (j.term) os << " " << *j.term;
  if (takes_param(j.rule)) os << " ?" << j.param;
  os << ")";
}

inline int atom_int(const SExpr& e)
{
  if (e.is_list) throw DecodeError("expected a number");
  try {
    return parse_int(e.atom, "number");
  } catch (const ProofFormatError& err) {
    throw DecodeError(err.what());
  }
}

inline Justification just_from_sexpr(const SExpr& e)
{
  if (!e.is_list) {
    if (e.atom == "goal") return Justification::negated_goal();
    if (e.atom == "lem") return Justification::logical_axiom();
    throw DecodeError("bad justification '" + e.atom + "'");
  }
  if (e.list.empty() || e.list[0].is_list) throw DecodeError("bad justification list");
  const std::string& head = e.list[0].atom;
  if (head == "axiom" && e.list.size() == 2) return Justification::proper_axiom(static_cast<std::size_t>(atom_int(e.list[1])));
  Rule r;
  if (!rule_from_name(head, r) || e.list.size() < 2) throw DecodeError("bad justification head '" + head + "'");
  int anc = atom_int(e.list[1]);
  if (takes_term(r)) {
    if (e.list.size() != 3) throw DecodeError("instantiation needs a term");
    return Justification::instantiate(r, anc, term_from_sexpr(e.list[2]));
  }
  if (takes_param(r)) {
    if (e.list.size() != 3 || e.list[2].is_list || e.list[2].atom.size() < 2 || e.list[2].atom[0] != '?') {
      throw DecodeError("introduction needs a parameter");
    }
    return Justification::introduce(r, anc, e.list[2].atom.substr(1));
  }
  if (e.list.size() != 2) throw DecodeError("too many fields in justification");
  return Justification::apply(r, anc);
}

inline ProofTree tree_from_sexpr(const SExpr& e)
{
  if (!e.is_list || e.list.size() < 2 || e.list[0].is_list || e.list[0].atom != "tabproof") {
    throw DecodeError("not a tabproof");
  }
  ProofTree t;
  t.goal = formula_from_sexpr(e.list[1]);
  for (std::size_t i = 2; i < e.list.size(); ++i) {
    const SExpr& x = e.list[i];
    if (!x.is_list || x.list.empty() || x.list[0].is_list) throw DecodeError("bad proof entry");
    if (x.list[0].atom == "n" && x.list.size() == 5) {
      ProofNode n;
      n.id = atom_int(x.list[1]);
      n.parent = atom_int(x.list[2]);
      n.just = just_from_sexpr(x.list[3]);
      n.formula = formula_from_sexpr(x.list[4]);
      t.nodes.push_back(n);
    } else if (x.list[0].atom == "close" && x.list.size() == 4) {
      t.closures.push_back({atom_int(x.list[1]), atom_int(x.list[2]), atom_int(x.list[3])});
    } else {
      throw DecodeError("bad proof entry '" + x.list[0].atom + "'");
    }
  }
  return t;
}

template <class F>
auto decode_with(const Nat& code, F&& build)
{
  std::string text;
  try {
    text = TokenCodec::instance().decode_text(code);
  } catch (const std::out_of_range&) {
    throw DecodeError("malformed code");
  }
  try {
    SExprReader r(text);
    SExpr e = r.read();
    if (!r.at_end()) throw DecodeError("trailing tokens");
    return build(e);
  } catch (const ParseError& err) {
    throw DecodeError(err.what());
  }
}

}  // namespace detail

inline std::string proof_sexpr(const ProofTree& t)
{
  std::ostringstream os;
  os << "(tabproof " << t.goal;
  for (const ProofNode& n : t.nodes) {
    os << " (n " << n.id << " " << n.parent << " ";
    detail::print_just(os, n.just);
    os << " " << n.formula << ")";
  }
  for (const Closure& c : t.closures) os << " (close " << c.leaf << " " << c.pos << " " << c.neg << ")";
  os << ")";
  return os.str();
}

inline std::string chain_sexpr(const Tab1Chain& c)
{
  std::ostringstream os;
  os << "(tab1chain " << c.goal;
  for (const auto& [tree, lemma] : c.pairs) os << " (lemma " << lemma << " " << proof_sexpr(tree) << ")";
  os << ")";
  return os.str();
}

inline Nat encode(const ProofTree& t) { return TokenCodec::instance().encode_text(proof_sexpr(t)); }
inline Nat encode(const Tab1Chain& c) { return TokenCodec::instance().encode_text(chain_sexpr(c)); }

inline ProofTree decode_proof(const Nat& code)
{
  return detail::decode_with(code, [](const SExpr& e) { return detail::tree_from_sexpr(e); });
}

inline Tab1Chain decode_chain(const Nat& code)
{
  return detail::decode_with(code, [](const SExpr& e) {
    if (!e.is_list || e.list.size() < 2 || e.list[0].is_list || e.list[0].atom != "tab1chain") {
      throw DecodeError("not a tab1chain");
    }
    Tab1Chain c;
    c.goal = formula_from_sexpr(e.list[1]);
    for (std::size_t i = 2; i < e.list.size(); ++i) {
      const SExpr& x = e.list[i];
      if (!x.is_list || x.list.size() != 3 || x.list[0].is_list || x.list[0].atom != "lemma") {
        throw DecodeError("bad chain entry");
      }
      c.pairs.emplace_back(detail::tree_from_sexpr(x.list[2]), formula_from_sexpr(x.list[1]));
    }
    return c;
  });
}

/// Indented pretty print, one node per line.
inline std::string pretty(const ProofTree& t)
{
  std::vector<std::vector<int>> ch(t.nodes.size() + 1);
  for (const ProofNode& n : t.nodes) {
    if (n.parent > 0) ch[static_cast<std::size_t>(n.parent)].push_back(n.id);
  }
  std::ostringstream os;
  std::vector<std::pair<int, int>> st;
  if (!t.nodes.empty()) st.push_back({1, 0});
  while (!st.empty()) {
    auto [id, depth] = st.back();
    st.pop_back();
    const ProofNode& n = t.node(id);
    os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << n.id << ". " << n.formula << "   ["
       << detail::justification_text(n.just) << "]\n";
    const auto& c = ch[static_cast<std::size_t>(id)];
    int d = c.size() > 1 ? depth + 1 : depth;
    for (auto it = c.rbegin(); it != c.rend(); ++it) st.push_back({*it, d});
  }
  return os.str();
}

}  // namespace tlem

#endif  // TLEM_TABPROOF_HPP
