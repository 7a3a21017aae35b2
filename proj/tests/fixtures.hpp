#ifndef TLEM_TESTS_FIXTURES_HPP
#define TLEM_TESTS_FIXTURES_HPP

// Hand-written fixture tables shared by the unit tests and the acceptance run.

#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tlem/axiomlab.hpp"
#include "tlem/check.hpp"
#include "tlem/sexpr.hpp"

namespace fixtures {

using namespace tlem;

// Delta0* sentences with their expected truth values.
inline const std::pair<const char*, bool> kEvalTable[] = {
    {"(= (add 1 1) (double 1))", true},
    {"(leq (add 1 1) 1)", false},
    {"(bforall x (double (double 1)) (leq (sub x 1) x))", true},
    {"(bexists x (double (double 1)) (= (double x) (add 1 (add 1 1))))", false},
    {"(bforall x (double (double 1)) (= (div (double x) (double 1)) x))", true},
    {"(bforall x (double (double (double 1))) (leq (logsp x) x))", true},
    {"(bexists x (double (double 1)) (bexists y x (= (add x y) (add (double 1) 1))))", true},
    {"(not (bforall x (add 1 1) (= (max x 1) 1)))", true},
    {"(bforall x (double (double 1)) (implies (leq 1 x) (leq (root x (add 1 1)) x)))", true},
    {"(= (count (add (double (double 1)) 1) (double 1)) 1)", true},
    {"(or (= 0 1) (bforall y 0 (= y 0)))", true},
    {"(and (leq 0 1) (bexists z 1 (not (leq z 1))))", false},
};

struct Fixture {
  const char* name;
  const char* basis;  // one sentence per line
  const char* apparatus;
  const char* proof;
  bool valid;
  const char* diagnostic;  // substring expected in the verdict when invalid
  int node;                // offending node, 0 when not checked
  std::set<std::string> covers;
};

inline std::vector<Formula> basis_of(const char* text)
{
  std::vector<Formula> out;
  std::string s = text, line;
  std::istringstream in(s);
  while (std::getline(in, line)) {
    if (line.find('(') != std::string::npos) out.push_back(parse_sentence(line));
  }
  return out;
}

inline Apparatus app_of(const std::string& s) { return s == "xtab" ? Apparatus::xtab() : Apparatus::tab(); }

// The hand tree for A or not A: rule 2 on the root, two rule-1 nodes, and a
// second rule 2 turning (not (not A)) into A.
inline const char* kLemTree = R"(goal (or (leq 0 1) (not (leq 0 1)))
1 0 goal (not (or (leq 0 1) (not (leq 0 1))))
2 1 r2:1 (and (not (leq 0 1)) (not (not (leq 0 1))))
3 2 r1:2 (not (leq 0 1))
4 3 r1:2 (not (not (leq 0 1)))
5 4 r2:4 (leq 0 1)
close 5 5 3
)";

inline const Fixture kFixtures[] = {
    {"lem_tree", "", "tab", kLemTree, true, "", 0, {"r1", "r2"}},
    {"lem_axiom_under_tab", "", "tab", R"(goal (or (leq 0 1) (not (leq 0 1)))
1 0 goal (not (or (leq 0 1) (not (leq 0 1))))
2 1 lem (or (leq 0 1) (not (leq 0 1)))
close 2 2 1
)", false, "logical axiom not admitted", 2, {"lem"}},
    {"lem_axiom_under_xtab", "", "xtab", R"(goal (or (leq 0 1) (not (leq 0 1)))
1 0 goal (not (or (leq 0 1) (not (leq 0 1))))
2 1 lem (or (leq 0 1) (not (leq 0 1)))
close 2 2 1
)", true, "", 0, {"lem"}},
    {"non_lem_axiom_under_xtab", "", "xtab", R"(goal (or (leq 0 1) (not (leq 0 1)))
1 0 goal (not (or (leq 0 1) (not (leq 0 1))))
2 1 lem (or (leq 0 1) (not (leq 1 0)))
close 2 2 1
)", false, "logical axiom not admitted", 2, {"lem"}},
    {"rule3_split", "(or (= 0 1) (= 1 0))\n(not (= 0 1))\n(not (= 1 0))", "tab", R"(goal (leq 0 0)
1 0 goal (not (leq 0 0))
2 1 axiom:0 (or (= 0 1) (= 1 0))
3 2 axiom:1 (not (= 0 1))
4 3 axiom:2 (not (= 1 0))
5 4 r3:2 (= 0 1)
6 4 r3:2 (= 1 0)
close 5 5 3
close 6 6 4
)", true, "", 0, {"r3", "axiom"}},
    {"rule3_swapped", "(or (= 0 1) (= 1 0))\n(not (= 0 1))\n(not (= 1 0))", "tab", R"(goal (leq 0 0)
1 0 goal (not (leq 0 0))
2 1 axiom:0 (or (= 0 1) (= 1 0))
3 2 axiom:1 (not (= 0 1))
4 3 axiom:2 (not (= 1 0))
5 4 r3:2 (= 1 0)
6 4 r3:2 (= 0 1)
close 5 5 4
close 6 6 3
)", false, "left branch does not match", 5, {"r3"}},
    {"rule4_split", "(implies (leq 0 1) (= 1 1))\n(leq 0 1)", "tab", R"(goal (= 1 1)
1 0 goal (not (= 1 1))
2 1 axiom:0 (implies (leq 0 1) (= 1 1))
3 2 axiom:1 (leq 0 1)
4 3 r4:2 (not (leq 0 1))
5 3 r4:2 (= 1 1)
close 4 3 4
close 5 5 1
)", true, "", 0, {"r4"}},
    {"rule4_unnegated_left", "(implies (leq 0 1) (= 1 1))\n(leq 0 1)", "tab", R"(goal (= 1 1)
1 0 goal (not (= 1 1))
2 1 axiom:0 (implies (leq 0 1) (= 1 1))
3 2 axiom:1 (leq 0 1)
4 3 r4:2 (leq 0 1)
5 3 r4:2 (= 1 1)
close 4 3 4
close 5 5 1
)", false, "left branch does not match", 4, {"r4"}},
    {"rule5_instance", "(forall x (leq 0 x))", "tab", R"(goal (leq 0 1)
1 0 goal (not (leq 0 1))
2 1 axiom:0 (forall x (leq 0 x))
3 2 r5:2 1 (leq 0 1)
close 3 3 1
)", true, "", 0, {"r5"}},
    {"rule5_wrong_instance", "(forall x (leq 0 x))", "tab", R"(goal (leq 0 1)
1 0 goal (not (leq 0 1))
2 1 axiom:0 (forall x (leq 0 x))
3 2 r5:2 0 (leq 0 1)
close 3 3 1
)", false, "node is not the instance", 3, {"r5"}},
    {"rule6_parameter", "(forall x (not (leq (add x 1) 0)))", "tab", R"(goal (not (exists x (leq (add x 1) 0)))
1 0 goal (not (not (exists x (leq (add x 1) 0))))
2 1 r2:1 (exists x (leq (add x 1) 0))
3 2 r6:2:?p1 (leq (add ?p1 1) 0)
4 3 axiom:0 (forall x (not (leq (add x 1) 0)))
5 4 r5:4 ?p1 (not (leq (add ?p1 1) 0))
close 5 3 5
)", true, "", 0, {"r2", "r6", "r5"}},
    {"rule6_parameter_reused", "(forall x (not (leq (add x 1) 0)))", "tab", R"(goal (not (exists x (leq (add x 1) 0)))
1 0 goal (not (not (exists x (leq (add x 1) 0))))
2 1 r2:1 (exists x (leq (add x 1) 0))
3 2 r6:2:?p1 (leq (add ?p1 1) 0)
4 3 r6:2:?p1 (leq (add ?p1 1) 0)
5 4 axiom:0 (forall x (not (leq (add x 1) 0)))
6 5 r5:5 ?p1 (not (leq (add ?p1 1) 0))
close 6 3 6
)", false, "introduced twice", 4, {"r6"}},
    {"parameter_never_introduced", "(forall x (not (leq (add x 1) 0)))", "tab", R"(goal (not (exists x (leq (add x 1) 0)))
1 0 goal (not (not (exists x (leq (add x 1) 0))))
2 1 r2:1 (exists x (leq (add x 1) 0))
3 2 r6:2:?p1 (leq (add ?p1 1) 0)
4 3 axiom:0 (forall x (not (leq (add x 1) 0)))
5 4 r5:4 ?p9 (not (leq (add ?p9 1) 0))
close 5 3 5
)", false, "never introduced", 5, {"r5"}},
    {"rule_a_bounded_instance", "(bforall x 1 (= x x))\n(leq 0 1)", "tab", R"(goal (= 0 0)
1 0 goal (not (= 0 0))
2 1 axiom:0 (bforall x 1 (= x x))
3 2 axiom:1 (leq 0 1)
4 3 ra:2 0 (implies (leq 0 1) (= 0 0))
5 4 r4:4 (not (leq 0 1))
6 4 r4:4 (= 0 0)
close 5 3 5
close 6 6 1
)", true, "", 0, {"ra", "r4"}},
    {"rule_a_on_unbounded", "(forall x (implies (leq x 1) (= x x)))\n(leq 0 1)", "tab", R"(goal (= 0 0)
1 0 goal (not (= 0 0))
2 1 axiom:0 (forall x (implies (leq x 1) (= x x)))
3 2 axiom:1 (leq 0 1)
4 3 ra:2 0 (implies (leq 0 1) (= 0 0))
5 4 r4:4 (not (leq 0 1))
6 4 r4:4 (= 0 0)
close 5 3 5
close 6 6 1
)", false, "not a bounded universal", 4, {"ra"}},
    {"rule_b_bounded_witness", "(forall x (not (leq (add x 1) 0)))", "tab", R"(goal (not (bexists x 0 (leq (add x 1) 0)))
1 0 goal (not (not (bexists x 0 (leq (add x 1) 0))))
2 1 r2:1 (bexists x 0 (leq (add x 1) 0))
3 2 rb:2:?p1 (and (leq ?p1 0) (leq (add ?p1 1) 0))
4 3 r1:3 (leq (add ?p1 1) 0)
5 4 axiom:0 (forall x (not (leq (add x 1) 0)))
6 5 r5:5 ?p1 (not (leq (add ?p1 1) 0))
close 6 4 6
)", true, "", 0, {"rb", "r1"}},
    {"rule_b_missing_bound", "(forall x (not (leq (add x 1) 0)))", "tab", R"(goal (not (bexists x 0 (leq (add x 1) 0)))
1 0 goal (not (not (bexists x 0 (leq (add x 1) 0))))
2 1 r2:1 (bexists x 0 (leq (add x 1) 0))
3 2 rb:2:?p1 (leq (add ?p1 1) 0)
4 3 axiom:0 (forall x (not (leq (add x 1) 0)))
5 4 r5:4 ?p1 (not (leq (add ?p1 1) 0))
close 5 3 5
)", false, "not the bounded instance", 3, {"rb"}},
    {"open_branch", "(implies (leq 0 1) (= 1 1))", "tab", R"(goal (= 1 1)
1 0 goal (not (= 1 1))
2 1 axiom:0 (implies (leq 0 1) (= 1 1))
3 2 r4:2 (not (leq 0 1))
4 2 r4:2 (= 1 1)
close 4 4 1
)", false, "open branch", 3, {"r4"}},
    {"closure_not_contradictory", "", "tab", R"(goal (or (leq 0 1) (not (leq 0 1)))
1 0 goal (not (or (leq 0 1) (not (leq 0 1))))
2 1 r2:1 (and (not (leq 0 1)) (not (not (leq 0 1))))
3 2 r1:2 (not (leq 0 1))
close 3 3 2
)", false, "not contradictory", 3, {"r1"}},
    {"closure_across_branches", "(implies (leq 0 1) (= 1 1))", "tab", R"(goal (= 1 1)
1 0 goal (not (= 1 1))
2 1 axiom:0 (implies (leq 0 1) (= 1 1))
3 2 r4:2 (not (leq 0 1))
4 2 r4:2 (leq 0 1)
close 3 4 3
close 4 4 3
)", false, "", 0, {"r4"}},
    {"axiom_text_differs", "(leq 0 1)", "tab", R"(goal (leq 0 1)
1 0 goal (not (leq 0 1))
2 1 axiom:0 (leq 1 1)
close 2 2 1
)", false, "differs from basis axiom", 2, {"axiom"}},
    {"cites_non_ancestor", "(or (= 0 1) (= 1 0))\n(not (= 0 1))\n(not (= 1 0))", "tab", R"(goal (leq 0 0)
1 0 goal (not (leq 0 0))
2 1 axiom:0 (or (= 0 1) (= 1 0))
3 2 r3:2 (= 0 1)
4 2 r3:2 (= 1 0)
5 3 axiom:1 (not (= 0 1))
6 4 r1:5 (not (= 0 1))
close 5 3 5
close 6 4 6
)", false, "not an ancestor", 6, {"r1"}},
    {"root_not_negated_goal", "", "tab", R"(goal (leq 0 1)
1 0 goal (leq 0 1)
close 1 1 1
)", false, "negated goal", 1, {}},
};

// Diagonalization templates in the variable x, ending with the Group-3 matrix.
inline std::vector<Formula> diagonal_templates()
{
  const char* texts[] = {
      "(= x x)",
      "(leq x x)",
      "(not (= x 0))",
      "(forall y (leq y (add x y)))",
      "(bexists y 1 (= (add y x) x))",
      "(implies (leq x 0) (= 0 1))",
      "(oracle prf0 x 0)",
      "(forall p (not (oracle prf0 (call sub 1 0) (max p x))))",
  };
  std::vector<Formula> out;
  for (const char* s : texts) out.push_back(parse_formula(s));
  out.push_back(selfref_template("prf0"));
  out.push_back(level1_template(kPrfSymbol));
  return out;
}

}  // namespace fixtures

#endif  // TLEM_TESTS_FIXTURES_HPP
