#include <gtest/gtest.h>

#include <filesystem>

#include "corpus.hpp"
#include "support.hpp"
#include "tlem/arith.hpp"
#include "tlem/axiomlab.hpp"
#include "tlem/hilbert.hpp"
#include "tlem/tabproof.hpp"

using namespace tlem;

namespace {

const std::filesystem::path kData = TLEM_DATA_DIR;

AxiomBasis beta_true() { return load_axb(kData / "beta_true.axb"); }

AxiomBasis of(std::vector<Formula> fs)
{
  AxiomBasis b;
  for (Formula& f : fs) b.add(std::move(f), Provenance::User);
  return b;
}

// A Hilbert derivation of B from {A, A -> B}.
HilbProof mp_derivation(const Formula& a, const Formula& b)
{
  HilbProof p;
  p.goal = b;
  HilbLine ax;
  ax.formula = a;
  p.lines.push_back(ax);
  ax.formula = Formula::implies(a, b);
  ax.axiom = 1;
  p.lines.push_back(ax);
  HilbLine mp;
  mp.formula = b;
  mp.kind = HilbLine::Kind::MP;
  mp.a = 0;
  mp.b = 1;
  p.lines.push_back(mp);
  return p;
}

}  // namespace

TEST(Classify, Labels)
{
  EXPECT_EQ(classify_type(AxiomBasis{}).label, "NS");
  TypeClass m = classify_type(of(totality_sentences()));
  EXPECT_EQ(m.label, "M");
  for (Evidence e : m.evidence) EXPECT_EQ(e, Evidence::Declared);
  TypeClass a = classify_type(of({totality_successor(), totality_addition()}));
  EXPECT_EQ(a.label, "A");
  EXPECT_EQ(a.evidence[2], Evidence::NotEstablished);
  EXPECT_EQ(classify_type(of({totality_successor()})).label, "S");
}

TEST(Classify, MixedEvidenceTakesGreatestConsistentClass)
{
  TypeClass t = classify_type(of({totality_successor(), totality_multiplication()}));
  EXPECT_EQ(t.label, "S");
  EXPECT_EQ(t.evidence[1], Evidence::NotEstablished);
  EXPECT_EQ(t.evidence[2], Evidence::Declared);
}

TEST(Classify, FilesMatchLabels)
{
  EXPECT_EQ(classify_type(load_axb(kData / "type_a.axb")).label, "A");
  EXPECT_EQ(classify_type(load_axb(kData / "type_m.axb")).label, "M");
}

TEST(BuildIS, GroupsAndRanks)
{
  AxiomBasis beta = beta_true();
  AxiomBasis is = build_IS(beta, Apparatus::tab());
  EXPECT_EQ(is.count(Provenance::Group0), group0_names().size());
  EXPECT_GE(is.count(Provenance::Group1), 10u);
  EXPECT_EQ(is.count(Provenance::Group2), beta.axioms.size());
  ASSERT_NE(is.group3(), nullptr);
  EXPECT_EQ(rank(is.group3()->formula).str(), "Pi1");
  EXPECT_EQ(&is.axioms.back(), is.group3());
  EXPECT_FALSE(is.contains(totality_multiplication()));

  AxiomBasis empty_is = build_IS(AxiomBasis{}, Apparatus::tab());
  EXPECT_EQ(rank(empty_is.group3()->formula).str(), "Pi1");
  EXPECT_EQ(empty_is.count(Provenance::Group2), 0u);
}

TEST(BuildIS, MultExtendedVariant)
{
  BuildOptions opt;
  opt.mult_extended = true;
  AxiomBasis ism = build_IS(beta_true(), Apparatus::tab(), opt);
  EXPECT_TRUE(ism.contains(totality_multiplication()));
  EXPECT_TRUE(ism.oracles.has_predicate(kPrfMultSymbol));
  // The self-description now names the extended proof predicate.
  EXPECT_NE(to_string(ism.group3()->formula).find(kPrfMultSymbol), std::string::npos);
  EXPECT_NE(ism.group3()->formula, build_IS(beta_true(), Apparatus::tab()).group3()->formula);
}

TEST(BuildIS, Group3FixedPoint)
{
  for (bool mult : {false, true}) {
    BuildOptions opt;
    opt.mult_extended = mult;
    AxiomBasis is = build_IS(beta_true(), Apparatus::tab(), opt);
    auto t = group3_self_term(is);
    ASSERT_TRUE(t.has_value());
    EXPECT_EQ(eval_term(*t, is.oracles), encode(is.group3()->formula));
  }
}

TEST(Group2, InstanceShape)
{
  Formula phi = parse_sentence("(forall x (= (sub x x) 0))");
  Formula g = group2_instance(phi);
  ASSERT_EQ(g.kind(), Formula::Kind::Forall);
  ASSERT_EQ(g.body().kind(), Formula::Kind::Implies);
  EXPECT_EQ(g.body().rhs(), phi);
  const Formula& atom = g.body().lhs();
  EXPECT_EQ(atom.name(), kHilbPrfSymbol);
  EXPECT_EQ(eval_term(atom.term(0)), encode(phi));
  EXPECT_EQ(rank(g).str(), "Pi1");
  EXPECT_THROW(group2_instance(totality_successor()), std::invalid_argument);
}

TEST(Group2, ExtraInstancesOnRequest)
{
  BuildOptions opt;
  opt.group2_for = {parse_sentence("(forall x (= (sub x x) 0))")};
  AxiomBasis is = build_IS(beta_true(), Apparatus::tab(), opt);
  EXPECT_EQ(is.count(Provenance::Group2), beta_true().axioms.size() + 1);
  EXPECT_TRUE(is.contains(group2_instance(opt.group2_for[0])));
}

TEST(SelfRef, FixedPointAndShape)
{
  AxiomBasis b = beta_true();
  Diagonal d = build_selfref(b, Apparatus::tab());
  EXPECT_EQ(eval_term(d.self_term, b.oracles), encode(d.sentence));
  EXPECT_EQ(rank(d.sentence).str(), "Pi1");
  ASSERT_EQ(d.sentence.kind(), Formula::Kind::Forall);
  ASSERT_EQ(d.sentence.body().kind(), Formula::Kind::Not);
  EXPECT_EQ(d.sentence.body().sub().name(), "prf0");
}

TEST(Probe, ContradictionGivesPair)
{
  AxiomBasis b = load_axb(kData / "contradiction.axb");
  ProbeResult r = probe_level1(b, Apparatus::tab(), 100000);
  ASSERT_TRUE(r.pair_found);
  EXPECT_FALSE(r.inconclusive);
  // Everything follows from the pair, so the first candidate in code order wins.
  EXPECT_EQ(r.sentence, probe_candidates(b).front());
  EXPECT_EQ(r.examined, 1u);
  EXPECT_TRUE(check(r.proof_pos, r.sentence, b.formulas(), Apparatus::tab()));
  EXPECT_TRUE(check(r.proof_neg, Formula::neg(r.sentence), b.formulas(), Apparatus::tab()));
}

TEST(Probe, CandidatesInCodeOrder)
{
  auto c = probe_candidates(beta_true());
  ASSERT_GE(c.size(), 16u);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(encode(c[i - 1]), encode(c[i]));
  for (const Formula& f : c) EXPECT_TRUE(is_rank1star(f)) << f;
}

TEST(Probe, ISFromTrueBasisFindsNoPair)
{
  AxiomBasis is = build_IS(beta_true(), Apparatus::tab());
  ProbeResult a = probe_level1(is, Apparatus::tab(), 100000);
  ProbeResult b = probe_level1(is, Apparatus::tab(), 100000);
  EXPECT_FALSE(a.pair_found);
  EXPECT_TRUE(a.inconclusive);
  EXPECT_GT(a.examined, 0u);
  EXPECT_LE(a.nodes_used, 100000u);
  EXPECT_EQ(a.examined, b.examined);
  EXPECT_EQ(a.nodes_used, b.nodes_used);
}

TEST(Axb, ParsesDirectives)
{
  AxiomBasis is = load_axb(kData / "is_tab.axb");
  AxiomBasis built = build_IS(beta_true(), Apparatus::tab());
  EXPECT_EQ(is.formulas(), built.formulas());
  EXPECT_EQ(is.group3()->formula, built.group3()->formula);

  BuildOptions opt;
  opt.mult_extended = true;
  AxiomBasis ism = load_axb(kData / "ism_tab.axb");
  EXPECT_EQ(ism.group3()->formula, build_IS(beta_true(), Apparatus::tab(), opt).group3()->formula);
}

TEST(Axb, RoundTripAndErrors)
{
  AxiomBasis b = beta_true();
  AxiomBasis back = parse_axb(write_axb(b));
  EXPECT_EQ(back.formulas(), b.formulas());
  EXPECT_EQ(load_axb("empty").axioms.size(), 0u);
  EXPECT_THROW(parse_axb("(leq x 0)\n"), BasisFormatError);
  EXPECT_THROW(parse_axb("(leq 0\n"), BasisFormatError);
  EXPECT_THROW(parse_axb("totality division\n"), BasisFormatError);
  EXPECT_THROW(parse_axb("group3 res\n"), BasisFormatError);
  EXPECT_THROW(parse_axb("group2\n"), BasisFormatError);
  try {
    parse_axb("(leq 0 0)\n\n(mul 1 1)\n");
    FAIL();
  } catch (const BasisFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Oracles, PairSemantics)
{
  OracleTable t;
  register_pair(t);
  Formula a = parse_sentence("(forall x (leq 0 x))");
  EXPECT_TRUE(t.test(kPairSymbol, {encode(a), encode(Formula::neg(a))}));
  EXPECT_FALSE(t.test(kPairSymbol, {encode(Formula::neg(a)), encode(a)}));
  EXPECT_FALSE(t.test(kPairSymbol, {encode(totality_successor()), encode(Formula::neg(totality_successor()))}));
  EXPECT_FALSE(t.test(kPairSymbol, {Nat(5), Nat(7)}));
}

// The proof predicate accepts exactly what the checker accepts.
TEST(Oracles, PrfCoherentWithChecker)
{
  const auto c = corpus::tab_corpus(3, 60, 60);
  OracleTable t;
  register_prf(t, "prfe", std::make_shared<const std::vector<Formula>>(), Apparatus::tab());
  register_prf(t, "prfg", std::make_shared<const std::vector<Formula>>(group1_formulas()), Apparatus::tab());
  const Nat no_self = encode(Term::zero());
  const Formula u = parse_sentence("(leq 1 0)");
  std::size_t accepted = 0, rejected = 0;
  for (const auto& e : c) {
    const std::string sym = e.axioms.empty() ? "prfe" : "prfg";
    for (const ProofTree& tree : {e.tree, corpus::with_lem(e.tree, u)}) {
      for (const Formula& goal : {e.goal, Formula::neg(e.goal)}) {
        bool checker = bool(check(tree, goal, e.axioms, Apparatus::tab()));
        bool oracle = t.test(sym, {encode(goal), encode(tree), no_self});
        ASSERT_EQ(oracle, checker) << goal;
        (checker ? accepted : rejected) += 1;
      }
    }
  }
  EXPECT_EQ(accepted, c.size());
  EXPECT_EQ(rejected, 3 * c.size());
  EXPECT_FALSE(t.test("prfe", {encode(u), Nat(12345), no_self}));
}

TEST(Oracles, PrfSeesTheSelfArgument)
{
  Formula a = parse_sentence("(leq 1 0)");
  SearchResult r = search(a, {a}, Apparatus::tab());
  ASSERT_TRUE(r.found);
  OracleTable t;
  register_prf(t, "prf", std::make_shared<const std::vector<Formula>>(), Apparatus::tab());
  EXPECT_TRUE(t.test("prf", {encode(a), encode(r.tree), encode(a)}));
  EXPECT_FALSE(t.test("prf", {encode(a), encode(r.tree), encode(Term::zero())}));
}

TEST(Hilbert, CheckerAndOracle)
{
  Formula a = parse_sentence("(leq 0 1)"), b = parse_sentence("(= 1 1)");
  std::vector<Formula> beta{a, Formula::implies(a, b)};
  HilbProof p = mp_derivation(a, b);
  EXPECT_TRUE(check_hilbert(p, b, beta).valid);
  EXPECT_FALSE(check_hilbert(p, a, beta).valid);
  EXPECT_FALSE(check_hilbert(p, b, {a}).valid);

  HilbProof back = decode_hilbert(encode(p));
  EXPECT_EQ(hilbert_sexpr(back), hilbert_sexpr(p));

  OracleTable t;
  register_hilbprf(t, std::make_shared<const std::vector<Formula>>(beta));
  EXPECT_TRUE(t.test(kHilbPrfSymbol, {encode(b), encode(p)}));
  EXPECT_FALSE(t.test(kHilbPrfSymbol, {encode(a), encode(p)}));
  EXPECT_FALSE(t.test(kHilbPrfSymbol, {encode(b), Nat(99)}));
}

TEST(Hilbert, Schemas)
{
  Formula a = parse_sentence("(leq 0 1)"), b = parse_sentence("(= 1 1)"), c = parse_sentence("(= 0 0)");
  auto I = [](const Formula& x, const Formula& y) { return Formula::implies(x, y); };
  EXPECT_TRUE(detail::check_schema("k", I(a, I(b, a))));
  EXPECT_FALSE(detail::check_schema("k", I(a, I(b, b))));
  EXPECT_TRUE(detail::check_schema("s", I(I(a, I(b, c)), I(I(a, b), I(a, c)))));
  EXPECT_TRUE(detail::check_schema("andl", I(Formula::conj(a, b), a)));
  EXPECT_TRUE(detail::check_schema("orr", I(b, Formula::disj(a, b))));
  Formula all = parse_sentence("(forall x (leq x (add x 1)))");
  EXPECT_TRUE(detail::check_schema("q1", I(all, parse_sentence("(leq 1 (add 1 1))"))));
  EXPECT_FALSE(detail::check_schema("q1", I(all, parse_sentence("(leq 1 (add 0 1))"))));
  EXPECT_TRUE(detail::check_schema("exi", I(parse_sentence("(= 1 1)"), parse_sentence("(exists y (= y 1))"))));
  EXPECT_FALSE(detail::check_schema("bogus", I(a, a)));
}

TEST(Hilbert, Group2InstanceEvaluates)
{
  // Under the beta whose derivations hilbprf accepts, a Group-2 instance for a
  // true sentence never meets a counterexample.
  Formula phi = parse_sentence("(leq 0 1)");
  AxiomBasis beta = of({phi});
  AxiomBasis is = build_IS(beta, Apparatus::tab());
  Formula g2 = group2_instance(phi);
  ASSERT_TRUE(is.contains(g2));
  EXPECT_NE(eval_sentence(g2, is.oracles, 200), Truth::False);
}
