// tlem: command-line front end over the engine headers.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tlem/axiomlab.hpp"
#include "tlem/bench.hpp"
#include "tlem/compose.hpp"
#include "tlem/config.hpp"
#include "tlem/eval.hpp"
#include "tlem/godel.hpp"
#include "tlem/numeral.hpp"
#include "tlem/rank.hpp"
#include "tlem/resolution.hpp"
#include "tlem/search.hpp"
#include "tlem/tab1.hpp"
#include "tlem/tabproof.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace tlem;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2 };

struct Global {
  bool json = false;
  std::string config_path;
  std::optional<std::size_t> budget;
  std::optional<std::uint64_t> seed;
  Config cfg;
};

Global g;

void emit(const json& record, const std::string& text)
{
  if (g.json) {
    std::cout << record.dump() << "\n";
  } else if (!text.empty()) {
    std::cout << text;
    if (text.back() != '\n') std::cout << "\n";
  }
}

void write_out(const std::string& path, const std::string& content)
{
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

AxiomBasis basis_at(const std::string& path)
{
  if (path.empty() || path == "empty") {
    AxiomBasis b;
    b.name = "empty";
    return b;
  }
  if (path == "group1") {
    AxiomBasis b;
    b.name = "group1";
    add_group1(b);
    return b;
  }
  return load_axb(path);
}

std::vector<Formula> read_sentence_list(const std::string& path)
{
  std::vector<Formula> out;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_formula(line));
  }
  return out;
}

Apparatus apparatus_from(const std::string& desc, const fs::path& base = ".")
{
  if (desc == "tab") return Apparatus::tab();
  if (desc == "xtab") return Apparatus::xtab();
  if (desc == "tab1") return Apparatus::tab1();
  auto colon = desc.find(':');
  if (colon != std::string::npos) {
    std::string kind = desc.substr(0, colon);
    fs::path list = desc.substr(colon + 1);
    if (list.is_relative() && !fs::exists(list)) list = base / list;
    if (kind == "z") return Apparatus::z_list(read_sentence_list(list.string()), desc);
    if (kind == "zvar") return Apparatus::z_var_list(read_sentence_list(list.string()), desc);
  }
  throw CLI::ValidationError("--apparatus", "expected tab, xtab, tab1, z:<file> or zvar:<file>, got '" + desc + "'");
}

SearchBudget search_budget()
{
  SearchBudget b;
  b.max_nodes = g.cfg.max_nodes;
  b.max_depth = g.cfg.max_depth;
  return b;
}

// Tab-1 chain files: consecutive .tabproof blocks, each beginning with its
// goal line; the last block proves the chain's goal.
std::string write_chain(const Tab1Chain& c, const std::string& basis)
{
  std::string out;
  for (const auto& [tree, lemma] : c.pairs) out += write_tabproof({tree, basis, "tab1"});
  return out;
}

Tab1Chain read_chain(const std::string& text)
{
  std::vector<std::string> blocks;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("goal ", 0) == 0) blocks.emplace_back();
    if (blocks.empty()) continue;
    blocks.back() += line + "\n";
  }
  Tab1Chain c;
  for (const std::string& b : blocks) {
    TabProofFile f = read_tabproof(b);
    c.pairs.emplace_back(f.tree, f.tree.goal);
  }
  if (!c.pairs.empty()) c.goal = c.pairs.back().second;
  return c;
}

fs::path resolve_near(const std::string& p, const fs::path& anchor)
{
  if (p == "empty" || p == "group1" || p == "inline") return p;
  fs::path q = p;
  if (q.is_relative() && !fs::exists(q)) q = anchor.parent_path() / q;
  return q;
}

int run_parse(const std::string& text)
{
  Parsed p = parse(text);
  json j;
  std::ostringstream os;
  if (std::holds_alternative<Formula>(p)) {
    const Formula& f = std::get<Formula>(p);
    j = {{"kind", "formula"}, {"canonical", to_string(f)}, {"sentence", f.is_sentence()}, {"rank", rank(f).str()},
         {"rank1star", is_rank1star(f)}, {"size", f.size()}};
    os << to_string(f) << "\nrank " << rank(f).str() << (f.is_sentence() ? "" : " (open formula)") << "\n";
  } else {
    const Term& t = std::get<Term>(p);
    j = {{"kind", "term"}, {"canonical", to_string(t)}, {"size", t.size()}};
    os << to_string(t) << "\n";
  }
  emit(j, os.str());
  return kOk;
}

int run_eval(const std::string& text)
{
  Parsed p = parse(text);
  if (std::holds_alternative<Term>(p)) {
    Nat v = eval_term(std::get<Term>(p));
    emit({{"value", v.get_str()}}, v.get_str());
    return kOk;
  }
  Truth t = eval_sentence(std::get<Formula>(p), OracleTable{}, g.cfg.eval_budget);
  emit({{"truth", to_string(t)}}, to_string(t));
  return t == Truth::True ? kOk : kNegative;
}

int run_codes(const std::vector<std::string>& texts, const std::string& file, const std::string& decode_code)
{
  if (!decode_code.empty()) {
    Parsed p = decode(nat_from_string(decode_code));
    std::string s = std::visit([](const auto& x) { return to_string(x); }, p);
    emit({{"code", decode_code}, {"sexpr", s}}, s);
    return kOk;
  }
  std::vector<std::string> items = texts;
  if (!file.empty()) {
    std::istringstream in(read_file(file));
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos && line[line.find_first_not_of(" \t")] != '#') items.push_back(line);
    }
  }
  for (const std::string& t : items) {
    Parsed p = parse(t);
    Nat c = std::visit([](const auto& x) { return encode(x); }, p);
    std::string s = std::visit([](const auto& x) { return to_string(x); }, p);
    emit({{"code", c.get_str()}, {"sexpr", s}}, c.get_str() + "\t" + s);
  }
  return kOk;
}

int run_sequences(const std::string& kind, unsigned n)
{
  GrowthKind k = kind == "doubling" ? GrowthKind::Doubling : GrowthKind::Squaring;
  if (kind != "doubling" && kind != "squaring") throw CLI::ValidationError("--kind", "doubling or squaring");
  GrowthSeq s = growth(k, n, g.cfg.squaring_cap);
  emit({{"kind", kind}, {"n", n}, {"value", s.value.get_str()}, {"logsp", growth_logsp(s)}},
       s.value.get_str() + "\nlogsp " + std::to_string(growth_logsp(s)));
  return kOk;
}

int run_numeral(const std::string& n)
{
  NumeralTerm t = numeral(nat_from_string(n));
  emit({{"n", n}, {"term", to_string(t.term)}, {"symbols", symbol_count(t.term)}},
       to_string(t.term) + "\nsymbols " + std::to_string(symbol_count(t.term)));
  return kOk;
}

int run_prove(const std::string& goal_text, const std::string& basis_path, const std::string& app_name,
              const std::vector<std::string>& lemmas, const std::string& out)
{
  Formula goal = parse_sentence(goal_text);
  AxiomBasis basis = basis_at(basis_path);
  Apparatus app = apparatus_from(app_name);
  if (app.kind == Apparatus::Kind::Tab1) {
    std::vector<Formula> ls;
    for (const std::string& l : lemmas) ls.push_back(parse_sentence(l));
    ChainResult r = search_chain(ls, goal, basis.formulas(), search_budget());
    json j{{"goal", to_string(goal)}, {"apparatus", "tab1"}, {"found", r.found}, {"explored", r.nodes_explored}};
    if (!r.found) {
      j["failed_index"] = r.failed_index;
      emit(j, "Exhausted at chain index " + std::to_string(r.failed_index));
      return kNegative;
    }
    write_out(out, write_chain(r.chain, basis_path.empty() ? "empty" : basis_path));
    if (!out.empty() && out != "-") emit(j, "Found chain of " + std::to_string(r.chain.pairs.size()) + " -> " + out);
    return kOk;
  }
  SearchResult r = search(goal, basis.formulas(), app, search_budget());
  json j{{"goal", to_string(goal)}, {"apparatus", app_name}, {"found", r.found}, {"explored", r.nodes_explored}};
  if (!r.found) {
    emit(j, "Exhausted after " + std::to_string(r.nodes_explored) + " nodes");
    return kNegative;
  }
  ProofSize s = proof_size(r.tree);
  j["nodes"] = s.nodes;
  j["symbols"] = s.symbols;
  j["method"] = r.method;
  write_out(out, write_tabproof({r.tree, basis_path.empty() ? "empty" : basis_path, app_name}));
  if (!out.empty() && out != "-") {
    j["file"] = out;
    emit(j, "Found " + std::to_string(s.nodes) + " nodes (" + r.method + ") -> " + out);
  }
  return kOk;
}

int run_checkproof(const std::string& file, const std::string& basis_override)
{
  std::string text = read_file(file);
  TabProofFile header = read_tabproof(text.substr(0, text.find('\n', text.find("apparatus")) + 1));
  fs::path bpath = basis_override.empty() ? resolve_near(header.basis, file) : fs::path(basis_override);
  AxiomBasis basis = basis_at(bpath.string());
  Verdict v;
  if (header.apparatus == "tab1") {
    Tab1Chain c = read_chain(text);
    v = check_chain(c, basis.formulas());
  } else {
    TabProofFile f = read_tabproof(text);
    v = check(f.tree, f.tree.goal, basis.formulas(), apparatus_from(f.apparatus, fs::path(file).parent_path()));
  }
  json j{{"file", file}, {"valid", v.valid}};
  if (!v.valid) {
    j["diagnostic"] = v.diagnostic;
    j["node"] = v.node;
    j["index"] = v.index;
  }
  emit(j, v.valid ? "Valid" : "Invalid: " + v.diagnostic + (v.node ? " (node " + std::to_string(v.node) + ")" : ""));
  return v.valid ? kOk : kNegative;
}

int run_compose(const std::string& f1, const std::string& f2, const std::string& basis_path, const std::string& out)
{
  TabProofFile a = read_tabproof(read_file(f1));
  TabProofFile b = read_tabproof(read_file(f2));
  AxiomBasis basis = basis_at(basis_path.empty() ? resolve_near(a.basis, f1).string() : basis_path);
  ProofTree c = compose_linear_sum(a.tree, b.tree);
  Verdict v = check(c, c.goal, basis.formulas(), Apparatus::xtab());
  std::size_t sym = proof_size(c).symbols, bound = compose_bound(a.tree, b.tree);
  json j{{"valid", v.valid}, {"symbols", sym}, {"bound", bound}, {"nodes", c.size()}};
  if (!v.valid) {
    emit(j, "composed proof failed to check: " + v.diagnostic);
    return kNegative;
  }
  write_out(out, write_tabproof({c, basis_path.empty() ? a.basis : basis_path, "xtab"}));
  if (!out.empty() && out != "-") emit(j, "Composed " + std::to_string(c.size()) + " nodes, " + std::to_string(sym) +
                                              " symbols (bound " + std::to_string(bound) + ") -> " + out);
  return sym <= bound ? kOk : kNegative;
}

// The IS basis is written as directives so that reloading rebuilds the oracles.
int run_build_is(const std::string& beta_path, const std::string& app_name, bool mult, const std::string& out)
{
  AxiomBasis beta = basis_at(beta_path);
  Apparatus app = apparatus_from(app_name);
  BuildOptions o;
  o.mult_extended = mult;
  AxiomBasis is = build_IS(beta, app, o);
  std::ostringstream os;
  os << "# " << is.name << "\ngroup0\ngroup1\n";
  if (beta_path != "empty" && !beta_path.empty()) {
    fs::path bp = fs::absolute(beta_path);
    if (!out.empty() && out != "-") bp = fs::relative(bp, fs::absolute(out).parent_path());
    os << "group2 " << bp.string() << "\n";
  }
  if (mult) os << "totality multiplication\n";
  os << "group3 " << app_name << "\n";
  write_out(out, os.str());
  const BasisAxiom* g3 = is.group3();
  json j{{"name", is.name},
         {"axioms", is.axioms.size()},
         {"group0", is.count(Provenance::Group0)},
         {"group1", is.count(Provenance::Group1)},
         {"group2", is.count(Provenance::Group2)},
         {"group3_rank", rank(g3->formula).str()},
         {"group3_symbols", g3->formula.size()}};
  if (!out.empty() && out != "-") {
    emit(j, is.name + ": " + std::to_string(is.axioms.size()) + " axioms, Group-3 rank " + rank(g3->formula).str() + " -> " + out);
  }
  return kOk;
}

int run_classify(const std::string& basis_path)
{
  AxiomBasis b = basis_at(basis_path);
  TypeClass tc = classify_type(b, search_budget());
  json j{{"basis", b.name},
         {"type", tc.label},
         {"successor", to_string(tc.evidence[0])},
         {"addition", to_string(tc.evidence[1])},
         {"multiplication", to_string(tc.evidence[2])},
         {"explored", tc.nodes_explored}};
  emit(j, "Type-" + tc.label + "  successor=" + to_string(tc.evidence[0]) + " addition=" + to_string(tc.evidence[1]) +
              " multiplication=" + to_string(tc.evidence[2]));
  return kOk;
}

int run_probe(const std::string& basis_path, const std::string& app_name, std::size_t budget)
{
  AxiomBasis b = basis_at(basis_path);
  ProbeResult r = probe_level1(b, apparatus_from(app_name), budget, std::min<std::size_t>(g.cfg.max_nodes, budget));
  std::ostringstream os;
  if (r.pair_found) {
    os << "PairFound " << r.sentence << "\n" << pretty(r.proof_pos) << "--- negation\n" << pretty(r.proof_neg);
  } else {
    os << "NoPairFound (inconclusive: finite budget)\n";
  }
  os << "# result=" << (r.pair_found ? "PairFound" : "NoPairFound") << " examined=" << r.examined
     << " nodes=" << r.nodes_used << " budget=" << budget;
  json j{{"result", r.pair_found ? "PairFound" : "NoPairFound"},
         {"inconclusive", r.inconclusive},
         {"examined", r.examined},
         {"nodes", r.nodes_used},
         {"budget", budget}};
  if (r.pair_found) j["sentence"] = to_string(r.sentence);
  emit(j, os.str());
  return r.pair_found ? kNegative : kOk;
}

std::vector<std::string> split_list(const std::string& s)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int run_bench(const std::string& families, const std::string& apps, const std::string& out, const std::string& proof_dir)
{
  BenchOptions o;
  for (const std::string& f : split_list(families)) {
    auto colon = f.find(':');
    unsigned n = colon == std::string::npos ? 5u : static_cast<unsigned>(std::stoul(f.substr(colon + 1)));
    o.families.push_back({family_from_string(f.substr(0, colon)), n});
  }
  o.apparatuses = split_list(apps);
  o.budget = g.cfg.max_nodes;
  o.max_depth = g.cfg.max_depth;
  o.seed = g.cfg.seed;
  o.proof_dir = proof_dir;
  auto rows = run_bench(o);
  if (!out.empty()) write_out(out, to_csv(rows));
  for (const BenchRow& r : rows) {
    emit({{"family", r.family}, {"n", r.n}, {"apparatus", r.apparatus}, {"outcome", r.found ? "Found" : "Exhausted"},
          {"nodes", r.nodes}, {"symbols", r.symbols}, {"ms", r.ms}, {"seed", r.seed}, {"budget", r.budget}},
         out.empty() ? csv_row(r) : "");
  }
  if (!out.empty() && !g.json) std::cout << rows.size() << " rows -> " << out << "\n";
  return kOk;
}

std::vector<Clause> load_inputs(const std::string& cnf_path, const std::string& sentence)
{
  if (!sentence.empty()) return clausify(parse_sentence(sentence));
  return read_cnf(read_file(cnf_path)).clauses;
}

ResApparatus res_app(const std::string& s)
{
  if (s == "res") return ResApparatus::Res;
  if (s == "xres") return ResApparatus::Xres;
  throw CLI::ValidationError("--apparatus", "res or xres");
}

int run_refute(const std::string& cnf, const std::string& sentence, const std::string& app, const std::string& out)
{
  auto inputs = load_inputs(cnf, sentence);
  ResBudget b;
  b.max_clauses = g.cfg.max_nodes;
  ResResult r = res_search(inputs, res_app(app), b);
  json j{{"found", r.found}, {"clauses", r.clauses_kept}, {"inputs", inputs.size()}};
  if (!r.found) {
    emit(j, "Exhausted after " + std::to_string(r.clauses_kept) + " clauses");
    return kNegative;
  }
  j["steps"] = r.proof.steps.size();
  write_out(out, write_resproof(r.proof));
  if (!out.empty() && out != "-") emit(j, "Refuted in " + std::to_string(r.proof.steps.size()) + " steps -> " + out);
  return kOk;
}

int run_rescheck(const std::string& cnf, const std::string& sentence, const std::string& proof, const std::string& app)
{
  auto inputs = load_inputs(cnf, sentence);
  ResVerdict v = res_check(read_resproof(read_file(proof)), inputs, res_app(app));
  emit({{"valid", v.valid}, {"diagnostic", v.diagnostic}}, v.valid ? "Valid" : "Invalid: " + v.diagnostic);
  return v.valid ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"tlem: tableau and resolution proofs over the language L*"};
  app.require_subcommand(1);
  app.add_flag("--json", g.json, "line-delimited JSON records");
  app.add_option("--config", g.config_path, "key=value config file");
  app.add_option("--budget,--max-nodes", g.budget, "node budget");
  app.add_option("--seed", g.seed, "random seed");

  std::string text, file, basis, apparatus = "tab", out, kind = "doubling", decode_code, beta, p1, p2, families,
                                   apps = "tab,xtab", proof_dir, cnf, sentence, proof, res_apparatus = "res";
  std::vector<std::string> texts, lemmas;
  unsigned n = 0;
  std::string nstr;
  bool mult = false;
  std::size_t probe_budget = 100000;
  int rc = kOk;

  auto* c_parse = app.add_subcommand("parse", "parse and print canonically");
  c_parse->add_option("text", text, "term or formula")->required();
  auto* c_eval = app.add_subcommand("eval", "evaluate a ground term or sentence");
  c_eval->add_option("text", text)->required();
  auto* c_codes = app.add_subcommand("codes", "Goedel codes (code<TAB>sexpr)");
  c_codes->add_option("texts", texts);
  c_codes->add_option("--file", file, "one term or formula per line");
  c_codes->add_option("--decode", decode_code, "decode a code instead");
  auto* c_seq = app.add_subcommand("sequences", "growth sequences");
  c_seq->add_option("--kind", kind)->check(CLI::IsMember({"doubling", "squaring"}));
  c_seq->add_option("--n", n)->required();
  auto* c_num = app.add_subcommand("numeral", "compact numeral term");
  c_num->add_option("n", nstr)->required();
  auto* c_prove = app.add_subcommand("prove", "search for a proof");
  c_prove->add_option("--goal", text)->required();
  c_prove->add_option("--basis", basis, ".axb file, 'empty' or 'group1'");
  c_prove->add_option("--apparatus", apparatus);
  c_prove->add_option("--lemma", lemmas, "Tab-1 lemmas in order");
  c_prove->add_option("--out", out);
  auto* c_check = app.add_subcommand("checkproof", "check a .tabproof file");
  c_check->add_option("--file", file)->required();
  c_check->add_option("--basis", basis, "override the header's basis");
  auto* c_comp = app.add_subcommand("compose", "linear-sum composition of two proofs");
  c_comp->add_option("--p1", p1, "proof of phi")->required();
  c_comp->add_option("--p2", p2, "proof of phi -> psi")->required();
  c_comp->add_option("--basis", basis);
  c_comp->add_option("--out", out);
  auto* c_is = app.add_subcommand("build-is", "build IS_D(beta)");
  c_is->add_option("--beta", beta)->required();
  c_is->add_option("--apparatus", apparatus);
  c_is->add_flag("--mult-extended", mult);
  c_is->add_option("--out", out);
  auto* c_cls = app.add_subcommand("classify", "Type-NS/S/A/M classification");
  c_cls->add_option("--basis", basis)->required();
  auto* c_probe = app.add_subcommand("probe", "Level-1 consistency probe");
  c_probe->add_option("--basis", basis)->required();
  c_probe->add_option("--apparatus", apparatus);
  c_probe->add_option("--probe-budget", probe_budget, "total node budget for the probe");
  auto* c_bench = app.add_subcommand("bench", "proof-size benchmark");
  c_bench->add_option("--families", families, "e.g. DoublingChain:10,MPChain:5,LEMBatch:50")->required();
  c_bench->add_option("--apparatuses", apps);
  c_bench->add_option("--out", out);
  c_bench->add_option("--proof-dir", proof_dir);
  auto* c_ref = app.add_subcommand("refute", "ground resolution refutation");
  c_ref->add_option("--cnf", cnf);
  c_ref->add_option("--sentence", sentence, "quantifier-free sentence to clausify");
  c_ref->add_option("--apparatus", res_apparatus);
  c_ref->add_option("--out", out);
  auto* c_rchk = app.add_subcommand("rescheck", "check a .resproof file");
  c_rchk->add_option("--cnf", cnf);
  c_rchk->add_option("--sentence", sentence);
  c_rchk->add_option("--proof", proof)->required();
  c_rchk->add_option("--apparatus", res_apparatus);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!g.config_path.empty()) g.cfg.load_file(g.config_path);
    g.cfg.load_env();
    if (g.budget) g.cfg.max_nodes = *g.budget;
    if (g.seed) g.cfg.seed = *g.seed;
    std::cerr << "# config " << g.cfg.describe() << "\n";

    if (*c_parse) rc = run_parse(text);
    else if (*c_eval) rc = run_eval(text);
    else if (*c_codes) rc = run_codes(texts, file, decode_code);
    else if (*c_seq) rc = run_sequences(kind, n);
    else if (*c_num) rc = run_numeral(nstr);
    else if (*c_prove) rc = run_prove(text, basis, apparatus, lemmas, out);
    else if (*c_check) rc = run_checkproof(file, basis);
    else if (*c_comp) rc = run_compose(p1, p2, basis, out);
    else if (*c_is) rc = run_build_is(beta, apparatus, mult, out);
    else if (*c_cls) rc = run_classify(basis);
    else if (*c_probe) rc = run_probe(basis, apparatus, probe_budget);
    else if (*c_bench) rc = run_bench(families, apps, out, proof_dir);
    else if (*c_ref) rc = run_refute(cnf, sentence, res_apparatus, out);
    else if (*c_rchk) rc = run_rescheck(cnf, sentence, proof, res_apparatus);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ProofFormatError& e) {
    // A proof file that does not parse is an invalid proof, not a usage error.
    emit({{"valid", false}, {"diagnostic", e.what()}}, std::string("Invalid: ") + e.what());
    return kNegative;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return rc;
}
