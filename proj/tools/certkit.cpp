// certkit command-line front end.
#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "certkit/chase.hpp"
#include "certkit/compare.hpp"
#include "certkit/harness.hpp"
#include "certkit/instantiate.hpp"
#include "certkit/minimize.hpp"
#include "certkit/reasoners.hpp"
#include "certkit/syntax.hpp"
#include "certkit/unfold.hpp"

namespace fs = std::filesystem;
using namespace certkit;

namespace {

constexpr int kUsage = 64;

struct Globals {
  ChaseBudget budget;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "text";
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  double timeout = 30;
  std::size_t max_parallel = 1;
  std::string config = "certkit.toml";
};

Globals g;

// Prints to stdout and, with --out, also writes DIR/<file>.
void emit(const std::string& file, const std::string& text) {
  std::cout << text;
  if (!g.out.empty()) {
    fs::create_directories(g.out);
    write_file(fs::path(g.out) / file, text);
  }
}

ExternalOptions external() { return {g.timeout, g.max_parallel}; }

std::vector<Rule> tbox_rules(const std::string& path) {
  return path.empty() ? std::vector<Rule>{} : untag(load_tbox(path));
}

UCQ load_query(const std::string& path) { return parse_query(read_file(path)); }
Rewriting load_rewriting(const std::string& path) {
  return parse_rewriting(read_file(path), {.allow_reserved = true});
}

std::string tuple_lines(const AnswerSet& s, std::size_t arity) {
  if (arity == 0) return s.empty() ? "f\n" : "t\n";
  std::string out;
  for (const auto& t : s) out += serialize(t) + "\n";
  return out;
}

// Values in the config file replace values given on the command line.
void apply_config(CLI::App& app) {
  if (!fs::exists(g.config)) {
    if (app.get_option("--config")->count() > 0) {
      throw CLI::ValidationError("--config", "cannot read " + g.config);
    }
    return;
  }
  std::ifstream in(g.config);
  for (const auto& item : CLI::ConfigTOML().from_config(in)) {
    if (!item.parents.empty()) {
      throw CLI::ValidationError(g.config, "unexpected section " + item.fullname());
    }
    CLI::Option* opt = app.get_option_no_throw("--" + item.name);
    if (opt == nullptr || item.name == "config") {
      throw CLI::ValidationError(g.config, "unknown key " + item.name);
    }
    opt->clear();
    for (const auto& v : item.inputs) opt->add_result(v);
    opt->run_callback();
  }
}

int cmd_translate(const std::string& tbox) {
  auto axioms = parse_dl(read_file(tbox));
  emit("tbox.rules", serialize_rules(untag(translate_dl(axioms))));
  return 0;
}

int cmd_cert(const std::string& program, const std::string& abox_path,
             const std::string& query_path) {
  UCQ q = load_query(query_path);
  std::vector<Rule> rules;
  if (fs::path(program).extension() == ".dl") {
    rules = tbox_rules(program);
  } else {
    // Rewriting sections are accepted; query rules for Q then stand in for Q.
    Rewriting rw = parse_rewriting(read_file(program));
    rules = rw.data;
    rules.insert(rules.end(), rw.bottom.begin(), rw.bottom.end());
    if (!rw.query.rules.empty()) {
      if (rw.query.predicate != q.predicate || rw.query.arity != q.arity) {
        throw Error(program + ": query rules are not for " + q.predicate);
      }
      q = rw.query;
    }
  }
  std::vector<Rule> theory = with_equality(rules, signature(q.rules));
  ABox abox = parse_abox(read_file(abox_path));
  Tri unsat = unsat_tri(theory, abox, g.budget);
  if (unsat == Tri::Unknown) {
    std::cerr << "chase budget exceeded\n";
    return 3;
  }
  if (unsat == Tri::True) {
    emit("cert.txt", "unsatisfiable\n");
    return 0;
  }
  auto answers = try_certain_answers(q, theory, abox, g.budget);
  if (!answers) {
    std::cerr << "chase budget exceeded\n";
    return 3;
  }
  emit("cert.txt", tuple_lines(*answers, q.arity));
  return 0;
}

int cmd_verify(const std::string& rw_path, const std::string& tbox) {
  auto rep = verify_rewriting(load_rewriting(rw_path), tbox_rules(tbox), g.budget);
  std::ostringstream out;
  for (const auto& e : rep.structural_errors) out << "error\t" << e << "\n";
  bool unknown = false, refuted = false;
  for (const auto& c : rep.checks) {
    out << c.section << "\t" << c.index << "\t" << to_string(c.entailed) << "\t"
        << serialize(c.rule) << "\n";
    unknown |= c.entailed == Tri::Unknown;
    refuted |= c.entailed == Tri::False;
  }
  out << "# " << VerificationReport::kScope << "\n";
  emit("verify.tsv", out.str());
  if (!rep.structural_errors.empty() || refuted) return 1;
  return unknown ? 3 : 0;
}

int cmd_instantiate(const std::string& mode, const std::string& rw_path,
                    const std::string& query_path, const std::string& tbox) {
  if (g.out.empty()) throw CLI::ValidationError("--out", "instantiate needs an output directory");
  Rewriting rw = load_rewriting(rw_path);
  TestSuite suite;
  if (mode == "ground") {
    suite = ground_instantiation(rw, g.budget);
  } else {
    if (query_path.empty()) throw CLI::ValidationError("--query", "required for mode " + mode);
    UCQ q = load_query(query_path);
    if (mode == "full") {
      suite = full_instantiation(rw, q, tbox_rules(tbox), {g.budget, true, g.jobs});
    } else if (mode == "injective") {
      suite = injective_instantiation_ucq(rw, q, g.budget);
    } else {
      suite = injective_instantiation_datalog(rw, q, g.budget);
    }
  }
  write_suite(g.out, suite);
  std::cout << suite.unsat.size() << " unsatisfiability tests, " << suite.tests.size()
            << " query tests written to " << g.out << "\n";
  return 0;
}

int cmd_minimize(const std::string& rw_path) {
  std::cout << serialize(minimize_ucq(load_rewriting(rw_path)));
  return 0;
}

int cmd_unfold(const std::string& tbox, const std::string& query_path, std::size_t bound,
               bool subset_closed) {
  UCQ q = load_query(query_path);
  if (subset_closed) {
    emit("rewriting.rules", serialize(subset_closed_rewriting(load_tbox(tbox), q, bound)));
    return 0;
  }
  // Falsum rules never unfold into the query.
  std::vector<Rule> data;
  for (auto& r : tbox_rules(tbox)) {
    if (!r.is_falsum()) data.push_back(std::move(r));
  }
  auto res = exhaustive_unfold(data, q, bound);
  std::string text = serialize_rules(res.rules);
  if (!res.closed) text += "# not closed within " + std::to_string(bound) + " rules\n";
  emit("unfolded.rules", text);
  return res.closed ? 0 : 3;
}

int cmd_run(const std::string& suite_dir, const std::string& spec, const std::string& tbox,
            const std::string& rw_path, bool ground) {
  auto r = make_reasoner(spec, g.budget, external());
  // An empty directory is the empty suite.
  TestSuite suite = fs::is_empty(suite_dir) ? TestSuite{} : read_suite(suite_dir);
  std::optional<Rewriting> rw;
  if (!rw_path.empty()) rw = load_rewriting(rw_path);
  RunOptions opts{g.budget, g.jobs, rw ? &*rw : nullptr};
  std::vector<Rule> t = tbox_rules(tbox);
  SuiteReport rep = ground ? ground_verdict(*r, t, suite, opts) : run_suite(*r, t, suite, opts);
  std::string tsv = report_tsv(rep);
  std::cout << (g.format == "tsv" ? tsv : format_report(rep));
  if (!g.out.empty()) {
    fs::create_directories(g.out);
    write_file(fs::path(g.out) / "report.tsv", tsv);
  }
  return exit_code(rep.verdict);
}

int cmd_search(const std::string& spec, const std::string& rw_path, const std::string& query_path,
               const std::string& tbox, std::size_t depth) {
  auto r = make_reasoner(spec, g.budget, external());
  SearchOptions opts;
  opts.max_depth = depth;
  opts.budget = g.budget;
  auto res = incompleteness_search(*r, load_rewriting(rw_path).data, load_query(query_path),
                                   tbox_rules(tbox), opts);
  std::ostringstream out;
  out << "checked " << res.checked << " unfolded queries up to depth " << res.depth_reached
      << ", " << res.inconclusive << " skipped\n";
  if (res.witness) {
    const auto& w = *res.witness;
    out << "counterexample at depth " << w.depth << ": " << inline_abox(w.abox) << " misses ("
        << serialize(w.missing) << ")\n";
    out << "unfolded query: " << serialize(w.cq) << "\n";
  } else {
    out << "no counterexample within depth " << depth << "\n";
  }
  emit("search.txt", out.str());
  return res.witness ? 1 : 2;
}

int cmd_compare(const std::vector<std::string>& specs, const std::string& tbox,
                const std::string& query_path, const std::string& abox_dir, std::size_t bound) {
  UCQ q = load_query(query_path);
  auto tagged = load_tbox(tbox);
  std::vector<ABox> set;
  if (abox_dir.empty()) {
    set = representative_set(subset_closed_rewriting(tagged, q, bound), q, g.budget);
  } else {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(abox_dir)) {
      if (e.path().extension() == ".abox") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) set.push_back(parse_abox(read_file(f), {.allow_reserved = true}));
  }
  auto h1 = make_reasoner(specs[0], g.budget, external());
  auto h2 = make_reasoner(specs[1], g.budget, external());
  CompareReport rep = compare_on(set, q, untag(tagged), *h1, *h2, {g.budget, g.jobs});
  std::string tsv = compare_tsv(rep);
  std::cout << (g.format == "tsv" ? tsv : format_compare(rep));
  if (!g.out.empty()) {
    fs::create_directories(g.out);
    write_file(fs::path(g.out) / "compare.tsv", tsv);
  }
  if (rep.leq == Tri::Unknown) return 3;
  return rep.leq == Tri::True ? 0 : 1;
}

int cmd_spotcheck(const std::string& spec, const std::string& tbox, const std::string& query_path,
                  std::size_t trials) {
  auto r = make_reasoner(spec, g.budget, external());
  SpotcheckOptions opts;
  opts.trials = trials;
  opts.seed = g.seed;
  opts.budget = g.budget;
  auto rep = property_spotcheck(*r, load_query(query_path), tbox_rules(tbox), opts);
  std::ostringstream out;
  out << rep.trials << " trials, " << rep.inconclusive << " inconclusive, seed " << g.seed << "\n";
  for (Property p : opts.properties) {
    out << to_string(p) << "\t" << (rep.violated(p) ? "violated" : "no violation found") << "\n";
  }
  for (const auto& v : rep.violations) {
    out << "# " << to_string(v.property) << ": " << inline_abox(v.abox);
    if (!v.other.empty()) out << " vs " << inline_abox(v.other);
    out << "; " << v.detail << "\n";
  }
  emit("spotcheck.txt", out.str());
  return rep.violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Completeness testing for ontology query reasoners"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--budget-fresh", g.budget.max_fresh, "Fresh individuals per chase");
  app.add_option("--budget-branches", g.budget.max_branches, "Disjunctive branches per chase");
  app.add_option("--budget-rounds", g.budget.max_rounds, "Rounds per chase");
  app.add_option("--seed", g.seed, "Seed for randomized commands")->capture_default_str();
  app.add_option("--out", g.out, "Directory for output files");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "tsv"}));
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--timeout", g.timeout, "Seconds per external reasoner call");
  app.add_option("--max-parallel", g.max_parallel, "Concurrent external reasoner calls")
      ->check(CLI::PositiveNumber);
  app.add_option("--config", g.config, "key=value file overriding the flags above");

  std::string tbox, query, rewriting, abox, suite, reasoner, mode, aboxes;
  std::vector<std::string> reasoners;
  std::size_t bound = 1000, depth = 3, trials = 1000;
  bool subset_closed = false, ground = false;

  auto* translate = app.add_subcommand("translate", "Translate a DL TBox into rules");
  translate->add_option("--tbox", tbox, "DL file")->required()->check(CLI::ExistingFile);

  auto* cert = app.add_subcommand("cert", "Certain answers by the reference chase");
  cert->add_option("--program", tbox, "TBox (.dl or .rules)")->required()->check(CLI::ExistingFile);
  cert->add_option("--abox", abox)->required()->check(CLI::ExistingFile);
  cert->add_option("--query", query)->required()->check(CLI::ExistingFile);

  auto* verify = app.add_subcommand("verify-rewriting", "Check that T entails the rewriting");
  verify->add_option("--rewriting", rewriting)->required()->check(CLI::ExistingFile);
  verify->add_option("--tbox", tbox)->required()->check(CLI::ExistingFile);

  auto* inst = app.add_subcommand("instantiate", "Build a test suite from a rewriting");
  inst->add_option("--mode", mode)->required()->check(
      CLI::IsMember({"full", "injective", "datalog", "ground"}));
  inst->add_option("--rewriting", rewriting)->required()->check(CLI::ExistingFile);
  inst->add_option("--query", query)->check(CLI::ExistingFile);
  inst->add_option("--tbox", tbox, "Supplies fixed individuals for full mode")
      ->check(CLI::ExistingFile);

  auto* minimize = app.add_subcommand("minimize", "Condense and drop subsumed rules");
  minimize->add_option("--rewriting", rewriting)->required()->check(CLI::ExistingFile);

  auto* unfold = app.add_subcommand("unfold", "Unfold datalog rules into the query");
  unfold->add_option("--tbox", tbox)->required()->check(CLI::ExistingFile);
  unfold->add_option("--query", query)->required()->check(CLI::ExistingFile);
  unfold->add_option("--bound", bound, "Maximum number of rules")->capture_default_str();
  unfold->add_flag("--subset-closed", subset_closed, "Union over all axiom subsets");

  auto* run = app.add_subcommand("run", "Run a suite against a reasoner");
  run->add_option("--suite", suite)->required()->check(CLI::ExistingDirectory);
  run->add_option("--reasoner", reasoner)->required();
  run->add_option("--tbox", tbox)->check(CLI::ExistingFile);
  run->add_option("--rewriting", rewriting, "Compute certain answers from this rewriting")
      ->check(CLI::ExistingFile);
  run->add_flag("--ground", ground, "Suite comes from ground instantiation");

  auto* search = app.add_subcommand("search", "Look for a counterexample by unfolding");
  search->add_option("--reasoner", reasoner)->required();
  search->add_option("--rewriting", rewriting, "Its data rules are unfolded")
      ->required()
      ->check(CLI::ExistingFile);
  search->add_option("--query", query)->required()->check(CLI::ExistingFile);
  search->add_option("--tbox", tbox)->required()->check(CLI::ExistingFile);
  search->add_option("--max-depth", depth)->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Compare two reasoners");
  compare->add_option("--reasoner", reasoners, "Given twice")->required()->expected(2);
  compare->add_option("--tbox", tbox)->required()->check(CLI::ExistingFile);
  compare->add_option("--query", query)->required()->check(CLI::ExistingFile);
  compare->add_option("--aboxes", aboxes, "Directory of .abox files; default: representative set")
      ->check(CLI::ExistingDirectory);
  compare->add_option("--bound", bound, "Unfolding bound per axiom subset")->capture_default_str();

  auto* spot = app.add_subcommand("spotcheck", "Random search for property violations");
  spot->add_option("--reasoner", reasoner)->required();
  spot->add_option("--tbox", tbox)->required()->check(CLI::ExistingFile);
  spot->add_option("--query", query)->required()->check(CLI::ExistingFile);
  spot->add_option("--trials", trials)->capture_default_str();

  try {
    app.parse(argc, argv);
    apply_config(app);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*translate) return cmd_translate(tbox);
    if (*cert) return cmd_cert(tbox, abox, query);
    if (*verify) return cmd_verify(rewriting, tbox);
    if (*inst) return cmd_instantiate(mode, rewriting, query, tbox);
    if (*minimize) return cmd_minimize(rewriting);
    if (*unfold) return cmd_unfold(tbox, query, bound, subset_closed);
    if (*run) return cmd_run(suite, reasoner, tbox, rewriting, ground);
    if (*search) return cmd_search(reasoner, rewriting, query, tbox, depth);
    if (*compare) return cmd_compare(reasoners, tbox, query, aboxes, bound);
    if (*spot) return cmd_spotcheck(reasoner, tbox, query, trials);
  } catch (const CLI::ParseError& e) {
    std::cerr << "certkit: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "certkit: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
