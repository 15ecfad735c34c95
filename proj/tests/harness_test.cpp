#include <gtest/gtest.h>

#include "certkit/harness.hpp"
#include "certkit/instantiate.hpp"
#include "certkit/syntax.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace certkit;

namespace {

struct Ex314 {
  std::vector<Rule> tbox = fixture::rules("ex3_14/tbox.rules");
  UCQ q = fixture::query("ex3_14/query.q");
  TestSuite full = read_suite(fixture::path("ex3_16/suite"));
  TestSuite injective =
      injective_instantiation_ucq(fixture::rewriting("ex3_26/rewriting.rules"), q);
};

std::vector<Outcome> outcomes(const SuiteReport& r) {
  std::vector<Outcome> out;
  for (const auto& t : r.tests) out.push_back(t.outcome);
  return out;
}

const TestOutcome& by_id(const SuiteReport& r, const std::string& id) {
  for (const auto& t : r.tests) {
    if (t.id == id) return t;
  }
  throw std::runtime_error("no test " + id);
}

// Index of the test whose ABox is isomorphic to the given one.
std::string id_of(const TestSuite& s, const ABox& a) {
  auto order = suite_entries(s);
  for (const auto& e : order) {
    const ABox& b = e.unsat ? s.unsat[e.index] : s.tests[e.index].abox;
    if (oracle::brute_isomorphic(a, b, {})) return e.id;
  }
  return "";
}

}  // namespace

TEST(RunSuite, RdfAndRdfsFailEverything) {
  Ex314 ex;
  for (const char* name : {"rdf", "rdfs"}) {
    auto rep = run_suite(*make_builtin(name), ex.tbox, ex.full);
    ASSERT_EQ(rep.tests.size(), 6u);
    for (const auto& t : rep.tests) EXPECT_EQ(t.outcome, Outcome::Fail) << name << " " << t.id;
    EXPECT_EQ(rep.verdict, Verdict::NotComplete);
    ASSERT_TRUE(rep.witness.has_value());
    // The first failure in suite order is the unsatisfiable ABox.
    EXPECT_EQ(rep.witness->id, "unsat_001");
    EXPECT_FALSE(rep.witness->missing.has_value());
  }
}

TEST(RunSuite, RlFailsOnlyTheExistentialTest) {
  Ex314 ex;
  auto rep = run_suite(*make_builtin("rl"), ex.tbox, ex.full);
  std::string a5 = id_of(ex.full, fixture::abox("ex3_16/a5.abox"));
  ASSERT_FALSE(a5.empty());
  for (const auto& t : rep.tests) {
    EXPECT_EQ(t.outcome, t.id == a5 ? Outcome::Fail : Outcome::Pass) << t.id;
  }
  EXPECT_EQ(rep.verdict, Verdict::NotComplete);
  ASSERT_TRUE(rep.witness.has_value());
  EXPECT_EQ(rep.witness->id, a5);
  EXPECT_EQ(*rep.witness->missing, Tuple{"c"});
  // Independent re-check of the witness.
  EXPECT_TRUE(certain_answers(ex.q, ex.tbox, rep.witness->abox).count({"c"}));
  EXPECT_FALSE(make_builtin("rl")->answer(ex.q, ex.tbox, rep.witness->abox).answers->count({"c"}));
}

TEST(RunSuite, ClassifyOutcomeOnTheExistentialTest) {
  Ex314 ex;
  auto rep = run_suite(*make_builtin("classify"), ex.tbox, ex.full);
  std::string a5 = id_of(ex.full, fixture::abox("ex3_16/a5.abox"));
  for (const auto& t : rep.tests) {
    EXPECT_EQ(t.outcome, t.id == a5 ? Outcome::Fail : Outcome::Pass) << t.id;
  }
  EXPECT_EQ(rep.verdict, Verdict::NotComplete);
}

TEST(RunSuite, InjectiveSuiteVerdicts) {
  Ex314 ex;
  EXPECT_EQ(run_suite(*make_builtin("rl"), ex.tbox, ex.injective).verdict, Verdict::NotComplete);
  auto complete = make_program(ex.tbox);
  auto rep = run_suite(*complete, ex.tbox, ex.injective, RunOptions{{}, 3, nullptr});
  EXPECT_EQ(rep.verdict, Verdict::GuaranteedComplete);
  EXPECT_FALSE(rep.witness.has_value());
  EXPECT_EQ(exit_code(rep.verdict), 0);
  // trivial misses everything, including the unsatisfiable ABox
  auto triv = run_suite(*make_builtin("trivial"), ex.tbox, ex.injective);
  for (auto o : outcomes(triv)) EXPECT_EQ(o, Outcome::Fail);
}

TEST(RunSuite, EmptySuitePassesVacuously) {
  auto rep = run_suite(*make_builtin("trivial"), {}, TestSuite{});
  EXPECT_EQ(rep.verdict, Verdict::GuaranteedComplete);
  EXPECT_EQ(exit_code(rep.verdict), 0);
}

TEST(RunSuite, AuxiliaryFailureWithdrawsTheGuaranteeOnly) {
  auto rw = fixture::rewriting("ex3_40/rewriting.rules");
  auto tbox = fixture::rules("ex3_40/tbox.dl");
  TestSuite s = injective_instantiation_datalog(rw, fixture::query("ex3_40/query.q"));
  ASSERT_EQ(s.tests.size(), 2u);
  auto f1 = make_program(fixture::rules("ex3_40/f1.rules"));
  auto f2 = make_program(fixture::rules("ex3_40/f2.rules"));
  EXPECT_EQ(run_suite(*f1, tbox, s).verdict, Verdict::GuaranteedComplete);
  auto rep2 = run_suite(*f2, tbox, s);
  EXPECT_EQ(rep2.verdict, Verdict::NotGuaranteed);
  EXPECT_EQ(exit_code(rep2.verdict), 2);
  EXPECT_FALSE(rep2.witness.has_value());
  EXPECT_EQ(rep2.tests[0].outcome, Outcome::Pass);
  EXPECT_EQ(rep2.tests[1].kind, TestKind::Auxiliary);
  EXPECT_EQ(rep2.tests[1].outcome, Outcome::Fail);
}

TEST(RunSuite, FullTboxSuiteNotPassedByModuleReasoner) {
  // With both recursive rules the suite has a C-test that the first program fails.
  auto tbox = fixture::rules("ex3_40/tbox.dl");
  Rewriting rw;
  rw.data = tbox;
  rw.query = fixture::query("ex3_40/query.q");
  TestSuite s = injective_instantiation_datalog(rw, fixture::query("ex3_40/query.q"));
  ASSERT_EQ(s.tests.size(), 3u);
  auto rep = run_suite(*make_program(fixture::rules("ex3_40/f1.rules")), tbox, s);
  EXPECT_EQ(rep.verdict, Verdict::NotGuaranteed);
}

TEST(RunSuite, InconclusiveNeverMasksACounterexample) {
  Ex314 ex;
  ChaseBudget tiny{0, 1, 1};
  // A reasoner that runs out of budget on every ABox with an existential step.
  auto flaky = make_program(ex.tbox, "flaky", tiny);
  auto rep = run_suite(*flaky, ex.tbox, ex.full);
  EXPECT_EQ(rep.verdict, Verdict::Inconclusive);
  EXPECT_EQ(exit_code(rep.verdict), 3);
  std::string a5 = id_of(ex.full, fixture::abox("ex3_16/a5.abox"));
  EXPECT_EQ(by_id(rep, a5).outcome, Outcome::Inconclusive);

  TestSuite both = ex.full;
  both.tests.push_back(QueryTest{ABox{atom("St", {"c"}), atom("takesCo", {"c", "d"}),
                                      atom("CalcCo", {"d"})},
                                 ex.q});
  auto partial = make_program(parse_rules("MathSt(?x) -> exists ?y : takesCo(?x,?y), MathCo(?y)."),
                              "partial", tiny);
  auto rep2 = run_suite(*partial, ex.tbox, both);
  EXPECT_EQ(rep2.verdict, Verdict::NotComplete);
}

TEST(RunSuite, RewritingBasis) {
  Ex314 ex;
  Rewriting rw = fixture::rewriting("ex3_26/rewriting.rules");
  RunOptions opts;
  opts.rewriting = &rw;
  auto a = run_suite(*make_builtin("rl"), ex.tbox, ex.full, opts);
  auto b = run_suite(*make_builtin("rl"), ex.tbox, ex.full);
  EXPECT_EQ(a.basis, "rewriting");
  EXPECT_EQ(b.basis, "tbox");
  EXPECT_EQ(outcomes(a), outcomes(b));
  EXPECT_EQ(a.verdict, b.verdict);
}

TEST(RunSuite, ParallelRunIsDeterministic) {
  Ex314 ex;
  auto one = run_suite(*make_builtin("rl"), ex.tbox, ex.full, RunOptions{{}, 1, nullptr});
  auto many = run_suite(*make_builtin("rl"), ex.tbox, ex.full, RunOptions{{}, 8, nullptr});
  EXPECT_EQ(report_tsv(one), report_tsv(many));
  EXPECT_EQ(format_report(one), format_report(many));
}

TEST(RunSuite, TsvLayout) {
  Ex314 ex;
  auto rep = run_suite(*make_builtin("rl"), ex.tbox, ex.full);
  std::string tsv = report_tsv(rep);
  EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "test-id\tkind\toutcome\twitness-tuple\tnotes");
  std::string a5 = id_of(ex.full, fixture::abox("ex3_16/a5.abox"));
  EXPECT_NE(tsv.find(a5 + "\tquery\tfail\t(c)\t"), std::string::npos);
  EXPECT_NE(tsv.find("unsat_001\tunsat\tpass\t\t"), std::string::npos);
  auto rdf = report_tsv(run_suite(*make_builtin("rdf"), ex.tbox, ex.full));
  EXPECT_NE(rdf.find("unsat_001\tunsat\tfail\t*\t"), std::string::npos);
}

TEST(RunSuite, ExternalTimeoutIsRecordedPerTest) {
  Ex314 ex;
  ExternalOptions opts;
  opts.timeout_seconds = 0.2;
  auto slow = make_external("sleep 3; echo", opts);
  TestSuite one;
  one.unsat.push_back(fixture::abox("ex3_16/a6.abox"));
  auto rep = run_suite(*slow, ex.tbox, one);
  ASSERT_EQ(rep.tests.size(), 1u);
  EXPECT_EQ(rep.tests[0].outcome, Outcome::Inconclusive);
  EXPECT_EQ(rep.tests[0].note, "timeout");
  EXPECT_EQ(rep.verdict, Verdict::Inconclusive);
}

// A witness is never reported unless the chase confirms it.
TEST(RunSuite, WitnessesAreGenuine) {
  gen::Random rnd(21);
  Signature sig = gen::small_signature();
  gen::RuleShape shape;
  shape.allow_falsum = true;
  shape.allow_existential = true;
  std::size_t witnesses = 0;
  for (int trial = 0; trial < 80; ++trial) {
    auto t = gen::random_program(rnd, sig, 1 + rnd.below(3), shape);
    UCQ q = gen::random_query(rnd, sig, 1);
    TestSuite s;
    for (int i = 0; i < 4; ++i) s.tests.push_back(QueryTest{gen::random_abox(rnd, sig, 3, 4), q});
    for (const char* name : {"rdf", "rdfs", "rl", "trivial"}) {
      auto r = make_builtin(name);
      auto rep = run_suite(*r, t, s);
      if (!rep.witness) continue;
      ++witnesses;
      auto cert = try_certain_answers(q, t, rep.witness->abox);
      ASSERT_TRUE(cert.has_value());
      EXPECT_TRUE(cert->count(*rep.witness->missing));
      EXPECT_FALSE(r->answer(q, t, rep.witness->abox).answers->count(*rep.witness->missing));
    }
  }
  EXPECT_GT(witnesses, 30u);
}

// ---- ground suites ----

TEST(GroundVerdict, RewritingItselfPassesAndRdfsFails) {
  auto rw = fixture::rewriting("ex3_42/rewriting.rules");
  auto tbox = fixture::rules("ex3_42/tbox.rules");
  Rewriting ground{rw.data, rw.bottom, UCQ{}};
  TestSuite s = ground_instantiation(ground);
  std::vector<Rule> program = rw.data;
  program.insert(program.end(), rw.bottom.begin(), rw.bottom.end());
  auto pass = ground_verdict(*make_program(program), tbox, s);
  EXPECT_EQ(pass.verdict, Verdict::GuaranteedComplete);
  EXPECT_EQ(pass.summary, "complete for all ground UCQs w.r.t. T");

  auto rdfs = ground_verdict(*make_builtin("rdfs"), tbox, s);
  EXPECT_EQ(rdfs.verdict, Verdict::NotComplete);
  EXPECT_NE(rdfs.summary.find("for some ground UCQ"), std::string::npos);
  // The binary-body test is among the failures.
  bool binary_failed = false;
  auto order = suite_entries(s);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i].unsat) continue;
    const QueryTest& t = s.tests[order[i].index];
    if (t.abox.size() == 2 && rdfs.tests[i].outcome == Outcome::Fail) {
      const Atom& head = t.query.rules[0].body[0];
      binary_failed |= head.predicate == "B";
    }
  }
  EXPECT_TRUE(binary_failed);
}

TEST(GroundVerdict, EmptySuiteIsVacuous) {
  auto rep = ground_verdict(*make_builtin("trivial"), {}, ground_instantiation(Rewriting{}));
  EXPECT_EQ(rep.verdict, Verdict::GuaranteedComplete);
}

// ---- unfolding-based search ----

TEST(Search, FindsTheDepthTwoWitness) {
  auto rw = fixture::rewriting("ex3_40/rewriting.rules");
  auto tbox = fixture::rules("ex3_40/tbox.dl");
  UCQ q = fixture::query("ex3_40/query.q");
  auto f2 = make_program(fixture::rules("ex3_40/f2.rules"));
  SearchOptions opts;
  opts.max_depth = 1;
  auto shallow = incompleteness_search(*f2, rw.data, q, tbox, opts);
  EXPECT_FALSE(shallow.witness.has_value());
  EXPECT_EQ(shallow.checked, 2u);
  opts.max_depth = 2;
  auto deep = incompleteness_search(*f2, rw.data, q, tbox, opts);
  ASSERT_TRUE(deep.witness.has_value());
  EXPECT_EQ(deep.witness->depth, 2u);
  ABox want{atom("B", {"c"}), atom("R", {"c", "d"}), atom("R", {"d", "e"}), atom("A", {"e"})};
  auto mu = abox_isomorphic(deep.witness->abox, want, {});
  ASSERT_TRUE(mu.has_value());
  EXPECT_EQ(rename(*mu, deep.witness->missing), Tuple{"c"});
}

TEST(Search, CompleteReasonerHasNoWitness) {
  auto rw = fixture::rewriting("ex3_40/rewriting.rules");
  auto tbox = fixture::rules("ex3_40/tbox.dl");
  UCQ q = fixture::query("ex3_40/query.q");
  SearchOptions opts;
  opts.max_depth = 4;
  for (auto r : {make_program(fixture::rules("ex3_40/f1.rules")), make_program(tbox)}) {
    auto res = incompleteness_search(*r, rw.data, q, tbox, opts);
    EXPECT_FALSE(res.witness.has_value());
    EXPECT_EQ(res.checked, 5u);
    EXPECT_EQ(res.depth_reached, 4u);
  }
}

TEST(Search, SkipsAboxesUnsatisfiableWithTheTbox) {
  auto tbox = parse_rules("R(?x,?y), A(?y) -> A(?x).\nR(?x,?y), D(?y) -> false.");
  UCQ q = parse_query("#query Q/1.\nA(?x) -> Q(?x).");
  // Rules that introduce D make every deeper instantiation unsatisfiable.
  auto data = parse_rules("R(?x,?y), A(?y) -> A(?x).\nR(?x,?y), D(?y), E(?x) -> A(?x).");
  auto rep = incompleteness_search(*make_builtin("trivial"), data, q, tbox);
  ASSERT_TRUE(rep.witness.has_value());
  EXPECT_FALSE(is_unsatisfiable(tbox, rep.witness->abox));
  for (int depth = 0; depth <= 3; ++depth) {
    SearchOptions o;
    o.max_depth = static_cast<std::size_t>(depth);
    auto r = incompleteness_search(*make_builtin("trivial"), data, q, tbox, o);
    if (r.witness) EXPECT_FALSE(is_unsatisfiable(tbox, r.witness->abox));
  }
}

TEST(Search, RejectsNonDatalogRules) {
  auto data = parse_rules("A(?x) -> exists ?y : R(?x,?y).");
  UCQ q = parse_query("#query Q/1.\nA(?x) -> Q(?x).");
  EXPECT_THROW(incompleteness_search(*make_builtin("trivial"), data, q, {}), Error);
}
