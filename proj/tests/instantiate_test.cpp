#include <gtest/gtest.h>

#include "certkit/instantiate.hpp"
#include "certkit/syntax.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace certkit;

namespace {

std::vector<ABox> ex316(std::initializer_list<int> which) {
  std::vector<ABox> out;
  for (int i : which) out.push_back(fixture::abox("ex3_16/a" + std::to_string(i) + ".abox"));
  return out;
}

// Multiset equality up to isomorphism, matched greedily with the brute-force oracle.
bool iso_equal(std::vector<ABox> got, const std::vector<ABox>& want) {
  if (got.size() != want.size()) return false;
  for (const auto& w : want) {
    bool found = false;
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (oracle::brute_isomorphic(got[i], w, {})) {
        got.erase(got.begin() + static_cast<long>(i));
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::vector<ABox> test_boxes(const TestSuite& s) {
  std::vector<ABox> out;
  for (const auto& t : s.tests) out.push_back(t.abox);
  return out;
}

UCQ rename_ucq(const Renaming& mu, const UCQ& q) {
  UCQ out = q;
  for (auto& r : out.rules) r = rename(mu, r);
  return out;
}

// Some test pairs an ABox isomorphic to `abox` with `query` under the same renaming.
bool has_pair(const TestSuite& s, const ABox& abox, const UCQ& query) {
  for (const auto& t : s.tests) {
    auto mu = abox_isomorphic(t.abox, abox, {});
    if (mu && rename_ucq(*mu, t.query) == query) return true;
  }
  return false;
}

}  // namespace

TEST(Instantiation, SingleABox) {
  Rule r = fixture::query("ex3_14/query.q").rules[0];
  Rule body2 = parse_rules("takesCo(?x,?y), MathCo(?y) -> Q(?x).")[0];
  EXPECT_EQ(instantiation_abox(body2, {{"x", Term::constant("c")}, {"y", Term::constant("d")}}),
            fixture::abox("ex3_16/a1.abox"));
  EXPECT_EQ(instantiation_abox(body2, {{"x", Term::constant("c")}, {"y", Term::constant("c")}}),
            fixture::abox("ex3_16/a2.abox"));
  EXPECT_THROW(instantiation_abox(r, {{"x", Term::constant("c")}}), Error);
  EXPECT_TRUE(instantiation_abox(Rule{}, {}).empty());
}

TEST(FullInstantiation, RunningExample) {
  Rewriting rw = fixture::rewriting("ex3_26/rewriting.rules");
  auto tbox = fixture::rules("ex3_14/tbox.dl");
  UCQ q = fixture::query("ex3_14/query.q");
  TestSuite s = full_instantiation(rw, q, tbox);
  EXPECT_TRUE(iso_equal(s.unsat, ex316({6})));
  EXPECT_TRUE(iso_equal(test_boxes(s), ex316({1, 2, 3, 4, 5})));
  ASSERT_TRUE(s.simple_for);
  EXPECT_EQ(*s.simple_for, q);
  for (const auto& t : s.tests) EXPECT_EQ(t.query, q);
  EXPECT_TRUE(validate_suite(s, tbox).ok());
}

TEST(FullInstantiation, CandidateCount) {
  Rewriting rw = fixture::rewriting("ex3_26/rewriting.rules");
  UCQ q = fixture::query("ex3_14/query.q");
  auto [bottom, query] = full_instantiation_size(rw, q, {});
  // Two fresh individuals: 2 + (4 + 4 + 2).
  EXPECT_EQ(bottom, 2u);
  EXPECT_EQ(query, 10u);
  Rewriting no_bottom = rw;
  no_bottom.bottom.clear();
  FullOptions raw;
  raw.dedup = false;
  EXPECT_EQ(full_instantiation(no_bottom, q, {}, raw).tests.size(), 10u);
  EXPECT_EQ(full_instantiation(rw, q, {}, raw).unsat.size(), 2u);

  // A constant of the TBox joins the pool: 3^2 + 3^2 + 3.
  auto with_constant = parse_rules("A(?x) -> eq(?x,k).");
  EXPECT_EQ(full_instantiation_size(no_bottom, q, with_constant).second, 21u);
}

TEST(FullInstantiation, SmallCases) {
  Rewriting one;
  one.query = parse_query("#query Q/1.\nA(?x) -> Q(?x).");
  TestSuite s = full_instantiation(one, one.query, {});
  EXPECT_TRUE(s.unsat.empty());
  ASSERT_EQ(s.tests.size(), 1u);
  EXPECT_EQ(s.tests[0].abox, (ABox{atom("A", {"_f0"})}));

  TestSuite b = full_instantiation(fixture::rewriting("ex3_22/rewriting.rules"),
                                   fixture::query("ex3_22/query.q"),
                                   fixture::rules("ex3_22/tbox.dl"));
  ASSERT_EQ(b.tests.size(), 1u);
  EXPECT_EQ(b.tests[0].abox, (ABox{atom("B", {"_f0"})}));

  Rewriting with_data;
  with_data.data = parse_rules("A(?x) -> B(?x).");
  EXPECT_THROW(full_instantiation(with_data, one.query, {}), Error);
  EXPECT_EQ(full_instantiation(Rewriting{}, one.query, {}).size(), 0u);
  EXPECT_THROW(full_instantiation(one, parse_query("#query P/1.\nA(?x) -> P(?x)."), {}), Error);
}

TEST(FullInstantiation, FiltersUnsatisfiableCandidates) {
  Rewriting rw;
  rw.bottom = parse_rules("A(?x), B(?x) -> false.");
  rw.query = parse_query("#query Q/1.\nA(?x), B(?y) -> Q(?x).");
  FullOptions raw;
  raw.dedup = false;
  TestSuite s = full_instantiation(rw, rw.query, {}, raw);
  // Four candidates; the two with x = y are unsatisfiable.
  EXPECT_EQ(s.tests.size(), 2u);
}

TEST(InjectiveInstantiation, RunningExample) {
  Rewriting rw = fixture::rewriting("ex3_29/rewriting.rules");
  UCQ q = fixture::query("ex3_14/query.q");
  TestSuite s = injective_instantiation_ucq(rw, q);
  for (const auto& t : s.tests) EXPECT_EQ(t.query, q);
  EXPECT_TRUE(iso_equal(s.unsat, ex316({6})));
  EXPECT_TRUE(iso_equal(test_boxes(s), ex316({1, 3, 5})));
  EXPECT_LE(s.size(), rw.bottom.size() + rw.query.rules.size());
  EXPECT_TRUE(validate_suite(s, fixture::rules("ex3_14/tbox.dl")).ok());

  // Each variable of the rewriting gets its own individual.
  std::set<std::string> seen;
  std::size_t total = 0;
  for (const auto& a : s.unsat) {
    for (const auto& c : a.constants()) seen.insert(c), ++total;
  }
  for (const auto& t : s.tests) {
    for (const auto& c : t.abox.constants()) seen.insert(c), ++total;
  }
  EXPECT_EQ(seen.size(), total);

  Rewriting single;
  single.query = parse_query("#query Q/1.\nMathSt(?x) -> Q(?x).");
  EXPECT_EQ(injective_instantiation_ucq(single, single.query).tests.at(0).abox,
            (ABox{atom("MathSt", {"_f0"})}));
  EXPECT_EQ(injective_instantiation_ucq(Rewriting{}, UCQ{}).size(), 0u);
}

TEST(InjectiveInstantiation, DatalogRewriting) {
  Rewriting rw = fixture::rewriting("ex3_42/rewriting.rules");
  TestSuite s = injective_instantiation_datalog(rw, fixture::query("ex3_42/query.q"));
  EXPECT_FALSE(s.simple_for);
  EXPECT_TRUE(iso_equal(s.unsat, {parse_abox("A(c). D(c).")}));
  ASSERT_EQ(s.tests.size(), 4u);
  auto prime = [](const std::string& body) {
    return parse_query("#query Qprime/0.\n" + body + " -> Qprime.", ParseOptions{true});
  };
  EXPECT_TRUE(has_pair(s, parse_abox("A(c)."), rw.query));
  EXPECT_TRUE(has_pair(s, parse_abox("R(c,d). A(d)."), prime("B(c)")));
  EXPECT_TRUE(has_pair(s, parse_abox("R(c,d). C(d)."), prime("A(c)")));
  EXPECT_TRUE(has_pair(s, parse_abox("B(c)."), prime("C(c)")));
  EXPECT_TRUE(validate_suite(s, fixture::rules("ex3_42/tbox.rules")).ok());
}

TEST(InjectiveInstantiation, ExistentialAndDisjunctiveHeads) {
  Rewriting rw;
  rw.data = parse_rules("C(?x) -> exists ?y : R(?x,?y), D(?y).\nA(?x) -> B(?x) | E(?x).");
  TestSuite s = injective_instantiation_datalog(rw, UCQ{});
  ASSERT_EQ(s.tests.size(), 2u);
  EXPECT_EQ(s.tests[0].abox, (ABox{atom("C", {"_f0"})}));
  UCQ y = s.tests[0].query;
  EXPECT_EQ(y.predicate, "Qprime");
  EXPECT_EQ(y.arity, 0u);
  ASSERT_EQ(y.rules.size(), 1u);
  EXPECT_EQ(y.rules[0].body, (std::vector<Atom>{atom("R", {"_f0", "?y"}), atom("D", {"?y"})}));
  EXPECT_EQ(s.tests[1].query.rules.size(), 2u);
  EXPECT_FALSE(y.is_ground());
}

TEST(InjectiveInstantiation, EmptyDataMatchesTheUcqVariant) {
  Rewriting rw = fixture::rewriting("ex3_29/rewriting.rules");
  UCQ q = fixture::query("ex3_14/query.q");
  TestSuite a = injective_instantiation_ucq(rw, q);
  TestSuite b = injective_instantiation_datalog(rw, q);
  EXPECT_EQ(a.unsat, b.unsat);
  ASSERT_EQ(a.tests.size(), b.tests.size());
  for (std::size_t i = 0; i < a.tests.size(); ++i) {
    EXPECT_EQ(a.tests[i].abox, b.tests[i].abox);
    EXPECT_EQ(a.tests[i].query, b.tests[i].query);
  }
}

TEST(InjectiveInstantiation, InvariantUnderVariableRenaming) {
  Rewriting rw = fixture::rewriting("ex3_29/rewriting.rules");
  Rewriting renamed = rw;
  Substitution s{{"x", Term::var("p")}, {"y", Term::var("q")}};
  for (auto& r : renamed.query.rules) r = substitute(s, r);
  for (auto& r : renamed.bottom) r = substitute(s, r);
  UCQ q = fixture::query("ex3_14/query.q");
  TestSuite a = injective_instantiation_ucq(rw, q);
  TestSuite b = injective_instantiation_ucq(renamed, q);
  EXPECT_TRUE(iso_equal(a.unsat, b.unsat));
  EXPECT_TRUE(iso_equal(test_boxes(a), test_boxes(b)));
}

TEST(GroundInstantiation, Examples) {
  Rewriting rw;
  rw.data = parse_rules("R(?x,?y), A(?y) -> A(?x).");
  TestSuite s = ground_instantiation(rw);
  ASSERT_EQ(s.tests.size(), 1u);
  auto want = parse_query("#query Qprime/0.\nA(c) -> Qprime.", ParseOptions{true});
  EXPECT_TRUE(has_pair(s, parse_abox("R(c,d). A(d)."), want));
  EXPECT_TRUE(s.tests[0].query.is_ground());

  Rewriting bottom;
  bottom.bottom = parse_rules("A(?x), D(?x) -> false.");
  EXPECT_TRUE(iso_equal(ground_instantiation(bottom).unsat, {parse_abox("A(c). D(c).")}));

  EXPECT_EQ(ground_instantiation(Rewriting{}).size(), 0u);

  Rewriting existential;
  existential.data = parse_rules("C(?x) -> exists ?y : R(?x,?y).");
  EXPECT_THROW(ground_instantiation(existential), Error);
  EXPECT_THROW(ground_instantiation(fixture::rewriting("ex3_29/rewriting.rules")), Error);
}

TEST(Validation, Examples) {
  auto tbox = fixture::rules("ex3_14/tbox.dl");
  TestSuite s = read_suite(fixture::path("ex3_16/suite"));
  ValidationReport ok = validate_suite(s, tbox);
  EXPECT_TRUE(ok.ok());
  EXPECT_EQ(ok.entries.size(), 6u);
  EXPECT_EQ(ok.entries[0].id, "unsat_001");

  TestSuite moved = s;
  moved.tests.push_back(QueryTest{moved.unsat[0], moved.tests[0].query});
  moved.unsat.clear();
  ValidationReport bad = validate_suite(moved, tbox);
  EXPECT_FALSE(bad.ok());
  EXPECT_FALSE(bad.entries.back().valid);
  EXPECT_EQ(bad.entries.back().unsat, Tri::True);

  TestSuite endless;
  endless.tests.push_back(QueryTest{ABox{atom("A", {"a"})}, s.tests[0].query});
  ValidationReport open =
      validate_suite(endless, parse_rules("A(?x) -> exists ?y : R(?x,?y), A(?y)."));
  EXPECT_TRUE(open.inconclusive());
  EXPECT_FALSE(open.ok());

  // The same report with a worker pool.
  ValidationReport pooled = validate_suite(s, tbox, {}, 4);
  ASSERT_EQ(pooled.entries.size(), ok.entries.size());
  for (std::size_t i = 0; i < ok.entries.size(); ++i) {
    EXPECT_EQ(pooled.entries[i].id, ok.entries[i].id);
    EXPECT_EQ(pooled.entries[i].unsat, ok.entries[i].unsat);
  }
}
