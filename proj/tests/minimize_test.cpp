#include <gtest/gtest.h>

#include "certkit/chase.hpp"
#include "certkit/minimize.hpp"
#include "certkit/syntax.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace certkit;

namespace {

Rule rule(const std::string& text) { return parse_rules(text).at(0); }

// Tries every map from the variables of r into the terms of r2.
bool brute_subsumes(const Rule& r, const Rule& r2) {
  std::vector<std::string> vars = variables(r);
  std::set<Term> terms;
  for (const auto& a : r2.body) terms.insert(a.args.begin(), a.args.end());
  for (const auto& d : r2.head) {
    for (const auto& a : d.atoms) terms.insert(a.args.begin(), a.args.end());
  }
  std::vector<Term> pool(terms.begin(), terms.end());
  if (pool.empty()) pool.push_back(Term::constant("#none"));
  std::set<Atom> target(r2.body.begin(), r2.body.end());
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Substitution s;
    for (std::size_t i = 0; i < vars.size(); ++i) s[vars[i]] = pool[idx[i]];
    Rule img = substitute(s, r);
    bool ok = img.head == r2.head;
    for (const auto& a : img.body) ok = ok && target.count(a);
    if (ok) return true;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == pool.size()) idx[k++] = 0;
    if (k == idx.size()) return false;
  }
}

}  // namespace

TEST(Subsumption, Examples) {
  Rule r16 = rule("MathSt(?x) -> Q(?x).");
  Rule r15 = rule("St(?x), MathSt(?x) -> Q(?x).");
  auto s = subsumes(r16, r15);
  ASSERT_TRUE(s);
  EXPECT_EQ(*s, (Substitution{{"x", Term::var("x")}}));
  EXPECT_FALSE(subsumes(r15, r16));

  Rule r14 = rule("takesCo(?x,?y), CalcCo(?y) -> Q(?x).");
  Rule r13 = rule("takesCo(?x,?x), CalcCo(?x), MathCo(?x) -> Q(?x).");
  s = subsumes(r14, r13);
  ASSERT_TRUE(s);
  EXPECT_EQ(*s, (Substitution{{"x", Term::var("x")}, {"y", Term::var("x")}}));

  auto self = subsumes(r13, r13);
  ASSERT_TRUE(self);
  EXPECT_EQ(*self, (Substitution{{"x", Term::var("x")}}));

  EXPECT_TRUE(subsumes(rule("A(?x) -> false."), rule("A(?y), B(?y) -> false.")));
  EXPECT_FALSE(subsumes(rule("A(?x) -> false."), rule("A(?x) -> Q(?x).")));
  EXPECT_FALSE(subsumes(rule("A(?x) -> Q(?x)."), rule("A(c) -> Q(d).")));
  EXPECT_THROW(subsumes(rule("A(?x) -> B(?x) | C(?x)."), r15), Error);
}

TEST(Subsumption, AgreesWithBruteForce) {
  gen::Random rnd(5);
  auto sig = gen::small_signature();
  int positives = 0;
  for (int i = 0; i < 600; ++i) {
    Rule r = gen::random_query(rnd, sig, 1).rules[0];
    Rule r2 = gen::random_query(rnd, sig, 1).rules[0];
    if (rnd.chance(0.5)) {
      // Specialize r so that subsumption is likely.
      r2 = r;
      r2.body.push_back(gen::random_query(rnd, sig, 1).rules[0].body[0]);
      if (rnd.chance(0.5)) r2 = substitute(Substitution{{"y", Term::var("x")}}, r2);
      r2.body = dedup_atoms(r2.body);
    }
    bool got = subsumes(r, r2).has_value();
    ASSERT_EQ(got, brute_subsumes(r, r2)) << serialize(r) << " / " << serialize(r2);
    positives += got;
  }
  EXPECT_GT(positives, 100);
}

TEST(Subsumption, IsSoundOnSmallABoxes) {
  gen::Random rnd(8);
  auto sig = gen::small_signature();
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    Rule r = gen::random_query(rnd, sig, 1).rules[0];
    Rule r2 = r;
    r2.body.push_back(gen::random_query(rnd, sig, 1).rules[0].body[0]);
    if (rnd.chance(0.5)) r2 = substitute(Substitution{{"z", Term::var("x")}}, r2);
    if (!subsumes(r, r2)) continue;
    for (int k = 0; k < 20; ++k) {
      ABox a = gen::random_abox(rnd, sig, 4, 8);
      AnswerSet small = oracle::brute_cq_answers({r2}, a, 1);
      AnswerSet big = oracle::brute_cq_answers({r}, a, 1);
      for (const auto& t : small) EXPECT_TRUE(big.count(t)) << serialize(r) << serialize(r2);
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(Condensation, Examples) {
  Rule r12 = rule("takesCo(?x,?y), takesCo(?x,?z), MathCo(?y) -> Q(?x).");
  EXPECT_EQ(condense(r12), rule("takesCo(?x,?y), MathCo(?y) -> Q(?x)."));
  Rule done = rule("takesCo(?x,?y), MathCo(?y) -> Q(?x).");
  EXPECT_EQ(condense(done), done);
  Rule loop = rule("R(?x,?y), R(?y,?x) -> Q(?x).");
  EXPECT_EQ(condense(loop), loop);
  EXPECT_EQ(condense(rule("A(?x), A(?y) -> false.")), rule("A(?x) -> false."));
}

TEST(Condensation, IsEquivalentToItsInput) {
  gen::Random rnd(13);
  auto sig = gen::small_signature();
  int shrunk = 0;
  for (int i = 0; i < 300; ++i) {
    Rule r = gen::random_query(rnd, sig, 1).rules[0];
    for (int k = 0; k < 2; ++k) r.body.push_back(gen::random_query(rnd, sig, 1).rules[0].body[0]);
    r.body = dedup_atoms(r.body);
    Rule c = condense(r);
    EXPECT_TRUE(subsumes(c, r)) << serialize(r);
    EXPECT_TRUE(subsumes(r, c)) << serialize(r);
    EXPECT_LE(c.body.size(), r.body.size());
    shrunk += c.body.size() < r.body.size();
  }
  EXPECT_GT(shrunk, 10);
}

TEST(Minimize, Examples) {
  Rewriting big = fixture::rewriting("ex3_28/rewriting.rules");
  Rewriting small = fixture::rewriting("ex3_26/rewriting.rules");
  Rewriting got = minimize_ucq(big);
  EXPECT_EQ(got.query.rules, small.query.rules);
  EXPECT_EQ(got.bottom, small.bottom);

  EXPECT_EQ(minimize_ucq(small).query.rules, small.query.rules);

  Rewriting twins;
  twins.query = parse_query("#query Q/1.\nR(?x,?y) -> Q(?x).\nR(?x,?z) -> Q(?x).");
  auto kept = minimize_ucq(twins).query.rules;
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0], twins.query.rules[0]);

  Rewriting with_data;
  with_data.data = parse_rules("A(?x) -> B(?x).");
  EXPECT_THROW(minimize_ucq(with_data), Error);
}

TEST(Minimize, PreservesCertainAnswers) {
  gen::Random rnd(21);
  auto sig = gen::small_signature();
  gen::RuleShape falsum{true, false, false, 2};
  for (int i = 0; i < 30; ++i) {
    Rewriting rw;
    rw.query = gen::random_query(rnd, sig, 1);
    for (int k = 0; k < 3; ++k) {
      rw.query.rules.push_back(gen::random_query(rnd, sig, 1).rules[0]);
    }
    Rule b = gen::random_rule(rnd, sig, falsum);
    b.head.clear();
    rw.bottom.push_back(b);
    Rewriting min = minimize_ucq(rw);
    for (int k = 0; k < 100; ++k) {
      ABox a = gen::random_abox(rnd, sig, 3, 5);
      EXPECT_EQ(certain_answers(rw.query, rw.bottom, a), certain_answers(min.query, min.bottom, a));
    }
  }
}

TEST(DedupIsomorphic, Examples) {
  ABox a{atom("takesCo", {"c", "d"}), atom("MathCo", {"d"})};
  ABox b{atom("takesCo", {"d", "c"}), atom("MathCo", {"c"})};
  UCQ q = fixture::query("ex3_14/query.q");
  TestSuite s;
  s.tests = {{b, q}, {a, q}};
  auto d = dedup_isomorphic(s, {});
  ASSERT_EQ(d.tests.size(), 1u);
  EXPECT_EQ(d.tests[0].abox, b);  // least serialization

  TestSuite ex316;
  ex316.tests = {{fixture::abox("ex3_16/a1.abox"), q}, {fixture::abox("ex3_16/a2.abox"), q}};
  EXPECT_EQ(dedup_isomorphic(ex316, {}).tests.size(), 2u);

  EXPECT_EQ(dedup_isomorphic(TestSuite{}, {}).size(), 0u);

  // Same shape, different role: never merged.
  TestSuite roles;
  roles.unsat = {a};
  roles.tests = {{b, q}};
  EXPECT_EQ(dedup_isomorphic(roles, {}).size(), 2u);
  // A fixed constant blocks the swap.
  TestSuite fixed;
  fixed.tests = {{a, q}, {b, q}};
  EXPECT_EQ(dedup_isomorphic(fixed, {"c"}).tests.size(), 2u);
}
