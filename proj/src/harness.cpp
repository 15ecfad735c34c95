#include "certkit/harness.hpp"

#include <algorithm>
#include <sstream>

#include "certkit/instantiate.hpp"
#include "certkit/parallel.hpp"
#include "certkit/syntax.hpp"
#include "certkit/unfold.hpp"

namespace certkit {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::GuaranteedComplete: return "GuaranteedComplete";
    case Verdict::NotComplete: return "NotComplete";
    case Verdict::NotGuaranteed: return "NotGuaranteed";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

int exit_code(Verdict v) { return static_cast<int>(v); }

const char* to_string(TestKind k) {
  switch (k) {
    case TestKind::Unsat: return "unsat";
    case TestKind::Query: return "query";
    case TestKind::Auxiliary: return "aux";
  }
  return "?";
}

namespace {

// Certain answers against the TBox or, when given, the rewriting.
class CertBasis {
 public:
  CertBasis(const std::vector<Rule>& tbox, const RunOptions& opts) : opts_(opts) {
    if (opts.rewriting) {
      const Rewriting& rw = *opts.rewriting;
      program_ = rw.data;
      program_.insert(program_.end(), rw.bottom.begin(), rw.bottom.end());
      name_ = "rewriting";
    } else {
      program_ = tbox;
      name_ = "tbox";
    }
  }

  const std::string& name() const { return name_; }

  Tri unsat(const ABox& a) const { return unsat_tri(with_equality(program_), a, opts_.budget); }

  std::optional<AnswerSet> cert(const UCQ& q, const ABox& a) const {
    const UCQ* y = &q;
    if (opts_.rewriting && q.predicate == opts_.rewriting->query.predicate) {
      y = &opts_.rewriting->query;
    }
    return try_certain_answers(*y, with_equality(program_, signature(y->rules)), a,
                               opts_.budget);
  }

 private:
  const RunOptions& opts_;
  std::vector<Rule> program_;
  std::string name_;
};

std::vector<Tuple> missing_from(const AnswerSet& cert, const AnswerSet& got) {
  std::vector<Tuple> out;
  for (const auto& t : cert) {
    if (!got.count(t)) out.push_back(t);
  }
  return out;
}

void add_note(std::string& note, const std::string& more) {
  if (more.empty()) return;
  note = note.empty() ? more : note + "; " + more;
}

TestOutcome run_unsat(const Reasoner& r, const std::vector<Rule>& tbox, const ABox& a,
                      const CertBasis& basis) {
  TestOutcome o;
  o.kind = TestKind::Unsat;
  UnsatResult u = r.check_unsat(tbox, a);
  o.reported_unsat = u.value;
  add_note(o.note, u.note);
  if (u.value == Tri::True) {
    o.outcome = Outcome::Pass;
  } else if (u.value == Tri::False) {
    Tri ref = basis.unsat(a);
    if (ref == Tri::True) {
      o.outcome = Outcome::Fail;
      add_note(o.note, "unsatisfiable ABox reported satisfiable");
    } else {
      add_note(o.note, ref == Tri::False ? "ABox is satisfiable; invalid test"
                                         : "chase budget exceeded");
    }
  }
  return o;
}

TestOutcome run_query(const Reasoner& r, const std::vector<Rule>& tbox, const QueryTest& t,
                      const CertBasis& basis) {
  TestOutcome o;
  o.kind = t.query.predicate == kQprime ? TestKind::Auxiliary : TestKind::Query;
  UnsatResult u = r.check_unsat(tbox, t.abox);
  o.reported_unsat = u.value;
  add_note(o.note, u.note);
  if (u.value == Tri::True) {
    o.outcome = Outcome::Pass;
    return o;
  }
  if (u.value == Tri::Unknown) return o;
  AnswerResult ans = r.answer(t.query, tbox, t.abox);
  add_note(o.note, ans.note);
  if (!ans.answers) return o;
  auto cert = basis.cert(t.query, t.abox);
  if (!cert) {
    add_note(o.note, "chase budget exceeded");
    return o;
  }
  o.missing = missing_from(*cert, *ans.answers);
  o.outcome = o.missing.empty() ? Outcome::Pass : Outcome::Fail;
  return o;
}

// Runs the failing test again on both sides before it is reported as a witness.
bool confirm(const Reasoner& r, const std::vector<Rule>& tbox, const TestSuite& suite,
             const SuiteEntry& e, const TestOutcome& o, const CertBasis& basis) {
  if (e.unsat) {
    return basis.unsat(suite.unsat[e.index]) == Tri::True &&
           r.check_unsat(tbox, suite.unsat[e.index]).value == Tri::False;
  }
  const QueryTest& t = suite.tests[e.index];
  if (r.check_unsat(tbox, t.abox).value != Tri::False) return false;
  auto ans = r.answer(t.query, tbox, t.abox).answers;
  auto cert = basis.cert(t.query, t.abox);
  if (!ans || !cert) return false;
  const Tuple& tp = o.missing.front();
  return cert->count(tp) && !ans->count(tp);
}

SuiteReport execute(const Reasoner& r, const std::vector<Rule>& tbox, const TestSuite& suite,
                    const RunOptions& opts, bool ground) {
  CertBasis basis(tbox, opts);
  std::vector<SuiteEntry> order = suite_entries(suite);
  SuiteReport rep;
  rep.reasoner = r.name();
  rep.basis = basis.name();
  rep.tests.resize(order.size());
  parallel_for(order.size(), opts.jobs, [&](std::size_t i) {
    const SuiteEntry& e = order[i];
    rep.tests[i] = e.unsat ? run_unsat(r, tbox, suite.unsat[e.index], basis)
                           : run_query(r, tbox, suite.tests[e.index], basis);
    rep.tests[i].id = e.id;
  });

  std::size_t inconclusive = 0;
  bool aux_failed = false;
  for (std::size_t i = 0; i < order.size(); ++i) {
    TestOutcome& o = rep.tests[i];
    if (o.outcome == Outcome::Inconclusive) ++inconclusive;
    if (o.outcome != Outcome::Fail) continue;
    bool conclusive = ground || o.kind != TestKind::Auxiliary;
    if (!conclusive) {
      aux_failed = true;
      continue;
    }
    if (rep.witness) continue;
    if (!confirm(r, tbox, suite, order[i], o, basis)) {
      o.outcome = Outcome::Inconclusive;
      add_note(o.note, "failure did not reproduce");
      ++inconclusive;
      continue;
    }
    const SuiteEntry& e = order[i];
    Witness w;
    w.id = o.id;
    if (e.unsat) {
      w.abox = suite.unsat[e.index];
    } else {
      w.abox = suite.tests[e.index].abox;
      w.query = suite.tests[e.index].query;
      w.missing = o.missing.front();
    }
    rep.witness = std::move(w);
  }

  if (rep.witness) {
    rep.verdict = Verdict::NotComplete;
    rep.summary = ground ? "not (Q,T)-complete for some ground UCQ; counterexample " +
                               rep.witness->id
                         : "not (Q,T)-complete; counterexample " + rep.witness->id;
  } else if (aux_failed) {
    rep.verdict = Verdict::NotGuaranteed;
    rep.summary = "an auxiliary test failed; (Q,T)-completeness is neither shown nor refuted";
  } else if (inconclusive > 0) {
    rep.verdict = Verdict::Inconclusive;
    rep.summary = std::to_string(inconclusive) + " test(s) inconclusive";
  } else {
    rep.verdict = Verdict::GuaranteedComplete;
    rep.summary = ground ? "complete for all ground UCQs w.r.t. T"
                         : "passed all " + std::to_string(order.size()) +
                               " tests; (Q,T)-complete if the reasoner is in the class the "
                               "suite is exhaustive for";
  }
  return rep;
}

std::string witness_column(const TestOutcome& o) {
  if (o.outcome != Outcome::Fail) return "";
  if (o.kind == TestKind::Unsat) return "*";
  std::string s;
  for (std::size_t i = 0; i < o.missing.size(); ++i) {
    if (i) s += ' ';
    s += "(" + serialize(o.missing[i]) + ")";
  }
  return s;
}

std::string tsv_field(std::string s) {
  for (auto& c : s) {
    if (c == '\t' || c == '\n') c = ' ';
  }
  return s;
}

}  // namespace

SuiteReport run_suite(const Reasoner& r, const std::vector<Rule>& tbox, const TestSuite& suite,
                      const RunOptions& opts) {
  return execute(r, tbox, suite, opts, false);
}

SuiteReport ground_verdict(const Reasoner& r, const std::vector<Rule>& tbox,
                           const TestSuite& suite, const RunOptions& opts) {
  return execute(r, tbox, suite, opts, true);
}

std::string format_report(const SuiteReport& rep) {
  std::ostringstream out;
  out << "reasoner: " << rep.reasoner << "\n";
  out << "certain answers from: " << rep.basis << "\n";
  for (const auto& t : rep.tests) {
    out << "  " << t.id << " [" << to_string(t.kind) << "] " << to_string(t.outcome);
    std::string w = witness_column(t);
    if (!w.empty()) out << " missing " << w;
    if (!t.note.empty()) out << " (" << t.note << ")";
    out << "\n";
  }
  out << "verdict: " << to_string(rep.verdict) << ": " << rep.summary << "\n";
  if (rep.witness) {
    out << "witness: " << rep.witness->id << " " << inline_abox(rep.witness->abox);
    if (rep.witness->missing) {
      out << " misses (" << serialize(*rep.witness->missing) << ")";
    } else {
      out << " is unsatisfiable";
    }
    out << "\n";
  }
  return out.str();
}

std::string report_tsv(const SuiteReport& rep) {
  std::string out = "test-id\tkind\toutcome\twitness-tuple\tnotes\n";
  for (const auto& t : rep.tests) {
    out += t.id + "\t" + to_string(t.kind) + "\t" + to_string(t.outcome) + "\t" +
           witness_column(t) + "\t" + tsv_field(t.note) + "\n";
  }
  return out;
}

SearchResult incompleteness_search(const Reasoner& r, const std::vector<Rule>& data,
                                   const UCQ& query, const std::vector<Rule>& tbox,
                                   const SearchOptions& opts) {
  for (const auto& d : data) {
    if (!d.is_plain_datalog()) throw Error("search needs plain datalog rules: " + serialize(d));
  }
  UnfoldOptions uo;
  uo.max_depth = opts.max_depth;
  uo.max_rules = opts.max_rules;
  uo.prune = false;
  UnfoldResult levels = unfold_levels(data, query.rules, uo);

  std::set<std::string> avoid = constants(tbox);
  for (const auto& c : constants(data)) avoid.insert(c);
  for (const auto& c : constants(query)) avoid.insert(c);
  std::vector<Rule> theory = with_equality(tbox, signature(query.rules));

  SearchResult res;
  for (std::size_t i = 0; i < levels.rules.size(); ++i) {
    const Rule& cq_rule = levels.rules[i];
    res.depth_reached = std::max(res.depth_reached, levels.depth[i]);
    Substitution lambda;
    std::size_t counter = 0;
    for (const auto& v : variables(cq_rule)) {
      std::string name;
      do {
        name = fresh_name(counter++);
      } while (avoid.count(name));
      lambda[v] = Term::constant(name);
    }
    ABox a = instantiation_abox(cq_rule, lambda);
    Tuple tuple;
    for (const auto& t : substitute(lambda, cq_rule.head[0].atoms[0]).args) tuple.push_back(t.name);
    ++res.checked;

    if (unsat_tri(theory, a, opts.budget) != Tri::False) {
      ++res.inconclusive;
      continue;
    }
    UnsatResult u = r.check_unsat(tbox, a);
    if (u.value != Tri::False) {
      if (u.value == Tri::Unknown) ++res.inconclusive;
      continue;
    }
    auto ans = r.answer(query, tbox, a).answers;
    if (!ans) {
      ++res.inconclusive;
      continue;
    }
    if (ans->count(tuple)) continue;
    auto cert = try_certain_answers(query, theory, a, opts.budget);
    if (!cert || !cert->count(tuple)) {
      // The rule is not entailed by the TBox; nothing follows.
      ++res.inconclusive;
      continue;
    }
    res.witness = SearchWitness{cq_rule, levels.depth[i], a, tuple};
    return res;
  }
  return res;
}

}  // namespace certkit
