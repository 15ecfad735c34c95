// Running test suites against reasoners: per-test outcomes, completeness
// verdicts with verified counterexamples, and unfolding-based search.
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "certkit/chase.hpp"
#include "certkit/model.hpp"
#include "certkit/reasoners.hpp"

namespace certkit {

enum class Outcome { Pass, Fail, Inconclusive };
enum class Verdict { GuaranteedComplete, NotComplete, NotGuaranteed, Inconclusive };

const char* to_string(Outcome o);
const char* to_string(Verdict v);
// 0, 1, 2, 3 in the order of the enumerators.
int exit_code(Verdict v);

enum class TestKind { Unsat, Query, Auxiliary };  // auxiliary: query over Qprime
const char* to_string(TestKind k);

struct TestOutcome {
  std::string id;
  TestKind kind = TestKind::Query;
  Outcome outcome = Outcome::Inconclusive;
  Tri reported_unsat = Tri::Unknown;
  std::vector<Tuple> missing;  // certain answers the reasoner did not return
  std::string note;
};

struct Witness {
  std::string id;
  ABox abox;
  UCQ query;
  std::optional<Tuple> missing;  // empty: an unsatisfiable ABox went undetected
};

struct SuiteReport {
  std::string reasoner;
  std::string basis;  // what certain answers were computed against
  std::vector<TestOutcome> tests;
  Verdict verdict = Verdict::Inconclusive;
  std::string summary;
  std::optional<Witness> witness;  // set for NotComplete, re-checked with the chase
};

struct RunOptions {
  ChaseBudget budget;
  std::size_t jobs = 1;
  // When set, certain answers come from R_D, R_bottom and R_Q instead of the TBox.
  const Rewriting* rewriting = nullptr;
};

// Entries are listed in suite order. A failed unsatisfiability test or a
// failed test over an ordinary query is a counterexample; failures of
// auxiliary tests only withdraw the guarantee.
SuiteReport run_suite(const Reasoner& r, const std::vector<Rule>& tbox, const TestSuite& suite,
                      const RunOptions& opts = {});

// For suites from ground instantiation every failure is conclusive: the
// reasoner is incomplete for some ground UCQ.
SuiteReport ground_verdict(const Reasoner& r, const std::vector<Rule>& tbox,
                           const TestSuite& suite, const RunOptions& opts = {});

std::string format_report(const SuiteReport& rep);
// Columns: test-id, kind, outcome, witness-tuple, notes.
std::string report_tsv(const SuiteReport& rep);

struct SearchWitness {
  Rule cq;  // the unfolded query rule that was instantiated
  std::size_t depth = 0;
  ABox abox;
  Tuple missing;
};

struct SearchResult {
  std::optional<SearchWitness> witness;
  std::size_t checked = 0;       // instantiated rules
  std::size_t inconclusive = 0;  // skipped for budget, timeout, or unsatisfiability
  std::size_t depth_reached = 0;
};

struct SearchOptions {
  std::size_t max_depth = 3;
  std::size_t max_rules = 10000;
  ChaseBudget budget;
};

// Breadth-first over the unfoldings of `query` by the datalog rules `data`;
// each unfolded rule is instantiated injectively and its head tuple must be
// among the reasoner's answers. No witness within the depth is no conclusion.
SearchResult incompleteness_search(const Reasoner& r, const std::vector<Rule>& data,
                                   const UCQ& query, const std::vector<Rule>& tbox,
                                   const SearchOptions& opts = {});

}  // namespace certkit
