// Test-suite generation from rewritings, and suite validation.
#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "certkit/chase.hpp"
#include "certkit/model.hpp"
#include "certkit/syntax.hpp"

namespace certkit {

// sigma-image of the body of r. Throws Error if a body variable is unmapped
// or mapped to a variable.
ABox instantiation_abox(const Rule& r, const Substitution& sigma);

struct FullOptions {
  ChaseBudget budget;
  bool dedup = true;  // keep one ABox per isomorphism class
  std::size_t jobs = 1;
};

// Every substitution of rule variables into the fixed individuals (constants
// of the rewriting, Q and T) plus m fresh ones, m being the largest number of
// variables in one rule. S_Q entries unsatisfiable w.r.t. R_bottom are dropped.
// Query tests are paired with the original query, not with R_Q.
TestSuite full_instantiation(const Rewriting& rw, const UCQ& query,
                             const std::vector<Rule>& tbox, const FullOptions& opts = {});

// Number of candidate ABoxes of the full instantiation before filtering and
// deduplication, per part: {bottom, query}.
std::pair<std::size_t, std::size_t> full_instantiation_size(const Rewriting& rw,
                                                            const UCQ& query,
                                                            const std::vector<Rule>& tbox);

// One ABox per rule, each variable of the rewriting mapped to its own fresh
// individual. Requires an empty data part.
TestSuite injective_instantiation_ucq(const Rewriting& rw, const UCQ& query,
                                      const ChaseBudget& budget = {});

// As above, plus one test per data rule: the instantiated body paired with
// the Boolean query over Qprime whose CQs are the instantiated head disjuncts.
// Query and data tests are kept only when R_D and R_bottom leave them satisfiable.
TestSuite injective_instantiation_datalog(const Rewriting& rw, const UCQ& query,
                                          const ChaseBudget& budget = {});

// Suite for a rewriting without query rules; every head variable of a data
// rule must occur in its body. All resulting queries are ground.
TestSuite ground_instantiation(const Rewriting& rw, const ChaseBudget& budget = {});

struct ValidationEntry {
  std::string id;
  Tri unsat = Tri::Unknown;  // observed with the TBox
  bool valid = false;        // unsat expected for S_bottom, sat for tests
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  bool ok() const;            // every entry valid
  bool inconclusive() const;  // some entry ran out of budget
};

ValidationReport validate_suite(const TestSuite& suite, const std::vector<Rule>& tbox,
                                const ChaseBudget& budget = {}, std::size_t jobs = 1);

}  // namespace certkit
