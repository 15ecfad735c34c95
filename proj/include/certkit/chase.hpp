// Budgeted disjunctive restricted chase: the complete reference reasoner.
#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "certkit/match.hpp"
#include "certkit/model.hpp"

namespace certkit {

struct ChaseBudget {
  std::size_t max_fresh = 64;
  std::size_t max_branches = 256;
  std::size_t max_rounds = 1024;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

struct Model {
  FactIndex facts;
  std::set<std::string> nulls;  // individuals invented by the chase
};

struct ModelSet {
  bool unsat = false;
  std::vector<Model> models;
};

// Throws BudgetExceeded.
ModelSet saturate(const std::vector<Rule>& program, const ABox& abox,
                  const ChaseBudget& budget = {});
bool is_unsatisfiable(const std::vector<Rule>& program, const ABox& abox,
                      const ChaseBudget& budget = {});
// For an unsatisfiable input every tuple over the named constants is returned.
AnswerSet certain_answers(const UCQ& q, const std::vector<Rule>& program, const ABox& abox,
                          const ChaseBudget& budget = {});
bool entails_rule(const std::vector<Rule>& theory, const Rule& r, const ChaseBudget& budget = {});

// Tri-state wrappers: Unknown when the budget runs out.
Tri unsat_tri(const std::vector<Rule>& program, const ABox& abox, const ChaseBudget& budget = {});
std::optional<AnswerSet> try_certain_answers(const UCQ& q, const std::vector<Rule>& program,
                                             const ABox& abox, const ChaseBudget& budget = {});

// Appends the equality axioms when eq or neq occurs in the program or in
// `extra`, unless they are already present.
std::vector<Rule> with_equality(const std::vector<Rule>& program, const Signature& extra = {});

// All tuples of the given arity over the constants.
AnswerSet all_tuples(const std::set<std::string>& constants, std::size_t arity);

struct RuleCheck {
  std::string section;  // data | bottom
  std::size_t index = 0;
  Rule rule;
  Tri entailed = Tri::Unknown;
};

struct VerificationReport {
  std::vector<std::string> structural_errors;
  std::vector<RuleCheck> checks;
  // Only T |= R_D and T |= R_bottom are checked; equivalence over all ABoxes is not.
  static constexpr const char* kScope = "soundness-only verification";

  bool ok() const;
};

VerificationReport verify_rewriting(const Rewriting& rw, const std::vector<Rule>& tbox,
                                    const ChaseBudget& budget = {});

}  // namespace certkit
