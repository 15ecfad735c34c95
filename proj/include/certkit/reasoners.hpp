// Abstract reasoners: built-in reference reasoners, program-defined ones,
// an external-process adapter, and randomized property spot checks.
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "certkit/chase.hpp"
#include "certkit/model.hpp"

namespace certkit {

// Claimed properties; informational only.
struct Capabilities {
  bool sound = false;
  bool monotonic = false;
  bool weakly_faithful = false;
  bool strongly_faithful = false;
  bool first_order_reproducible = false;
  bool compact = false;
};

struct UnsatResult {
  Tri value = Tri::Unknown;  // Unknown: budget, timeout, or protocol error
  std::string note;
};

struct AnswerResult {
  std::optional<AnswerSet> answers;  // empty: inconclusive
  std::string note;
};

class Reasoner {
 public:
  virtual ~Reasoner() = default;
  virtual std::string name() const = 0;
  virtual Capabilities capabilities() const { return {}; }
  virtual UnsatResult check_unsat(const std::vector<Rule>& tbox, const ABox& abox) const = 0;
  // Meaningful only when check_unsat is False.
  virtual AnswerResult answer(const UCQ& q, const std::vector<Rule>& tbox,
                              const ABox& abox) const = 0;
};

using ReasonerPtr = std::shared_ptr<const Reasoner>;

// trivial, rdf, rdfs, rl, classify, rl_neq, peval (params: rounds).
ReasonerPtr make_builtin(const std::string& name, const std::string& params = "",
                         const ChaseBudget& budget = {});
// Complete reasoning over a fixed program; the input TBox is ignored.
ReasonerPtr make_program(std::vector<Rule> program, std::string label = "program",
                         const ChaseBudget& budget = {});

struct ExternalOptions {
  double timeout_seconds = 30.0;
  std::size_t max_parallel = 1;  // concurrent processes for this handle
};
// Runs `command check|answer --tbox F --abox F [--query F]` through /bin/sh.
ReasonerPtr make_external(const std::string& command, const ExternalOptions& opts = {});

// builtin:<name>[:<params>] | program:<file> | exec:<command>
ReasonerPtr make_reasoner(const std::string& spec, const ChaseBudget& budget = {},
                          const ExternalOptions& ext = {});

// Rule subsets used by the rdfs and rl reasoners.
std::vector<Rule> rdfs_fragment(const std::vector<Rule>& tbox);
std::vector<Rule> rl_fragment(const std::vector<Rule>& tbox);

enum class Property { Soundness, Monotonicity, WeakFaithfulness, StrongFaithfulness };
const char* to_string(Property p);

struct PropertyViolation {
  Property property = Property::Soundness;
  ABox abox;
  ABox other;  // the extended or renamed ABox; empty for soundness
  Renaming mu;
  std::string detail;
};

struct PropertyReport {
  std::size_t trials = 0;
  std::size_t inconclusive = 0;
  std::vector<PropertyViolation> violations;  // at most one per property
  bool violated(Property p) const;
};

struct SpotcheckOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::size_t individuals = 3;  // size of the random individual pool
  std::size_t max_facts = 4;
  std::vector<Property> properties{Property::Soundness, Property::Monotonicity,
                                   Property::WeakFaithfulness, Property::StrongFaithfulness};
  ChaseBudget budget;
};

// Randomized falsification over small ABoxes. No violation is evidence, not proof.
PropertyReport property_spotcheck(const Reasoner& r, const UCQ& q, const std::vector<Rule>& tbox,
                                  const SpotcheckOptions& opts = {});

}  // namespace certkit
