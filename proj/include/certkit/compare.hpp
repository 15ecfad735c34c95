// Pairwise comparison of reasoners over a finite set of ABoxes.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "certkit/chase.hpp"
#include "certkit/model.hpp"
#include "certkit/reasoners.hpp"

namespace certkit {

struct AboxComparison {
  ABox abox;
  Tri cert_unsat = Tri::Unknown;
  Tri unsat1 = Tri::Unknown;
  Tri unsat2 = Tri::Unknown;
  AnswerSet cert;   // empty unless cert_unsat is False
  AnswerSet sound1; // answers of the first reasoner that are certain
  AnswerSet sound2;
  bool inconclusive = false;
  std::string note;
};

// Certain answers returned, summed over the ABoxes that have any.
struct Ratio {
  std::size_t returned = 0;
  std::size_t certain = 0;
  double value() const { return certain == 0 ? 1.0 : double(returned) / double(certain); }
};

struct CompareReport {
  std::string first, second;
  Tri leq = Tri::Unknown;
  Tri strict = Tri::Unknown;
  std::vector<AboxComparison> entries;
  std::optional<std::size_t> counterexample;  // entry violating the order
  std::optional<std::size_t> witness;         // entry separating the reasoners
  int witness_condition = 0;                  // 3: unsatisfiability, 4: answers
  Ratio ratio1, ratio2;
  bool empirical_only = false;  // some reasoner does not claim compactness
};

struct CompareOptions {
  ChaseBudget budget;
  std::size_t jobs = 1;
};

CompareReport compare_on(const std::vector<ABox>& aboxes, const UCQ& q,
                         const std::vector<Rule>& tbox, const Reasoner& r1, const Reasoner& r2,
                         const CompareOptions& opts = {});

// Injective instantiation of a subset-closed UCQ rewriting, both parts in one list.
std::vector<ABox> representative_set(const Rewriting& subset_closed, const UCQ& q,
                                     const ChaseBudget& budget = {});

std::string format_compare(const CompareReport& rep);
// One row per ABox, then summary rows.
std::string compare_tsv(const CompareReport& rep);

}  // namespace certkit
