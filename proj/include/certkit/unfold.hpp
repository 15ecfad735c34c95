// Unfolding of data rules into query rules: single steps, breadth-first
// closure, and subset-closed UCQ rewritings.
#pragma once

#include <cstddef>
#include <vector>

#include "certkit/model.hpp"
#include "certkit/syntax.hpp"

namespace certkit {

// Resolves q (CQ-shaped or falsum) against d. A datalog d replaces one body
// atom unifying with a head atom. A d with one existential disjunct replaces
// a set of body atoms S at once, provided each existential variable unifies
// only with a distinct variable of q that occurs nowhere outside S.
// Outputs are condensed, canonicalized, and free of alpha-duplicates.
std::vector<Rule> unfold_step(const Rule& q, const Rule& d);

struct UnfoldResult {
  std::vector<Rule> rules;
  std::vector<std::size_t> depth;  // unfolding depth of each rule
  bool closed = false;
};

struct UnfoldOptions {
  std::size_t max_rules = 1000;
  // Stop after this many levels; closed then reports whether the last level was empty.
  std::size_t max_depth = static_cast<std::size_t>(-1);
  // Skip new rules subsumed by an earlier one. Without it only alpha-duplicates are skipped.
  bool prune = true;
};

// Breadth-first closure of `queries` under unfold_step against `data`, in
// generation order. Data rules must have a single disjunct.
UnfoldResult unfold_levels(const std::vector<Rule>& data, const std::vector<Rule>& queries,
                           const UnfoldOptions& opts = {});

// closed = fixpoint reached within `bound` rules. A closed result is reduced
// by subsumption; an open one is the generation-order prefix of length bound.
UnfoldResult exhaustive_unfold(const std::vector<Rule>& data, const UCQ& query,
                               std::size_t bound);

// Union over all axiom subsets T' of the closed unfolding of Q and of the
// falsum rules of T'. Only alpha-duplicates are removed across subsets.
// Throws Error naming the first subset whose unfolding does not close.
Rewriting subset_closed_rewriting(const std::vector<TaggedRule>& tbox, const UCQ& query,
                                  std::size_t bound);

}  // namespace certkit
