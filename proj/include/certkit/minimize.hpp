// Rule subsumption, condensation, and isomorphic-ABox deduplication.
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "certkit/model.hpp"

namespace certkit {

// sigma with sigma(head(r)) = head(r2) and sigma(body(r)) a subset of body(r2).
// Both rules must be CQ-shaped, or both falsum; throws Error otherwise.
std::optional<Substitution> subsumes(const Rule& r, const Rule& r2);

// Collapses body atoms pairwise by mgu while the result still subsumes r.
Rule condense(const Rule& r);

// Drops rules subsumed by another kept rule. On mutual subsumption the
// earlier rule survives. Input order is otherwise preserved.
std::vector<Rule> remove_subsumed(const std::vector<Rule>& rules);

// Condenses each rule of R_bottom and R_Q, then removes subsumed rules in
// each part. The rewriting must be in UCQ form.
Rewriting minimize_ucq(const Rewriting& rw);

// Keeps one ABox per isomorphism class (fixing `fixed`) within S_bottom and
// within each same-query group of tests. The kept representative has the
// least serialization; classes stay in order of first appearance.
TestSuite dedup_isomorphic(const TestSuite& suite, const std::set<std::string>& fixed);

}  // namespace certkit
